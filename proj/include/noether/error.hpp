#pragma once

#include <stdexcept>
#include <string>

namespace noether {

/// Invalid (list, family, p, n) combination or out-of-range configuration.
class ParameterRangeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Coset enumeration or a bounded search ran past its configured limit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction produced something structurally unusable: a zero
/// eigenvector, a non-monomial image, an unstable sublattice, and so on.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// int64 arithmetic left the representable range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace noether
