#pragma once

// Brute-force cross-check of fixed lattices: enumerate every exponent vector
// in the box [-d, d]^k, keep the invariant ones, and compare the lattice they
// generate with the one computed from the kernel of the fixed-point system.

#include <cstdint>
#include <string>
#include <vector>

#include "noether/intmat.hpp"
#include "noether/monomial.hpp"

namespace noether::oracle {

using zlat::IntVec;

struct OracleResult {
  bool agrees = false;
  std::size_t invariant_count = 0;  // invariant vectors found in the box
  std::size_t rank = 0;
  std::string reason;
};

inline std::vector<IntVec> invariant_vectors_in_box(const std::vector<mono::MonomialAutomorphism>& auts,
                                                    std::size_t rank, std::int64_t bound) {
  std::vector<IntVec> out;
  IntVec e(rank, -bound);
  if (rank == 0) return out;
  for (;;) {
    bool inv = true;
    for (const auto& g : auts)
      if (!mono::is_invariant(g, e)) {
        inv = false;
        break;
      }
    if (inv) out.push_back(e);
    std::size_t i = 0;
    while (i < rank && e[i] == bound) e[i++] = -bound;
    if (i == rank) break;
    ++e[i];
  }
  return out;
}

/// Agreement means every invariant box vector lies in the computed lattice and
/// the box vectors generate all of it.
inline OracleResult compare_fixed_lattice(const std::vector<mono::MonomialAutomorphism>& auts, std::size_t rank,
                                          std::int64_t bound) {
  OracleResult r;
  if (rank > 4) {
    r.reason = "rank above 4, oracle not run";
    return r;
  }
  auto box = invariant_vectors_in_box(auts, rank, bound);
  r.invariant_count = box.size();
  auto computed = mono::fixed_lattice(auts, rank);
  if (!zlat::lattice_contains(computed, box, rank)) {
    r.reason = "an invariant box vector lies outside the computed lattice";
    return r;
  }
  auto gen = zlat::hermite_basis(box, rank);
  r.rank = gen.size();
  if (gen.size() != computed.size()) {
    r.reason = "box vectors span rank " + std::to_string(gen.size()) + ", computed rank " +
               std::to_string(computed.size());
    return r;
  }
  if (!computed.empty() && zlat::sublattice_index(computed, gen, rank) != 1) {
    r.reason = "box vectors generate a proper sublattice";
    return r;
  }
  r.agrees = true;
  return r;
}

}  // namespace noether::oracle
