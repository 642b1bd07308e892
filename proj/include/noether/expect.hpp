#pragma once

// Expected action tables, written down from the printed formulas, and their
// symbol-for-symbol comparison with computed actions.

#include <json.hpp>

#include <cctype>
#include <string>
#include <vector>

#include "noether/error.hpp"
#include "noether/monomial.hpp"

namespace noether::expect {

using mono::MonomialAutomorphism;
using mono::MonomialGroupAction;
using zlat::IntVec;

/// "u1^2*u3^-1" or "1" -> exponent vector over `vars`.
inline IntVec parse_monomial(const std::string& s, const std::vector<std::string>& vars) {
  IntVec e(vars.size(), 0);
  if (s == "1") return e;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find('*', pos);
    std::string factor = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    std::string name = factor;
    std::int64_t k = 1;
    if (auto c = factor.find('^'); c != std::string::npos) {
      name = factor.substr(0, c);
      k = std::stoll(factor.substr(c + 1));
    }
    bool found = false;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name) {
        e[i] += k;
        found = true;
      }
    if (!found) throw std::invalid_argument("parse_monomial: unknown variable '" + name + "' in " + s);
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return e;
}

/// One image "x -> zeta_m^k * monomial".
struct Image {
  std::int64_t k = 0;
  std::string monomial;
};

/// Builds an automorphism from one image per variable (in variable order).
inline MonomialAutomorphism automorphism(const std::vector<Image>& imgs, const std::vector<std::string>& vars,
                                         std::int64_t m) {
  if (imgs.size() != vars.size()) throw std::invalid_argument("expect::automorphism: arity");
  std::vector<std::pair<IntVec, std::int64_t>> v;
  for (const auto& im : imgs) v.emplace_back(parse_monomial(im.monomial, vars), im.k);
  return MonomialAutomorphism::from_images(v, m);
}

struct Comparison {
  bool match = true;
  nlohmann::ordered_json witness = nlohmann::ordered_json::object();
};

/// Per generator: equal matrices and equal scalars after lifting to a common
/// modulus. Generators missing from `expected` are not compared.
inline Comparison compare(const MonomialGroupAction& computed, const std::vector<std::string>& gen_names,
                          const std::vector<MonomialAutomorphism>& expected) {
  Comparison c;
  for (std::size_t i = 0; i < gen_names.size(); ++i) {
    const auto& got = computed.gen(gen_names[i]);
    bool ok = got == expected[i];
    c.witness[gen_names[i]] = {{"computed", got.str(computed.vars)}, {"expected", expected[i].str(computed.vars)},
                               {"match", ok}};
    if (!ok) c.match = false;
  }
  return c;
}

}  // namespace noether::expect
