#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pertalg {

/* A single verified identity. On failure the witness names the first
 * offending term in canonical order: a word (or matrix entry, or tensor
 * tuple), its coefficient, and the x-count or arity where it lives
 * (negative when not applicable). */
struct Witness {
  std::string term;
  std::string coeff;
  int x_count = -1;
};

struct IdentityReport {
  std::string id;
  bool pass = false;
  int cap = -1;
  std::optional<Witness> witness;
};

inline bool all_pass(const std::vector<IdentityReport>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

}  // namespace pertalg
