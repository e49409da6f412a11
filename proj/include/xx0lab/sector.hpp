#pragma once

// Particle-number sector bookkeeping. The m-particle sector of an n-site
// chain is spanned by the basis masks with popcount m; within a sector the
// masks are ordered by increasing numeric value and indexed by rank.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "xx0lab/pauli.hpp"

namespace xx0lab {

struct SectorTable {
  int n = 0;
  std::vector<std::vector<std::uint32_t>> masks;  // [m] -> ascending masks
  std::vector<int> rank;                          // mask -> row within its sector

  explicit SectorTable(int n_) : n(n_) {
    check_qubit_count(n);
    if (n > 20) throw std::invalid_argument("SectorTable: n too large");
    const std::uint32_t d = 1u << n;
    masks.resize(n + 1);
    rank.resize(d);
    for (std::uint32_t mask = 0; mask < d; ++mask) {
      const int m = std::popcount(mask);
      rank[mask] = static_cast<int>(masks[m].size());
      masks[m].push_back(mask);
    }
  }

  int sector_dim(int m) const { return static_cast<int>(masks[m].size()); }
};

/// Occupied sites (ascending, 1-based) of a basis mask; site 1 is the MSB.
inline std::vector<int> sites_of_mask(std::uint32_t mask, int n) {
  std::vector<int> xs;
  for (int site = 1; site <= n; ++site)
    if ((mask >> (n - site)) & 1u) xs.push_back(site);
  return xs;
}

inline std::uint32_t mask_of_sites(const std::vector<int>& xs, int n) {
  std::uint32_t mask = 0;
  for (int x : xs) mask |= (1u << (n - x));
  return mask;
}

}  // namespace xx0lab
