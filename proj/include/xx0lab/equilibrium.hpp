#pragma once

// Finite-n subspace of thermodynamic equilibrium: the span of eigenstates
// whose empirical momentum density is close (L1 over bins) to the
// equilibrium profile theta/2pi. The (B, tau) closeness rule is the finite-n
// proxy for the variational selection that defines the subspace in the
// n -> infinity limit; an alternative scorer maximizing the entropy-minus-
// energy functional is kept for cross-validation.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "xx0lab/thermo.hpp"
#include "xx0lab/xx0.hpp"

namespace xx0lab {

enum class SelectionRule { density_distance, variational };

struct SelectedMember {
  EigenState state;
  double score = 0.0;
};

struct EquilibriumSubspace {
  int n = 0;
  ThermoParams params;
  int bins = 0;
  double tol = 0.0;
  SelectionRule rule = SelectionRule::density_distance;
  std::vector<SelectedMember> members;  // sorted by score, ascending

  int dim() const { return static_cast<int>(members.size()); }
};

class EmptySelectionError : public std::runtime_error {
 public:
  double min_score;
  EmptySelectionError(double min_score_, double tol_)
      : std::runtime_error("empty equilibrium selection: minimal achievable distance " +
                           std::to_string(min_score_) + " exceeds tolerance " +
                           std::to_string(tol_)),
        min_score(min_score_) {}
};

inline int default_bins(int n) { return n / 4; }
inline constexpr double kDefaultSelectionTol = 0.15;

namespace detail {

struct ScoredSet {
  int m;
  std::uint32_t slot_mask;
  double score;  // raw functional for the variational rule, distance otherwise
};

template <typename ScoreFn>
void enumerate_momentum_sets(int n, ScoreFn&& score_of, std::vector<ScoredSet>& out) {
  out.reserve(std::size_t(1) << n);
  for (int m = 0; m <= n; ++m) {
    if (m == 0) {
      out.push_back({0, 0u, score_of(0, 0u)});
      continue;
    }
    std::uint32_t mask = (1u << m) - 1u;
    const std::uint32_t end = 1u << n;
    while (mask < end) {
      out.push_back({m, mask, score_of(m, mask)});
      const std::uint32_t c = mask & (~mask + 1u);
      const std::uint32_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }
}

}  // namespace detail

/// Scans all 2^n momentum sets and keeps those within `tau` of equilibrium
/// (boundary ties included). Deterministic: enumeration is by (m, slot mask)
/// and the final sort by score is stable. Throws EmptySelectionError with
/// the minimal achievable distance when nothing qualifies.
inline EquilibriumSubspace select_equilibrium_subspace(
    int n, const ThermoParams& params, int B, double tau,
    SelectionRule rule = SelectionRule::density_distance, int cap = kDenseCap) {
  check_qubit_count(n);
  if (n > cap)
    throw std::invalid_argument("select_equilibrium_subspace: n exceeds the cap");
  require_positive_temperature(params);
  if (B < 1 || 4 * B > n)
    throw std::invalid_argument("select_equilibrium_subspace: need 1 <= B <= n/4");

  const auto rho_eq = equilibrium_rho(params, B);
  // Per-parity slot -> bin maps and spin-wave energies.
  std::vector<std::vector<int>> slot_bin(2);
  std::vector<std::vector<double>> slot_eps(2);
  for (MParity par : {MParity::even, MParity::odd}) {
    const int pi = (par == MParity::even) ? 0 : 1;
    const auto twice = detail::momentum_grid_twice(n, par);
    const auto grid = momentum_grid(n, par);
    slot_bin[pi].resize(n);
    slot_eps[pi].resize(n);
    for (int i = 0; i < n; ++i) {
      slot_bin[pi][i] = detail::bin_of_twice(twice[i], n, B);
      slot_eps[pi][i] = epsilon(grid[i], params.h);
    }
  }
  const double binwidth = 2.0 * kPi / B;
  std::vector<double> target(B);  // n * width * rho_eq
  for (int b = 0; b < B; ++b) target[b] = n * binwidth * rho_eq.values[b];

  std::vector<detail::ScoredSet> scored;
  std::vector<int> counts(B);
  const double rho_cap = 1.0 / (2.0 * kPi);

  auto score_density = [&](int m, std::uint32_t slot_mask) {
    const int pi = (m % 2 == 0) ? 0 : 1;
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < n; ++i)
      if ((slot_mask >> i) & 1u) ++counts[slot_bin[pi][i]];
    double dist = 0.0;
    for (int b = 0; b < B; ++b) dist += std::abs(counts[b] - target[b]);
    return dist / n;
  };
  auto functional = [&](int m, std::uint32_t slot_mask) {
    // entropy-of-profile minus energy density over T, to be maximized.
    const int pi = (m % 2 == 0) ? 0 : 1;
    std::fill(counts.begin(), counts.end(), 0);
    double esum = 0.0;
    for (int i = 0; i < n; ++i)
      if ((slot_mask >> i) & 1u) {
        ++counts[slot_bin[pi][i]];
        esum += slot_eps[pi][i];
      }
    double s = 0.0;
    for (int b = 0; b < B; ++b) {
      const double r = std::clamp(counts[b] / (n * binwidth), 0.0, rho_cap);
      s += binwidth *
           (detail::xlog2x(rho_cap) - detail::xlog2x(r) - detail::xlog2x(rho_cap - r));
    }
    return s - esum / (n * params.T);
  };

  if (rule == SelectionRule::density_distance) {
    detail::enumerate_momentum_sets(n, score_density, scored);
  } else {
    detail::enumerate_momentum_sets(n, functional, scored);
    double fmax = scored.front().score;
    for (const auto& s : scored) fmax = std::max(fmax, s.score);
    for (auto& s : scored) s.score = fmax - s.score;  // gap from the optimum
  }

  EquilibriumSubspace sub;
  sub.n = n;
  sub.params = params;
  sub.bins = B;
  sub.tol = tau;
  sub.rule = rule;
  double min_score = scored.front().score;
  for (const auto& s : scored) min_score = std::min(min_score, s.score);
  for (const auto& s : scored) {
    if (s.score <= tau) {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if ((s.slot_mask >> i) & 1u) idx.push_back(i);
      sub.members.push_back(
          {build_eigenstate(n, params.h, MomentumSet::from_indices(n, idx)), s.score});
    }
  }
  if (sub.members.empty()) throw EmptySelectionError(min_score, tau);
  std::stable_sort(sub.members.begin(), sub.members.end(),
                   [](const SelectedMember& a, const SelectedMember& b) {
                     return a.score < b.score;
                   });
  return sub;
}

/// n * S: log2 of the asymptotic dimension of the equilibrium subspace.
inline double dimension_estimate(int n, const ThermoParams& params) {
  return n * entropy_density(params);
}

/// 2^(-E/T) / Z for one eigenstate (spin-wave energies on both sides).
inline double boltzmann_probability(const EigenState& state, int n, const ThermoParams& params) {
  const double log2z = log2_partition_function(n, params);
  return std::exp2(-state.spinwave_energy / params.T - log2z);
}

/// Aggregate Boltzmann mass of the selected subspace.
inline double boltzmann_mass(const EquilibriumSubspace& sub) {
  const double log2z = log2_partition_function(sub.n, sub.params);
  double mass = 0.0;
  for (const auto& mem : sub.members)
    mass += std::exp2(-mem.state.spinwave_energy / sub.params.T - log2z);
  return mass;
}

/// Sector-packed orthonormal basis of an equilibrium subspace: members are
/// grouped by particle number, each group stored as a dense matrix over its
/// sector's basis masks, columns normalized. This keeps memory at
/// sum_m C(n,m) * l_m entries and lets expectation grids run as GEMMs.
class PackedSubspace {
 public:
  struct Block {
    int m = 0;
    int col0 = 0;                  // first packed column of this block
    std::vector<int> member_ids;   // packed column -> member index
    Eigen::MatrixXcd V;            // sector_dim(m) x block size, unit columns
  };

  int n = 0;
  SectorTable table;
  std::vector<Block> blocks;

  explicit PackedSubspace(const EquilibriumSubspace& sub) : n(sub.n), table(sub.n) {
    std::map<int, std::vector<int>> by_m;
    for (int j = 0; j < sub.dim(); ++j) by_m[sub.members[j].state.m()].push_back(j);
    int col0 = 0;
    for (const auto& [m, ids] : by_m) {
      Block blk;
      blk.m = m;
      blk.col0 = col0;
      blk.member_ids = ids;
      blk.V.resize(table.sector_dim(m), static_cast<int>(ids.size()));
      for (std::size_t c = 0; c < ids.size(); ++c) {
        Eigen::VectorXcd amp = sub.members[ids[c]].state.sector_amplitudes();
        blk.V.col(c) = amp / amp.norm();
      }
      col0 += static_cast<int>(ids.size());
      blocks.push_back(std::move(blk));
    }
    total_ = col0;
    member_col_.resize(sub.dim());
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::size_t c = 0; c < blocks[b].member_ids.size(); ++c)
        member_col_[blocks[b].member_ids[c]] = {static_cast<int>(b), static_cast<int>(c)};
  }

  int size() const { return total_; }

  /// Full 2^n vector of a normalized member.
  StateVector member_vector(int member) const {
    const auto [b, c] = member_col_.at(member);
    StateVector v;
    v.n = n;
    v.amp = Eigen::VectorXcd::Zero(std::int64_t(1) << n);
    const auto& blk = blocks[b];
    const auto& masks = table.masks[blk.m];
    for (std::size_t r = 0; r < masks.size(); ++r) v.amp[masks[r]] = blk.V(r, c);
    return v;
  }

  /// Linear combination sum_j coeffs[j] |member_j>, as a full vector.
  StateVector assemble(const Eigen::VectorXcd& coeffs) const {
    if (coeffs.size() != total_) throw std::invalid_argument("assemble: coefficient size");
    StateVector v;
    v.n = n;
    v.amp = Eigen::VectorXcd::Zero(std::int64_t(1) << n);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& blk = blocks[b];
      const auto& masks = table.masks[blk.m];
      for (std::size_t c = 0; c < blk.member_ids.size(); ++c) {
        const cdouble g = coeffs[blk.member_ids[c]];
        if (g == cdouble(0.0)) continue;
        for (std::size_t r = 0; r < masks.size(); ++r) v.amp[masks[r]] += g * blk.V(r, c);
      }
    }
    return v;
  }

  /// <member| O |member> / <member|member>, evaluated inside the member's
  /// sector (cross-sector images of O cannot overlap the same member).
  cdouble member_expectation(const LocalOperator& op, int member) const {
    const auto [b, c] = member_col_.at(member);
    const auto& blk = blocks[b];
    const auto& masks = table.masks[blk.m];
    cdouble num = 0.0;
    double den = 0.0;
    for (std::size_t r = 0; r < masks.size(); ++r)
      den += std::norm(blk.V(r, c));
    for (const auto& term : op.terms) {
      detail::check_sites(term, n);
      for (std::size_t r = 0; r < masks.size(); ++r) {
        const cdouble a = blk.V(r, c);
        if (a == cdouble(0.0)) continue;
        std::uint32_t mask2;
        cdouble f;
        if (!detail::apply_to_mask(term, n, masks[r], mask2, f)) continue;
        if (std::popcount(mask2) != blk.m) continue;
        num += std::conj(blk.V(table.rank[mask2], c)) * f * a;
      }
    }
    return num / den;
  }

  /// Image of one Pauli-string term applied to a column range of a block,
  /// scattered by target sector: returns m' -> dense matrix whose columns
  /// follow the input column range.
  std::map<int, Eigen::MatrixXcd> apply_term_to_block(const PauliString& term, int block_idx,
                                                      int col_begin, int col_count) const {
    const auto& blk = blocks[block_idx];
    const auto& masks = table.masks[blk.m];
    std::map<int, Eigen::MatrixXcd> out;
    for (std::size_t r = 0; r < masks.size(); ++r) {
      std::uint32_t mask2;
      cdouble f;
      if (!detail::apply_to_mask(term, n, masks[r], mask2, f)) continue;
      const int m2 = std::popcount(mask2);
      auto it = out.find(m2);
      if (it == out.end())
        it = out.emplace(m2, Eigen::MatrixXcd::Zero(table.sector_dim(m2), col_count)).first;
      it->second.row(table.rank[mask2]) +=
          f * blk.V.block(r, col_begin, 1, col_count).row(0);
    }
    return out;
  }

 private:
  int total_ = 0;
  std::vector<std::pair<int, int>> member_col_;
};

}  // namespace xx0lab
