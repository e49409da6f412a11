#pragma once

// Exact eigenbasis of the XX0 chain
//
//   H = -sum_{j=1..n} (sigma^x_j sigma^x_{j+1} + sigma^y_j sigma^y_{j+1}
//                      + h sigma^z_j),  site n+1 == site 1 (periodic)
//
// built from momentum sets. An m-particle eigenstate is labelled by m
// distinct momenta solving exp(i p n) = (-1)^{m+1}; its amplitude on the
// ordered configuration x_1 < ... < x_m is det[exp(i x_j p_k)].
//
// Energy bookkeeping: the spin-wave energy sum(eps(p_j)) with
// eps(p) = -4 cos p + 2h counts excitations above the ferromagnetic
// reference; H adds the constant -h n on that reference, so
// H |{p}> = (sum(eps) - h n) |{p}>. Both values are stored: thermodynamic
// formulas use the spin-wave energy, diagonalization checks the full one.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "xx0lab/pauli.hpp"
#include "xx0lab/sector.hpp"

namespace xx0lab {

inline constexpr int kDenseCap = 14;
inline constexpr double kPi = std::numbers::pi;

/// Spin-wave dispersion eps(p) = -4 cos(p) + 2h.
inline double epsilon(double p, double h) { return -4.0 * std::cos(p) + 2.0 * h; }

enum class MParity { even, odd };

inline MParity parity_of(int m) { return (m % 2 == 0) ? MParity::even : MParity::odd; }

/// The n solutions of exp(i p n) = (-1)^{m+1} in (-pi, pi], ascending:
/// p = 2 pi k / n for odd m, p = 2 pi (k + 1/2) / n for even m. The interval
/// is half-open at -pi so that p = +pi is kept when it solves the
/// quantization.
inline std::vector<double> momentum_grid(int n, MParity parity) {
  if (n < 1) throw std::invalid_argument("momentum_grid: n must be >= 1");
  const bool even = (parity == MParity::even);
  std::vector<double> ps;
  ps.reserve(n);
  for (int k = -n; k <= n; ++k) {
    // -pi < p <= pi expressed exactly in integers: -n < 2k + [even] <= n.
    const int twice = 2 * k + (even ? 1 : 0);
    if (twice > -n && twice <= n) ps.push_back(kPi * twice / n);
  }
  return ps;
}

/// A choice of m distinct grid momenta: slot indices (0-based into the
/// ascending grid of the matching parity) plus the momentum values.
struct MomentumSet {
  int n = 0;
  int m = 0;
  std::vector<int> indices;     // ascending, distinct
  std::vector<double> momenta;  // ascending

  static MomentumSet from_indices(int n, std::vector<int> indices) {
    MomentumSet ms;
    ms.n = n;
    ms.m = static_cast<int>(indices.size());
    if (ms.m > n) throw std::invalid_argument("MomentumSet: m > n");
    std::sort(indices.begin(), indices.end());
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] < 0 || indices[i] >= n)
        throw std::invalid_argument("MomentumSet: slot index out of range");
      if (i > 0 && indices[i] == indices[i - 1])
        throw std::invalid_argument("MomentumSet: duplicate slot index");
    }
    const auto grid = momentum_grid(n, parity_of(ms.m));
    ms.indices = std::move(indices);
    ms.momenta.reserve(ms.m);
    for (int idx : ms.indices) ms.momenta.push_back(grid[idx]);
    return ms;
  }

  /// Largest quantization residual |exp(i p n) - (-1)^{m+1}|.
  double quantization_residual() const {
    const double target = (m % 2 == 0) ? -1.0 : 1.0;
    double r = 0.0;
    for (double p : momenta) {
      const cdouble e = std::exp(cdouble(0, p * n));
      r = std::max(r, std::abs(e - cdouble(target, 0)));
    }
    return r;
  }
};

/// Free-fermion wave function: (1/sqrt(m!)) * prod_{a<b} sign(x_b - x_a)
/// * det A with A_{jk} = exp(i x_j p_k). Symmetric in the positions,
/// antisymmetric in the momenta, zero when two positions coincide.
inline cdouble wavefunction(const std::vector<int>& xs, const MomentumSet& ps) {
  const int m = ps.m;
  if (static_cast<int>(xs.size()) != m)
    throw std::invalid_argument("wavefunction: position count != m");
  for (int x : xs)
    if (x < 1 || x > ps.n) throw std::invalid_argument("wavefunction: position out of range");
  if (m == 0) return 1.0;

  double signprod = 1.0;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const int d = xs[b] - xs[a];
      if (d == 0) return 0.0;
      if (d < 0) signprod = -signprod;
    }
  Eigen::MatrixXcd A(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) A(j, k) = std::exp(cdouble(0, xs[j] * ps.momenta[k]));
  double fact = 1.0;
  for (int i = 2; i <= m; ++i) fact *= i;
  return signprod * A.determinant() / std::sqrt(fact);
}

/// An exact eigenstate, stored by its momentum labels; the 2^n amplitude
/// vector is materialized on demand.
struct EigenState {
  MomentumSet momenta;
  double h = 0.0;
  double spinwave_energy = 0.0;     // sum of eps(p_j)
  double hamiltonian_energy = 0.0;  // spinwave_energy - h n

  int m() const { return momenta.m; }
  int n() const { return momenta.n; }

  /// Amplitudes on the m-particle sector, ordered by ascending basis mask
  /// (the SectorTable order). <psi|psi> = n^m before normalization.
  Eigen::VectorXcd sector_amplitudes() const {
    const int n_ = momenta.n, m_ = momenta.m;
    if (m_ == 0) return Eigen::VectorXcd::Ones(1);
    const auto dim = detail::binomial(n_, m_);
    Eigen::VectorXcd amp(static_cast<std::int64_t>(dim));
    Eigen::MatrixXcd A(m_, m_);
    std::uint32_t mask = (1u << m_) - 1u;
    for (std::int64_t row = 0; row < amp.size(); ++row) {
      int j = 0;
      for (int site = 1; site <= n_; ++site) {
        if ((mask >> (n_ - site)) & 1u) {
          for (int k = 0; k < m_; ++k)
            A(j, k) = std::exp(cdouble(0, double(site) * momenta.momenta[k]));
          ++j;
        }
      }
      amp[row] = (m_ == 1) ? A(0, 0) : A.determinant();
      // Gosper's hack: next mask with the same popcount.
      const std::uint32_t c = mask & (~mask + 1u);
      const std::uint32_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
    return amp;
  }

  StateVector materialize() const {
    const int n_ = momenta.n;
    StateVector v;
    v.n = n_;
    v.amp = Eigen::VectorXcd::Zero(std::int64_t(1) << n_);
    const auto sec = sector_amplitudes();
    std::uint32_t mask = momenta.m == 0 ? 0u : (1u << momenta.m) - 1u;
    for (std::int64_t row = 0; row < sec.size(); ++row) {
      v.amp[mask] = sec[row];
      if (momenta.m == 0) break;
      const std::uint32_t c = mask & (~mask + 1u);
      const std::uint32_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
    return v;
  }
};

inline EigenState build_eigenstate(int n, double h, const MomentumSet& ps) {
  if (ps.n != n) throw std::invalid_argument("build_eigenstate: chain length mismatch");
  if (ps.quantization_residual() > 1e-12)
    throw std::invalid_argument("build_eigenstate: momenta violate the quantization condition");
  EigenState s;
  s.momenta = ps;
  s.h = h;
  s.spinwave_energy = 0.0;
  for (double p : ps.momenta) s.spinwave_energy += epsilon(p, h);
  s.hamiltonian_energy = s.spinwave_energy - h * n;
  return s;
}

/// H|v> by direct term-by-term action (periodic; at n=2 the single bond is
/// counted twice by the j = 1..n sum, which the dispersion requires).
inline StateVector hamiltonian_apply(const StateVector& v, int n, double h) {
  if (n < 2) throw std::invalid_argument("hamiltonian_apply: n must be >= 2");
  if (v.n != n) throw std::invalid_argument("hamiltonian_apply: state size mismatch");
  StateVector out;
  out.n = n;
  out.amp = Eigen::VectorXcd::Zero(v.dim());
  const std::int64_t d = v.dim();
  for (std::int64_t b = 0; b < d; ++b) {
    const cdouble a = v.amp[b];
    if (a == cdouble(0.0)) continue;
    const int pop = std::popcount(static_cast<std::uint32_t>(b));
    out.amp[b] += -h * double(n - 2 * pop) * a;
    for (int j = 1; j <= n; ++j) {
      const int j2 = (j % n) + 1;
      const std::uint32_t bit1 = 1u << (n - j);
      const std::uint32_t bit2 = 1u << (n - j2);
      const bool s1 = b & bit1, s2 = b & bit2;
      if (s1 != s2) out.amp[b ^ (bit1 | bit2)] += -2.0 * a;
    }
  }
  return out;
}

/// All C(n,m) eigenstates of one particle-number sector, in ascending
/// slot-mask order.
inline std::vector<EigenState> sector_states(int n, int m, double h) {
  if (m < 0 || m > n) throw std::invalid_argument("sector_states: bad m");
  std::vector<EigenState> states;
  states.reserve(detail::binomial(n, m));
  if (m == 0) {
    states.push_back(build_eigenstate(n, h, MomentumSet::from_indices(n, {})));
    return states;
  }
  std::uint32_t mask = (1u << m) - 1u;
  const std::uint32_t end = 1u << n;
  while (mask < end) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) idx.push_back(i);
    states.push_back(build_eigenstate(n, h, MomentumSet::from_indices(n, idx)));
    const std::uint32_t c = mask & (~mask + 1u);
    const std::uint32_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  return states;
}

/// The complete set of 2^n eigenstates, m = 0..n. Vectors are not
/// materialized here. Rejects n beyond the cap; use sector_states for
/// sector-restricted enumeration at larger n.
inline std::vector<EigenState> full_spectrum(int n, double h, int cap = kDenseCap) {
  check_qubit_count(n);
  if (n > cap)
    throw std::invalid_argument("full_spectrum: n exceeds the dense cap (" +
                                std::to_string(cap) + "); enumerate sectors instead");
  std::vector<EigenState> states;
  states.reserve(std::int64_t(1) << n);
  for (int m = 0; m <= n; ++m) {
    auto sec = sector_states(n, m, h);
    states.insert(states.end(), sec.begin(), sec.end());
  }
  return states;
}

struct GroundLevel {
  EigenState state;  // canonical member (deterministic tie-break)
  int degeneracy = 1;
};

/// Minimizes sum(eps) - h n over all momentum sets by occupying, per sector,
/// the m lowest spin-wave energies. Ties at the Fermi edge are counted into
/// the degeneracy; the canonical member takes the lowest-index slots.
inline GroundLevel ground_level(int n, double h) {
  if (n < 2) throw std::invalid_argument("ground_level: n must be >= 2");
  struct Cand {
    double e;
    int m;
    std::vector<int> indices;
    long long multiplicity;
  };
  std::vector<Cand> cands;
  for (int m = 0; m <= n; ++m) {
    const auto grid = momentum_grid(n, parity_of(m));
    std::vector<std::pair<double, int>> eps_slot(n);
    for (int i = 0; i < n; ++i) eps_slot[i] = {epsilon(grid[i], h), i};
    std::sort(eps_slot.begin(), eps_slot.end());
    double e = 0.0;
    std::vector<int> idx;
    for (int i = 0; i < m; ++i) {
      e += eps_slot[i].first;
      idx.push_back(eps_slot[i].second);
    }
    long long mult = 1;
    if (m > 0 && m < n) {
      const double cut = eps_slot[m - 1].first;
      const double tol = 1e-12 * (1.0 + std::abs(cut));
      int below = 0, tied = 0;
      for (const auto& [ev, slot] : eps_slot) {
        if (ev < cut - tol)
          ++below;
        else if (ev <= cut + tol)
          ++tied;
      }
      mult = static_cast<long long>(detail::binomial(tied, m - below));
    }
    std::sort(idx.begin(), idx.end());
    cands.push_back({e, m, std::move(idx), mult});
  }
  double best = cands[0].e;
  for (const auto& c : cands) best = std::min(best, c.e);
  const double tol = 1e-12 * (1.0 + std::abs(best));
  GroundLevel g;
  long long degeneracy = 0;
  const Cand* pick = nullptr;
  for (const auto& c : cands) {
    if (c.e <= best + tol) {
      degeneracy += c.multiplicity;
      if (!pick) pick = &c;
    }
  }
  g.degeneracy = static_cast<int>(degeneracy);
  g.state = build_eigenstate(n, h, MomentumSet::from_indices(n, pick->indices));
  return g;
}

inline EigenState ground_state(int n, double h) { return ground_level(n, h).state; }

}  // namespace xx0lab
