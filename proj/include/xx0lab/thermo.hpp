#pragma once

// Thermodynamic-limit formulas for the XX0 chain and their exact finite-n
// counterparts. Base-2 convention throughout: Z = tr 2^(-H/T), free energy
// and entropy in log base 2. Partition sums run over spin-wave energies
// sum(eps); the variant for the full Hamiltonian differs by the exact factor
// 2^(h n / T) and is exposed as a conversion.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "xx0lab/quadrature.hpp"
#include "xx0lab/xx0.hpp"

namespace xx0lab {

struct ThermoParams {
  double T = 1.0;
  double h = 0.0;
};

inline void require_positive_temperature(const ThermoParams& params) {
  if (!(params.T > 0.0))
    throw std::invalid_argument("temperature must be positive (T = 0 only on the ground-state path)");
}

/// Fermi weight theta(p) = (1 + 2^(eps(p)/T))^-1.
inline double fermi_weight(double p, const ThermoParams& params) {
  require_positive_temperature(params);
  return 1.0 / (1.0 + std::exp2(epsilon(p, params.h) / params.T));
}

/// Macroscopic momentum density on B uniform bins partitioning (-pi, pi].
/// Values are in particles per unit momentum; equilibrium profiles obey
/// 0 <= rho <= 1/(2 pi), empirical ones may overshoot the upper bound by
/// one grid slot's worth of discreteness.
struct DensityProfile {
  int bins = 0;
  std::vector<double> values;

  double width() const { return 2.0 * kPi / bins; }
  double midpoint(int i) const { return -kPi + (i + 0.5) * width(); }

  double particle_density() const {
    double d = 0.0;
    for (double v : values) d += v * width();
    return d;
  }
};

namespace detail {

inline double log2_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log2(1.0 + std::exp2(std::min(a, b) - m));
}

/// log2(1 + 2^x), stable for large |x|.
inline double log2_1p_exp2(double x) {
  if (x >= 50.0) return x;                      // 2^-x below double precision
  if (x <= -50.0) return std::exp2(x) / std::numbers::ln2;
  return std::log2(1.0 + std::exp2(x));
}

/// Binary entropy -theta log2 theta - (1-theta) log2(1-theta) evaluated from
/// a = |eps|/T without forming 1-theta (theta and 1-theta swap under the
/// sign of eps, and the entropy is symmetric).
inline double binary_entropy_from_exponent(double a) {
  const double q = std::exp2(-a);  // q <= 1
  return log2_1p_exp2(-a) + (q / (1.0 + q)) * a;
}

/// log2 of sum over all m-subsets of each parity grid of 2^(-sum eps / T),
/// via the elementary-symmetric-polynomial recurrence in the log domain.
inline std::vector<double> log2_sector_sums(int n, const ThermoParams& params, MParity parity) {
  const auto grid = momentum_grid(n, parity);
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> le(n + 1, ninf);
  le[0] = 0.0;
  int seen = 0;
  for (double p : grid) {
    const double lx = -epsilon(p, params.h) / params.T;
    ++seen;
    for (int m = std::min(seen, n); m >= 1; --m) le[m] = log2_add(le[m], lx + le[m - 1]);
  }
  return le;
}

}  // namespace detail

/// log2 of Z = sum over all 2^n eigenstates of 2^(-E/T), with E the
/// spin-wave energy sum(eps). Exact; log-domain accumulation avoids
/// overflow at small T.
inline double log2_partition_function(int n, const ThermoParams& params, int cap = kDenseCap) {
  check_qubit_count(n);
  if (n > cap)
    throw std::invalid_argument("log2_partition_function: n exceeds the cap (" +
                                std::to_string(cap) + ")");
  require_positive_temperature(params);
  const auto even = detail::log2_sector_sums(n, params, MParity::even);
  const auto odd = detail::log2_sector_sums(n, params, MParity::odd);
  double acc = -std::numeric_limits<double>::infinity();
  for (int m = 0; m <= n; ++m)
    acc = detail::log2_add(acc, (m % 2 == 0) ? even[m] : odd[m]);
  return acc;
}

/// Conversion to the full-Hamiltonian partition function: E_H = E_sw - h n,
/// so log2 Z_H = log2 Z_sw + h n / T.
inline double log2_partition_function_hamiltonian(int n, const ThermoParams& params,
                                                  int cap = kDenseCap) {
  return log2_partition_function(n, params, cap) + params.h * n / params.T;
}

/// Bulk free energy (1/2pi) * integral of log2(1 + 2^(-eps(p)/T)) over
/// (-pi, pi], by adaptive quadrature to absolute error 1e-10.
inline double bulk_free_energy(const ThermoParams& params) {
  require_positive_temperature(params);
  const auto res = integrate_adaptive(
      [&](double p) {
        return detail::log2_1p_exp2(-epsilon(p, params.h) / params.T) / (2.0 * kPi);
      },
      -kPi, kPi, 1e-10);
  return res.value;
}

/// Entropy density S = -(1/2pi) * integral of [theta log2 theta +
/// (1-theta) log2(1-theta)], integrand extended by 0 at theta in {0,1}.
inline double entropy_density(const ThermoParams& params) {
  require_positive_temperature(params);
  const auto res = integrate_adaptive(
      [&](double p) {
        const double a = std::abs(epsilon(p, params.h)) / params.T;
        return detail::binary_entropy_from_exponent(a) / (2.0 * kPi);
      },
      -kPi, kPi, 1e-10);
  return res.value;
}

namespace detail {

inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace detail

/// Entropy of a binned profile: integral of
///   (1/2pi) log2(1/2pi) - rho log2 rho - (1/2pi - rho) log2(1/2pi - rho)
/// with endpoint values rho in {0, 1/2pi} contributing their continuous
/// limits. Values outside [0, 1/2pi] beyond `tol` are rejected.
inline double entropy_of_profile(const DensityProfile& rho, double tol = 1e-9) {
  const double cap = 1.0 / (2.0 * kPi);
  double s = 0.0;
  for (double v : rho.values) {
    if (v < -tol || v > cap + tol)
      throw std::invalid_argument("entropy_of_profile: density outside [0, 1/(2 pi)]");
    const double r = std::clamp(v, 0.0, cap);
    s += rho.width() *
         (detail::xlog2x(cap) - detail::xlog2x(r) - detail::xlog2x(cap - r));
  }
  return s;
}

/// Energy density integral of eps(p) rho(p) over the bins (midpoint values).
inline double energy_density(const DensityProfile& rho, double h) {
  double e = 0.0;
  for (int i = 0; i < rho.bins; ++i)
    e += rho.width() * epsilon(rho.midpoint(i), h) * rho.values[i];
  return e;
}

/// Equilibrium profile rho = theta/2pi sampled on B bins (midpoint values;
/// on a full period the midpoint sum of any smooth quantity converges
/// spectrally, which the entropy identity tests rely on).
inline DensityProfile equilibrium_rho(const ThermoParams& params, int B) {
  require_positive_temperature(params);
  if (B < 1) throw std::invalid_argument("equilibrium_rho: need at least one bin");
  DensityProfile rho;
  rho.bins = B;
  rho.values.resize(B);
  for (int i = 0; i < B; ++i)
    rho.values[i] = fermi_weight(rho.midpoint(i), params) / (2.0 * kPi);
  return rho;
}

namespace detail {

/// Grid slots as exact integers: p = pi * twice / n.
inline std::vector<int> momentum_grid_twice(int n, MParity parity) {
  const bool even = (parity == MParity::even);
  std::vector<int> out;
  out.reserve(n);
  for (int k = -n; k <= n; ++k) {
    const int twice = 2 * k + (even ? 1 : 0);
    if (twice > -n && twice <= n) out.push_back(twice);
  }
  return out;
}

/// Bin of p = pi*twice/n among B uniform bins (-pi + i w, -pi + (i+1) w],
/// decided in integer arithmetic so edge slots land deterministically.
inline int bin_of_twice(int twice, int n, int B) {
  const long long num = static_cast<long long>(B) * (twice + n);
  const long long den = 2LL * n;
  return static_cast<int>((num + den - 1) / den) - 1;
}

}  // namespace detail

/// Per-bin occupied-fraction estimator (count in bin) / (n * binwidth).
/// Requires binwidth >> grid spacing, enforced as B <= n/4.
inline DensityProfile empirical_density(const MomentumSet& ps, int B) {
  if (B < 1) throw std::invalid_argument("empirical_density: need at least one bin");
  if (4 * B > ps.n)
    throw std::invalid_argument("empirical_density: B > n/4 violates the scale separation");
  const auto twice = detail::momentum_grid_twice(ps.n, parity_of(ps.m));
  DensityProfile rho;
  rho.bins = B;
  rho.values.assign(B, 0.0);
  for (int idx : ps.indices) rho.values[detail::bin_of_twice(twice[idx], ps.n, B)] += 1.0;
  const double scale = 1.0 / (ps.n * rho.width());
  for (double& v : rho.values) v *= scale;
  return rho;
}

}  // namespace xx0lab
