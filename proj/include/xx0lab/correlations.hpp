#pragma once

// Thermal correlation functions evaluated three ways: the exact trace over
// all 2^n eigenstates, the trace restricted to the equilibrium subspace, and
// per-state expectations (whose constancy over the subspace is the
// correlation-function side of the error-correction story).

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "xx0lab/equilibrium.hpp"
#include "xx0lab/thermo.hpp"
#include "xx0lab/xx0.hpp"

namespace xx0lab {

/// <v|O|v> / <v|v>. Rejects the zero vector.
inline cdouble state_expectation(const LocalOperator& op, const StateVector& v) {
  const double n2 = v.norm2();
  if (!(n2 > 0.0)) throw std::invalid_argument("state_expectation: zero vector");
  const StateVector ov = apply_local_operator(op, v);
  return v.amp.dot(ov.amp) / n2;
}

namespace detail {

/// In-sector expectation <a|O|a>/<a|a> for amplitudes over the m-particle
/// sector (targets leaving the sector cannot overlap |a>).
inline cdouble sector_expectation(const LocalOperator& op, int n, int m,
                                  const SectorTable& table, const Eigen::VectorXcd& a) {
  const auto& masks = table.masks[m];
  cdouble num = 0.0;
  double den = 0.0;
  for (std::int64_t r = 0; r < a.size(); ++r) den += std::norm(a[r]);
  for (const auto& term : op.terms) {
    check_sites(term, n);
    for (std::size_t r = 0; r < masks.size(); ++r) {
      const cdouble amp = a[static_cast<std::int64_t>(r)];
      if (amp == cdouble(0.0)) continue;
      std::uint32_t mask2;
      cdouble f;
      if (!apply_to_mask(term, n, masks[r], mask2, f)) continue;
      if (std::popcount(mask2) != m) continue;
      num += std::conj(a[table.rank[mask2]]) * f * amp;
    }
  }
  return num / den;
}

}  // namespace detail

/// Thermal correlation functions (1/Z) sum over all eigenstates of
/// 2^(-E/T) <psi|O|psi>/<psi|psi>, for several operators in one streaming
/// pass (the determinant evaluation per eigenstate dominates, so the pass is
/// shared). Exact: in the energy eigenbasis the off-diagonal terms of the
/// trace vanish.
inline std::vector<cdouble> thermal_correlation_full_many(const std::vector<LocalOperator>& ops,
                                                          int n, const ThermoParams& params,
                                                          int cap = kDenseCap) {
  check_qubit_count(n);
  if (n > cap) throw std::invalid_argument("thermal_correlation_full: n exceeds the cap");
  require_positive_temperature(params);
  const double log2z = log2_partition_function(n, params, cap);
  const SectorTable table(n);
  std::vector<cdouble> acc(ops.size(), 0.0);
  for (int m = 0; m <= n; ++m) {
    for (const auto& state : sector_states(n, m, params.h)) {
      const double w = std::exp2(-state.spinwave_energy / params.T - log2z);
      const Eigen::VectorXcd a = state.sector_amplitudes();
      for (std::size_t k = 0; k < ops.size(); ++k)
        acc[k] += w * detail::sector_expectation(ops[k], n, m, table, a);
    }
  }
  return acc;
}

inline cdouble thermal_correlation_full(const LocalOperator& op, int n,
                                        const ThermoParams& params, int cap = kDenseCap) {
  return thermal_correlation_full_many({op}, n, params, cap)[0];
}

/// Trace restricted to the equilibrium subspace:
/// (1/Z_C) sum over members of 2^(-E/T) <psi|O|psi>, Z_C the members' sum.
inline cdouble thermal_correlation_restricted(const LocalOperator& op,
                                              const EquilibriumSubspace& sub) {
  if (sub.members.empty())
    throw std::invalid_argument("thermal_correlation_restricted: empty subspace");
  const SectorTable table(sub.n);
  double shift = -sub.members[0].state.spinwave_energy / sub.params.T;
  for (const auto& mem : sub.members)
    shift = std::max(shift, -mem.state.spinwave_energy / sub.params.T);
  cdouble num = 0.0;
  double den = 0.0;
  for (const auto& mem : sub.members) {
    const double w = std::exp2(-mem.state.spinwave_energy / sub.params.T - shift);
    const Eigen::VectorXcd a = mem.state.sector_amplitudes();
    num += w * detail::sector_expectation(op, sub.n, mem.state.m(), table, a);
    den += w;
  }
  return num / den;
}

/// Per-state constancy report for one operator over the equilibrium
/// subspace: expectations of every member plus `samples` random unit vectors
/// drawn inside the span (independent standard complex Gaussian coefficients,
/// then normalized).
struct TcfReport {
  LocalOperator op;
  int n = 0;
  ThermoParams params;
  bool has_full = false;
  cdouble full_trace_value{0.0};
  cdouble restricted_value{0.0};
  std::vector<cdouble> member_values;
  cdouble mean{0.0};
  double std_dev = 0.0;
  double max_spread = 0.0;  // max pairwise |v_i - v_j| over members
  std::vector<cdouble> sample_values;
  double sample_max_spread = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline double max_pairwise_abs_diff(const std::vector<cdouble>& vs) {
  double spread = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      spread = std::max(spread, std::abs(vs[i] - vs[j]));
  return spread;
}

/// Gaussian coefficient vectors are drawn member-major per sample so that a
/// fixed seed fixes the whole sample set.
inline Eigen::VectorXcd random_span_coefficients(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd g(dim);
  for (int j = 0; j < dim; ++j) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    g[j] = cdouble(re, im);
  }
  return g;
}

}  // namespace detail

inline TcfReport tcf_report(const LocalOperator& op, const EquilibriumSubspace& sub,
                            int samples = 32, std::uint64_t seed = 0,
                            bool include_full = false, const PackedSubspace* pack = nullptr) {
  if (sub.members.empty()) throw std::invalid_argument("tcf_report: empty subspace");
  std::optional<PackedSubspace> own;
  if (!pack) {
    own.emplace(sub);
    pack = &*own;
  }
  TcfReport rep;
  rep.op = op;
  rep.n = sub.n;
  rep.params = sub.params;
  rep.samples = samples;
  rep.seed = seed;

  const int l = sub.dim();
  rep.member_values.resize(l);
  for (int j = 0; j < l; ++j) rep.member_values[j] = pack->member_expectation(op, j);

  cdouble mean = 0.0;
  for (const auto& v : rep.member_values) mean += v;
  mean /= double(l);
  rep.mean = mean;
  double var = 0.0;
  for (const auto& v : rep.member_values) var += std::norm(v - mean);
  rep.std_dev = std::sqrt(var / l);
  rep.max_spread = detail::max_pairwise_abs_diff(rep.member_values);

  {  // Boltzmann-weighted restricted trace from the member values.
    double shift = -sub.members[0].state.spinwave_energy / sub.params.T;
    for (const auto& mem : sub.members)
      shift = std::max(shift, -mem.state.spinwave_energy / sub.params.T);
    cdouble num = 0.0;
    double den = 0.0;
    for (int j = 0; j < l; ++j) {
      const double w =
          std::exp2(-sub.members[j].state.spinwave_energy / sub.params.T - shift);
      num += w * rep.member_values[j];
      den += w;
    }
    rep.restricted_value = num / den;
  }

  std::mt19937_64 rng(seed);
  rep.sample_values.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXcd g = detail::random_span_coefficients(l, rng);
    StateVector psi = pack->assemble(g);
    psi.amp /= psi.amp.norm();
    rep.sample_values.push_back(state_expectation(op, psi));
  }
  rep.sample_max_spread = detail::max_pairwise_abs_diff(rep.sample_values);

  if (include_full) {
    rep.full_trace_value = thermal_correlation_full(op, sub.n, sub.params);
    rep.has_full = true;
  }
  return rep;
}

/// Ground-state expectation (the T = 0 limit of the thermal correlation).
/// A degenerate ground level is reported through `degeneracy_out` and the
/// canonical (lowest-slot) member is evaluated.
inline cdouble zero_temperature_correlation(const LocalOperator& op, int n, double h,
                                            int* degeneracy_out = nullptr) {
  const GroundLevel g = ground_level(n, h);
  if (degeneracy_out) *degeneracy_out = g.degeneracy;
  const StateVector v = g.state.materialize();
  return state_expectation(op, v);
}

}  // namespace xx0lab
