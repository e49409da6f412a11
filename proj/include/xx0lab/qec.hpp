#pragma once

// Kraus error channels, both forms of the Knill-Laflamme criterion, the
// unitary channel transform that diagonalizes the error matrix, and recovery
// synthesis with round-trip verification. Dense matrices are used freely
// here for small n; the equilibrium-subspace checks at larger n run on the
// sector-packed basis.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "xx0lab/correlations.hpp"
#include "xx0lab/equilibrium.hpp"
#include "xx0lab/pauli.hpp"

namespace xx0lab {

using KrausOperator = std::variant<LocalOperator, Eigen::MatrixXcd>;

struct ErrorChannel {
  int n = 0;
  std::vector<KrausOperator> kraus;

  int size() const { return static_cast<int>(kraus.size()); }

  bool all_symbolic() const {
    for (const auto& k : kraus)
      if (!std::holds_alternative<LocalOperator>(k)) return false;
    return true;
  }

  static ErrorChannel from_operators(int n, std::vector<LocalOperator> ops) {
    if (ops.empty()) throw std::invalid_argument("ErrorChannel: need at least one operator");
    ErrorChannel e;
    e.n = n;
    for (auto& op : ops) e.kraus.emplace_back(std::move(op));
    return e;
  }

  static ErrorChannel from_matrices(int n, std::vector<Eigen::MatrixXcd> mats) {
    if (mats.empty()) throw std::invalid_argument("ErrorChannel: need at least one operator");
    const std::int64_t d = std::int64_t(1) << n;
    ErrorChannel e;
    e.n = n;
    for (auto& m : mats) {
      if (m.rows() != d || m.cols() != d)
        throw std::invalid_argument("ErrorChannel: matrix dimension mismatch");
      e.kraus.emplace_back(std::move(m));
    }
    return e;
  }
};

inline Eigen::MatrixXcd kraus_dense(const KrausOperator& k, int n) {
  if (const auto* op = std::get_if<LocalOperator>(&k)) return to_dense(*op, n);
  return std::get<Eigen::MatrixXcd>(k);
}

inline StateVector kraus_apply(const KrausOperator& k, const StateVector& v) {
  if (const auto* op = std::get_if<LocalOperator>(&k)) return apply_local_operator(*op, v);
  StateVector out;
  out.n = v.n;
  out.amp = std::get<Eigen::MatrixXcd>(k) * v.amp;
  return out;
}

/// Orthonormal basis spanning a code subspace of W.
struct CodeSpace {
  int n = 0;
  std::vector<StateVector> basis;

  int dim() const { return static_cast<int>(basis.size()); }

  static CodeSpace from_vectors(std::vector<StateVector> vs, double orth_tol = 1e-10) {
    if (vs.empty()) throw std::invalid_argument("CodeSpace: need at least one vector");
    CodeSpace c;
    c.n = vs[0].n;
    for (std::size_t j = 0; j < vs.size(); ++j) {
      if (vs[j].n != c.n) throw std::invalid_argument("CodeSpace: mixed qubit counts");
      for (std::size_t k = 0; k <= j; ++k) {
        const cdouble g = vs[k].amp.dot(vs[j].amp);
        const cdouble expect = (j == k) ? cdouble(1.0) : cdouble(0.0);
        if (std::abs(g - expect) > orth_tol)
          throw std::invalid_argument("CodeSpace: basis not orthonormal");
      }
    }
    c.basis = std::move(vs);
    return c;
  }

  Eigen::MatrixXcd basis_matrix() const {
    Eigen::MatrixXcd b(basis[0].amp.size(), dim());
    for (int j = 0; j < dim(); ++j) b.col(j) = basis[j].amp;
    return b;
  }

  Eigen::MatrixXcd projector() const {
    const Eigen::MatrixXcd b = basis_matrix();
    return b * b.adjoint();
  }
};

/// Normalized members of an equilibrium subspace as an explicit code space
/// (materializes full vectors; meant for small n).
inline CodeSpace code_space_from(const EquilibriumSubspace& sub) {
  std::vector<StateVector> vs;
  vs.reserve(sub.dim());
  for (const auto& mem : sub.members) {
    StateVector v = mem.state.materialize();
    v.amp /= v.amp.norm();
    vs.push_back(std::move(v));
  }
  return CodeSpace::from_vectors(std::move(vs));
}

/// S_E(P) = sum_a E_a P E_a^dag.
inline DensityMatrix apply_channel(const ErrorChannel& e, const DensityMatrix& p) {
  if (e.n != p.n) throw std::invalid_argument("apply_channel: dimension mismatch");
  DensityMatrix out;
  out.n = p.n;
  out.entries = Eigen::MatrixXcd::Zero(p.entries.rows(), p.entries.cols());
  for (const auto& k : e.kraus) {
    const Eigen::MatrixXcd a = kraus_dense(k, e.n);
    out.entries += a * p.entries * a.adjoint();
  }
  return out;
}

/// Operator-norm deviation of sum_a E_a^dag E_a from the identity. Exact
/// (zero) when the symbolic sum reduces to the identity; dense spectral norm
/// otherwise; a coefficient-sum upper bound beyond the dense range.
inline double check_completeness(const ErrorChannel& e) {
  if (e.all_symbolic()) {
    LocalOperator sum = LocalOperator::zero();
    for (const auto& k : e.kraus) {
      const auto& op = std::get<LocalOperator>(k);
      sum = sum + compose(adjoint(op), op);
    }
    sum = combine_terms(sum + LocalOperator::identity(-1.0));
    if (sum.is_zero()) return 0.0;
    if (e.n > 12) {
      double bound = 0.0;
      for (const auto& t : sum.terms) bound += std::abs(t.coeff);
      return bound;
    }
    const Eigen::MatrixXcd d = to_dense(sum, e.n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        cdouble(0.5) * (d + Eigen::MatrixXcd(d.adjoint())));
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  const std::int64_t dim = std::int64_t(1) << e.n;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& k : e.kraus) {
    const Eigen::MatrixXcd a = kraus_dense(k, e.n);
    acc += a.adjoint() * a;
  }
  acc -= Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(acc);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Verdict for one Knill-Laflamme check. `basis` form: c_ab is the mean of
/// the diagonal entries <psi_j|E_a^dag E_b|psi_j> and the violation is the
/// largest |<psi_j|E_a^dag E_b|psi_k> - c_ab delta_jk|, split into its
/// diagonal and off-diagonal parts. `random` form: c_ab is the first
/// sample's value and the violation is the largest deviation of any other
/// sample from it; the maximizing sample is kept as a witness.
struct KLReport {
  Eigen::MatrixXcd c_matrix;
  double tol = 0.0;
  double max_violation = 0.0;
  double max_violation_diag = 0.0;
  double max_violation_offdiag = 0.0;
  bool passed = false;
  std::string form;

  std::optional<StateVector> witness;
  int witness_a = -1, witness_b = -1;
  cdouble witness_value{0.0};
  cdouble witness_reference{0.0};
};

namespace detail {

inline void finish_report(KLReport& rep, double tol, const char* form) {
  rep.tol = tol;
  rep.max_violation = std::max(rep.max_violation_diag, rep.max_violation_offdiag);
  rep.passed = rep.max_violation < tol;
  rep.form = form;
}

}  // namespace detail

inline KLReport kl_check_basis(const ErrorChannel& e, const CodeSpace& code,
                               double tol = 1e-8) {
  const int m = e.size();
  const int l = code.dim();
  std::vector<std::vector<Eigen::VectorXcd>> img(m);
  for (int a = 0; a < m; ++a) {
    img[a].reserve(l);
    for (int j = 0; j < l; ++j) img[a].push_back(kraus_apply(e.kraus[a], code.basis[j]).amp);
  }
  KLReport rep;
  rep.c_matrix.resize(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Eigen::MatrixXcd g(l, l);
      for (int j = 0; j < l; ++j)
        for (int k = 0; k < l; ++k) g(j, k) = img[a][j].dot(img[b][k]);
      const cdouble c = g.diagonal().sum() / double(l);
      rep.c_matrix(a, b) = c;
      for (int j = 0; j < l; ++j)
        for (int k = 0; k < l; ++k) {
          const double dev = std::abs(g(j, k) - (j == k ? c : cdouble(0.0)));
          if (j == k)
            rep.max_violation_diag = std::max(rep.max_violation_diag, dev);
          else
            rep.max_violation_offdiag = std::max(rep.max_violation_offdiag, dev);
        }
    }
  detail::finish_report(rep, tol, "basis");
  return rep;
}

/// Sector-packed basis-form check for an equilibrium code; Kraus operators
/// must be symbolic. The (j,k) grid for each operator pair is evaluated as
/// GEMMs between sector blocks.
inline KLReport kl_check_basis(const ErrorChannel& e, const PackedSubspace& pack,
                               double tol = 1e-8, int col_chunk = 256) {
  if (!e.all_symbolic())
    throw std::invalid_argument("packed kl_check_basis needs symbolic Kraus operators");
  const int m = e.size();
  const int l = pack.size();
  KLReport rep;
  rep.c_matrix.resize(m, m);
  Eigen::MatrixXcd g(l, l);
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      const LocalOperator prod = compose(adjoint(std::get<LocalOperator>(e.kraus[a])),
                                         std::get<LocalOperator>(e.kraus[b]));
      g.setZero();
      for (std::size_t sb = 0; sb < pack.blocks.size(); ++sb) {
        const auto& src = pack.blocks[sb];
        const int cols = static_cast<int>(src.member_ids.size());
        for (int c0 = 0; c0 < cols; c0 += col_chunk) {
          const int csz = std::min(col_chunk, cols - c0);
          std::map<int, Eigen::MatrixXcd> img;
          for (const auto& term : prod.terms) {
            auto part = pack.apply_term_to_block(term, static_cast<int>(sb), c0, csz);
            for (auto& [m2, mat] : part) {
              auto it = img.find(m2);
              if (it == img.end())
                img.emplace(m2, std::move(mat));
              else
                it->second += mat;
            }
          }
          for (const auto& dst : pack.blocks) {
            auto it = img.find(dst.m);
            if (it == img.end()) continue;
            g.block(dst.col0, src.col0 + c0, dst.V.cols(), csz) = dst.V.adjoint() * it->second;
          }
        }
      }
      const cdouble c = g.diagonal().sum() / double(l);
      rep.c_matrix(a, b) = c;
      rep.c_matrix(b, a) = std::conj(c);
      for (int j = 0; j < l; ++j)
        for (int k = 0; k < l; ++k) {
          const double dev = std::abs(g(j, k) - (j == k ? c : cdouble(0.0)));
          if (j == k)
            rep.max_violation_diag = std::max(rep.max_violation_diag, dev);
          else
            rep.max_violation_offdiag = std::max(rep.max_violation_offdiag, dev);
        }
    }
  }
  detail::finish_report(rep, tol, "basis");
  return rep;
}

namespace detail {

template <typename AssembleFn>
KLReport kl_random_impl(const ErrorChannel& e, int dim, AssembleFn&& assemble, int samples,
                        std::uint64_t seed, double tol) {
  if (samples < 2) throw std::invalid_argument("kl_check_random: need at least 2 samples");
  const int m = e.size();
  std::mt19937_64 rng(seed);
  std::vector<StateVector> psis;
  psis.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    StateVector psi = assemble(random_span_coefficients(dim, rng));
    psi.amp /= psi.amp.norm();
    psis.push_back(std::move(psi));
  }
  KLReport rep;
  rep.c_matrix.resize(m, m);
  double worst = -1.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<Eigen::VectorXcd> img(m);
    for (int a = 0; a < m; ++a) img[a] = kraus_apply(e.kraus[a], psis[s]).amp;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const cdouble v = img[a].dot(img[b]);
        if (s == 0) {
          rep.c_matrix(a, b) = v;
          continue;
        }
        const double dev = std::abs(v - rep.c_matrix(a, b));
        rep.max_violation_diag = std::max(rep.max_violation_diag, dev);
        if (dev > worst) {
          worst = dev;
          rep.witness = psis[s];
          rep.witness_a = a;
          rep.witness_b = b;
          rep.witness_value = v;
          rep.witness_reference = rep.c_matrix(a, b);
        }
      }
  }
  finish_report(rep, tol, "random");
  return rep;
}

}  // namespace detail

inline KLReport kl_check_random(const ErrorChannel& e, const CodeSpace& code, int samples = 16,
                                std::uint64_t seed = 0, double tol = 1e-8) {
  return detail::kl_random_impl(
      e, code.dim(),
      [&](const Eigen::VectorXcd& g) {
        StateVector psi;
        psi.n = code.n;
        psi.amp = Eigen::VectorXcd::Zero(code.basis[0].amp.size());
        for (int j = 0; j < code.dim(); ++j) psi.amp += g[j] * code.basis[j].amp;
        return psi;
      },
      samples, seed, tol);
}

inline KLReport kl_check_random(const ErrorChannel& e, const PackedSubspace& pack,
                                int samples = 16, std::uint64_t seed = 0, double tol = 1e-8) {
  return detail::kl_random_impl(
      e, pack.size(), [&](const Eigen::VectorXcd& g) { return pack.assemble(g); }, samples,
      seed, tol);
}

/// Unitary U with U c U^dag real diagonal, for a Hermitian error matrix c.
inline std::pair<Eigen::MatrixXcd, Eigen::VectorXd> diagonalize_error_matrix(
    const Eigen::MatrixXcd& c, double herm_tol = 1e-10) {
  if (c.rows() != c.cols()) throw std::invalid_argument("diagonalize_error_matrix: not square");
  if ((c - Eigen::MatrixXcd(c.adjoint())).cwiseAbs().maxCoeff() > herm_tol)
    throw std::invalid_argument("diagonalize_error_matrix: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
  return {es.eigenvectors().adjoint(), es.eigenvalues()};
}

/// F_r = sum_a u_{ra} E_a. The transformed family generates the same
/// super-operator (unitary freedom of Kraus decompositions).
inline ErrorChannel transform_channel(const ErrorChannel& e, const Eigen::MatrixXcd& u) {
  const int m = e.size();
  if (u.rows() != m || u.cols() != m)
    throw std::invalid_argument("transform_channel: U size mismatch");
  if ((Eigen::MatrixXcd(u.adjoint() * u) - Eigen::MatrixXcd::Identity(m, m))
          .cwiseAbs()
          .maxCoeff() > 1e-10)
    throw std::invalid_argument("transform_channel: U is not unitary");
  ErrorChannel out;
  out.n = e.n;
  if (e.all_symbolic()) {
    for (int r = 0; r < m; ++r) {
      LocalOperator f = LocalOperator::zero();
      for (int a = 0; a < m; ++a)
        f = f + u(r, a) * std::get<LocalOperator>(e.kraus[a]);
      out.kraus.emplace_back(combine_terms(f));
    }
  } else {
    std::vector<Eigen::MatrixXcd> dense;
    dense.reserve(m);
    for (const auto& k : e.kraus) dense.push_back(kraus_dense(k, e.n));
    for (int r = 0; r < m; ++r) {
      Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(dense[0].rows(), dense[0].cols());
      for (int a = 0; a < m; ++a) f += u(r, a) * dense[a];
      out.kraus.emplace_back(std::move(f));
    }
  }
  return out;
}

/// Recovery channel for a KL-passing code: diagonalize c, transform to the
/// F_r family, take the isometry part of each F_r restricted to the code
/// (polar decomposition via thin SVD), and close with the projector onto the
/// untouched subspace so the recovery is trace-preserving.
inline ErrorChannel build_recovery(const ErrorChannel& e, const CodeSpace& code,
                                   double tol = 1e-8) {
  if (e.n > 10)
    throw std::invalid_argument("build_recovery: dense recovery synthesis is limited to n <= 10");
  const KLReport kl = kl_check_basis(e, code, tol);
  if (!kl.passed)
    throw std::invalid_argument(
        "build_recovery: the Knill-Laflamme check fails (violation " +
        std::to_string(kl.max_violation) + "), no recovery exists");
  const auto [u, d] = diagonalize_error_matrix(kl.c_matrix);
  const ErrorChannel f = transform_channel(e, u);
  const Eigen::MatrixXcd basis = code.basis_matrix();
  const std::int64_t dim = basis.rows();

  ErrorChannel recovery;
  recovery.n = e.n;
  Eigen::MatrixXcd image_proj = Eigen::MatrixXcd::Zero(dim, dim);
  for (int r = 0; r < f.size(); ++r) {
    if (d[r] <= tol) continue;  // error component never occurs on the code
    const Eigen::MatrixXcd fr = kraus_dense(f.kraus[r], e.n);
    const Eigen::MatrixXcd m = fr * basis;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::MatrixXcd q = svd.matrixU() * svd.matrixV().adjoint();
    recovery.kraus.emplace_back(Eigen::MatrixXcd(basis * q.adjoint()));
    image_proj += q * q.adjoint();
  }
  recovery.kraus.emplace_back(
      Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(dim, dim) - image_proj));
  return recovery;
}

inline std::vector<LocalOperator> default_tcf_operators() {
  return {
      LocalOperator::from_string(PauliString::single(Axis::z, 1)),
      LocalOperator::from_string(
          PauliString{1.0, {PauliFactor{1, Axis::x}, PauliFactor{2, Axis::x}}}),
      LocalOperator::from_string(
          PauliString{1.0, {PauliFactor{1, Axis::y}, PauliFactor{2, Axis::y}}}),
      LocalOperator::from_string(
          PauliString{1.0, {PauliFactor{1, Axis::z}, PauliFactor{2, Axis::z}}}),
  };
}

/// End-to-end check of the central claim on one (n, T, h) point: select the
/// equilibrium subspace, draw a random weight-<=t error family, and run both
/// Knill-Laflamme forms plus the constancy reports for the default operator
/// set. Violations are reported for trend comparisons rather than hard
/// pass/fail; a one-dimensional subspace makes the criterion vacuous and is
/// flagged degenerate.
struct EquilibriumQecReport {
  EquilibriumSubspace subspace;
  std::vector<LocalOperator> family;
  bool degenerate = false;
  KLReport basis;
  KLReport random;
  std::vector<TcfReport> tcf;
};

inline EquilibriumQecReport qec_on_equilibrium(int n, const ThermoParams& params, int bins,
                                               double tau, int weight, int family_size,
                                               std::uint64_t seed, int samples = 32,
                                               double tol = 1e-8) {
  EquilibriumQecReport rep;
  rep.subspace = select_equilibrium_subspace(n, params, bins, tau);
  rep.degenerate = rep.subspace.dim() == 1;
  rep.family = random_error_family(n, weight, family_size, seed);
  const PackedSubspace pack(rep.subspace);
  rep.basis = kl_check_basis(ErrorChannel::from_operators(n, rep.family), pack, tol);
  rep.random = kl_check_random(ErrorChannel::from_operators(n, rep.family), pack,
                               std::max(2, samples), seed, tol);
  for (const auto& op : default_tcf_operators())
    rep.tcf.push_back(tcf_report(op, rep.subspace, samples, seed, false, &pack));
  return rep;
}

// Fixture codes used by tests and the command-line runner.

/// span{|00...0>, |11...1>} on n qubits.
inline CodeSpace repetition_code_space(int n = 3) {
  return CodeSpace::from_vectors(
      {basis_state(n, std::string(n, '0')), basis_state(n, std::string(n, '1'))});
}

/// {Id, X_1, ..., X_n} / sqrt(n+1); correctable on the repetition code.
inline ErrorChannel repetition_x_channel(int n = 3) {
  const cdouble c(1.0 / std::sqrt(double(n + 1)));
  std::vector<LocalOperator> ops{LocalOperator::identity(c)};
  for (int j = 1; j <= n; ++j)
    ops.push_back(LocalOperator::from_string(PauliString::single(Axis::x, j, c)));
  return ErrorChannel::from_operators(n, std::move(ops));
}

/// {Id, Z_1} / sqrt(2); not correctable on the repetition code.
inline ErrorChannel z1_phase_channel(int n = 3) {
  const cdouble c(1.0 / std::sqrt(2.0));
  return ErrorChannel::from_operators(
      n, {LocalOperator::identity(c),
          LocalOperator::from_string(PauliString::single(Axis::z, 1, c))});
}

}  // namespace xx0lab
