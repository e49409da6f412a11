#pragma once

// Independent dense oracles for the test suite. Everything here is built
// from explicit 2x2 matrices and Kronecker products, deliberately avoiding
// the library's bit-twiddling code paths so the two routes can check each
// other.

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "xx0lab/pauli.hpp"

namespace oracles {

using xx0lab::cdouble;
using Matrix = Eigen::MatrixXcd;

inline Matrix pauli2(xx0lab::Axis a) {
  Matrix m(2, 2);
  using xx0lab::Axis;
  switch (a) {
    case Axis::x: m << 0, 1, 1, 0; break;
    case Axis::y: m << 0, cdouble(0, -1), cdouble(0, 1), 0; break;
    case Axis::z: m << 1, 0, 0, -1; break;
    case Axis::minus: m << 0, 0, 1, 0; break;
    case Axis::plus: m << 0, 1, 0, 0; break;
  }
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Dense matrix of one Pauli string via site-by-site Kronecker products
/// (site 1 is the leftmost tensor factor, matching the MSB convention).
inline Matrix dense_string(const xx0lab::PauliString& p, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int site = 1; site <= n; ++site) {
    Matrix factor = Matrix::Identity(2, 2);
    for (const auto& f : p.factors)
      if (f.site == site) factor = pauli2(f.axis);
    out = kron(out, factor);
  }
  return p.coeff * out;
}

inline Matrix dense_operator(const xx0lab::LocalOperator& op, int n) {
  const Eigen::Index d = Eigen::Index(1) << n;
  Matrix out = Matrix::Zero(d, d);
  for (const auto& t : op.terms) out += dense_string(t, n);
  return out;
}

/// Dense XX0 Hamiltonian as a literal sum over j = 1..n of the three bond
/// and field strings (the wrap bond is double-counted at n = 2, exactly as
/// the term list says).
inline Matrix dense_xx0_hamiltonian(int n, double h) {
  const Eigen::Index d = Eigen::Index(1) << n;
  Matrix ham = Matrix::Zero(d, d);
  for (int j = 1; j <= n; ++j) {
    const int j2 = (j % n) + 1;
    using xx0lab::Axis;
    using xx0lab::PauliFactor;
    xx0lab::PauliString xx{-1.0, {PauliFactor{j, Axis::x}, PauliFactor{j2, Axis::x}}};
    xx.canonicalize();
    xx0lab::PauliString yy{-1.0, {PauliFactor{j, Axis::y}, PauliFactor{j2, Axis::y}}};
    yy.canonicalize();
    ham += dense_string(xx, n);
    ham += dense_string(yy, n);
    ham += dense_string(xx0lab::PauliString::single(Axis::z, j, -h), n);
  }
  return ham;
}

inline Eigen::VectorXd dense_spectrum(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  return es.eigenvalues();
}

/// Random (seeded) local operator with factor axes drawn from the given set.
inline xx0lab::LocalOperator random_operator(int n, int max_terms, std::mt19937_64& rng,
                                             bool allow_ladder = true) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> naxes(0, allow_ladder ? 4 : 2);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  xx0lab::LocalOperator op;
  const int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    xx0lab::PauliString s;
    s.coeff = cdouble(coeff(rng), coeff(rng));
    for (int site = 1; site <= n; ++site)
      if (coin(rng)) s.factors.push_back({site, static_cast<xx0lab::Axis>(naxes(rng))});
    op.terms.push_back(std::move(s));
  }
  return op;
}

inline xx0lab::StateVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  xx0lab::StateVector v;
  v.n = n;
  v.amp.resize(Eigen::Index(1) << n);
  for (Eigen::Index i = 0; i < v.amp.size(); ++i) v.amp[i] = cdouble(gauss(rng), gauss(rng));
  v.amp /= v.amp.norm();
  return v;
}

}  // namespace oracles
