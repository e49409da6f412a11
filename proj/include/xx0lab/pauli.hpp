#pragma once

// n-qubit basis states, Pauli strings and local operators, applied sparsely
// to dense state vectors. Sites are numbered 1..n with site 1 as the most
// significant bit of the basis index, so |00...0> is basis index 0 and is
// the +1 eigenstate of every sigma^z_j.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace xx0lab {

using cdouble = std::complex<double>;

inline constexpr int kMaxQubits = 24;

/// Single-site operator kinds. `minus` is sigma^- = (sigma^x - i sigma^y)/2,
/// which maps |0> to |1> and annihilates |1> (a particle creator on the
/// ferromagnetic reference). `plus` is its adjoint.
enum class Axis : std::uint8_t { x, y, z, minus, plus };

inline char axis_letter(Axis a) {
  switch (a) {
    case Axis::x: return 'X';
    case Axis::y: return 'Y';
    case Axis::z: return 'Z';
    case Axis::minus: return 'M';
    case Axis::plus: return 'P';
  }
  return '?';
}

struct PauliFactor {
  int site = 1;  // 1-based
  Axis axis = Axis::x;

  friend bool operator==(const PauliFactor&, const PauliFactor&) = default;
};

/// coeff * product of single-site factors on distinct sites, kept sorted by
/// site. An empty factor list is coeff * Identity. weight() counts the
/// non-identity factors.
struct PauliString {
  cdouble coeff{1.0, 0.0};
  std::vector<PauliFactor> factors;

  int weight() const { return static_cast<int>(factors.size()); }

  static PauliString identity(cdouble c = 1.0) { return PauliString{c, {}}; }

  static PauliString single(Axis a, int site, cdouble c = 1.0) {
    return PauliString{c, {PauliFactor{site, a}}};
  }

  /// Sorts factors by site and validates distinctness.
  void canonicalize() {
    std::sort(factors.begin(), factors.end(),
              [](const PauliFactor& a, const PauliFactor& b) { return a.site < b.site; });
    for (std::size_t i = 1; i < factors.size(); ++i) {
      if (factors[i].site == factors[i - 1].site)
        throw std::invalid_argument("PauliString: duplicate site " +
                                    std::to_string(factors[i].site));
    }
  }
};

/// A linear combination of Pauli strings (implicit sum over terms).
/// An empty term list is the zero operator.
struct LocalOperator {
  std::vector<PauliString> terms;

  int weight() const {
    int w = 0;
    for (const auto& t : terms) w = std::max(w, t.weight());
    return w;
  }

  bool is_zero() const { return terms.empty(); }

  static LocalOperator zero() { return {}; }
  static LocalOperator identity(cdouble c = 1.0) { return {{PauliString::identity(c)}}; }
  static LocalOperator from_string(PauliString s) {
    s.canonicalize();
    return {{std::move(s)}};
  }
};

inline LocalOperator operator*(cdouble c, const LocalOperator& op) {
  LocalOperator out = op;
  for (auto& t : out.terms) t.coeff *= c;
  return out;
}

inline LocalOperator operator+(const LocalOperator& a, const LocalOperator& b) {
  LocalOperator out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out;
}

/// Element of W = (C^2)^(tensor n); amplitudes indexed by the bit string
/// b1 b2 ... bn with site 1 as the most significant bit.
struct StateVector {
  int n = 0;
  Eigen::VectorXcd amp;

  std::int64_t dim() const { return amp.size(); }
  double norm2() const { return amp.squaredNorm(); }
};

struct DensityMatrix {
  int n = 0;
  Eigen::MatrixXcd entries;

  static DensityMatrix from_state(const StateVector& v) {
    double n2 = v.norm2();
    if (n2 <= 0.0) throw std::invalid_argument("DensityMatrix: zero state");
    DensityMatrix p;
    p.n = v.n;
    p.entries = (v.amp * v.amp.adjoint()) / n2;
    return p;
  }
};

inline void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("qubit count must be in 1.." + std::to_string(kMaxQubits));
}

/// Unit basis vector |bits>, bits given as a string of '0'/'1' of length n.
inline StateVector basis_state(int n, const std::string& bits) {
  check_qubit_count(n);
  if (static_cast<int>(bits.size()) != n)
    throw std::invalid_argument("basis_state: bit string length != n");
  std::int64_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("basis_state: bad bit char");
    idx = (idx << 1) | (c == '1' ? 1 : 0);
  }
  StateVector v;
  v.n = n;
  v.amp = Eigen::VectorXcd::Zero(std::int64_t(1) << n);
  v.amp[idx] = 1.0;
  return v;
}

namespace detail {

inline void check_sites(const PauliString& p, int n) {
  for (const auto& f : p.factors)
    if (f.site < 1 || f.site > n)
      throw std::invalid_argument("Pauli factor site " + std::to_string(f.site) +
                                  " out of range 1.." + std::to_string(n));
}

/// Action of a Pauli string on one basis index: returns false if the state is
/// annihilated, otherwise sets the image index and multiplies the phase.
/// Convention: x flips the bit; y flips with phase +i on bit 0 and -i on
/// bit 1; z gives +1 on bit 0 and -1 on bit 1; minus maps 0->1, kills 1;
/// plus maps 1->0, kills 0.
inline bool apply_to_mask(const PauliString& p, int n, std::uint32_t mask,
                          std::uint32_t& out_mask, cdouble& out_phase) {
  std::uint32_t m = mask;
  cdouble f = p.coeff;
  for (const auto& fac : p.factors) {
    const int bitpos = n - fac.site;
    const std::uint32_t bit = (m >> bitpos) & 1u;
    switch (fac.axis) {
      case Axis::x:
        m ^= (1u << bitpos);
        break;
      case Axis::y:
        f *= bit ? cdouble(0, -1) : cdouble(0, 1);
        m ^= (1u << bitpos);
        break;
      case Axis::z:
        if (bit) f = -f;
        break;
      case Axis::minus:
        if (bit) return false;
        m ^= (1u << bitpos);
        break;
      case Axis::plus:
        if (!bit) return false;
        m ^= (1u << bitpos);
        break;
    }
  }
  out_mask = m;
  out_phase = f;
  return true;
}

}  // namespace detail

/// P|v>, computed factor-by-factor in one pass over the basis.
inline StateVector apply_pauli_string(const PauliString& p, const StateVector& v) {
  detail::check_sites(p, v.n);
  StateVector out;
  out.n = v.n;
  out.amp = Eigen::VectorXcd::Zero(v.dim());
  const std::int64_t d = v.dim();
  for (std::int64_t b = 0; b < d; ++b) {
    const cdouble a = v.amp[b];
    if (a == cdouble(0.0, 0.0)) continue;
    std::uint32_t b2;
    cdouble f;
    if (detail::apply_to_mask(p, v.n, static_cast<std::uint32_t>(b), b2, f))
      out.amp[b2] += f * a;
  }
  return out;
}

/// O|v> = sum of terms; the zero operator gives the zero vector.
inline StateVector apply_local_operator(const LocalOperator& op, const StateVector& v) {
  StateVector out;
  out.n = v.n;
  out.amp = Eigen::VectorXcd::Zero(v.dim());
  for (const auto& t : op.terms) {
    detail::check_sites(t, v.n);
    const std::int64_t d = v.dim();
    for (std::int64_t b = 0; b < d; ++b) {
      const cdouble a = v.amp[b];
      if (a == cdouble(0.0, 0.0)) continue;
      std::uint32_t b2;
      cdouble f;
      if (detail::apply_to_mask(t, v.n, static_cast<std::uint32_t>(b), b2, f))
        out.amp[b2] += f * a;
    }
  }
  return out;
}

inline PauliString adjoint(const PauliString& p) {
  PauliString out;
  out.coeff = std::conj(p.coeff);
  out.factors = p.factors;
  for (auto& f : out.factors) {
    if (f.axis == Axis::minus)
      f.axis = Axis::plus;
    else if (f.axis == Axis::plus)
      f.axis = Axis::minus;
  }
  return out;
}

inline LocalOperator adjoint(const LocalOperator& op) {
  LocalOperator out;
  out.terms.reserve(op.terms.size());
  for (const auto& t : op.terms) out.terms.push_back(adjoint(t));
  return out;
}

namespace detail {

// Single-site operators expressed in the {I, x, y, z} basis so that products
// of any two factor kinds reduce via the Pauli multiplication table.
struct SiteCombo {
  std::array<cdouble, 4> w{};  // I, x, y, z
};

inline SiteCombo combo_of(Axis a) {
  SiteCombo c;
  switch (a) {
    case Axis::x: c.w[1] = 1.0; break;
    case Axis::y: c.w[2] = 1.0; break;
    case Axis::z: c.w[3] = 1.0; break;
    case Axis::minus:  // (x - i y)/2
      c.w[1] = 0.5;
      c.w[2] = cdouble(0, -0.5);
      break;
    case Axis::plus:  // (x + i y)/2
      c.w[1] = 0.5;
      c.w[2] = cdouble(0, 0.5);
      break;
  }
  return c;
}

// index: 0=I, 1=x, 2=y, 3=z. prod_axis[a][b], prod_phase[a][b].
inline constexpr int kProdAxis[4][4] = {
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0}};

inline const cdouble kProdPhase[4][4] = {
    {1, 1, 1, 1},
    {1, 1, {0, 1}, {0, -1}},
    {1, {0, -1}, 1, {0, 1}},
    {1, {0, 1}, {0, -1}, 1}};

inline SiteCombo combo_mul(const SiteCombo& a, const SiteCombo& b) {
  SiteCombo out;
  for (int i = 0; i < 4; ++i) {
    if (a.w[i] == cdouble(0.0)) continue;
    for (int j = 0; j < 4; ++j) {
      if (b.w[j] == cdouble(0.0)) continue;
      out.w[kProdAxis[i][j]] += a.w[i] * b.w[j] * kProdPhase[i][j];
    }
  }
  return out;
}

inline Axis axis_of_index(int i) {
  switch (i) {
    case 1: return Axis::x;
    case 2: return Axis::y;
    default: return Axis::z;
  }
}

}  // namespace detail

/// Combines equal factor lists and drops exactly-cancelled terms. Term order
/// is canonical (lexicographic in (site, axis) lists), so results are
/// reproducible.
inline LocalOperator combine_terms(const LocalOperator& op) {
  using Key = std::vector<std::pair<int, int>>;
  std::map<Key, cdouble> acc;
  for (const auto& t : op.terms) {
    Key k;
    k.reserve(t.factors.size());
    for (const auto& f : t.factors) k.emplace_back(f.site, static_cast<int>(f.axis));
    acc[k] += t.coeff;
  }
  LocalOperator out;
  for (const auto& [k, c] : acc) {
    if (c == cdouble(0.0)) continue;
    PauliString s;
    s.coeff = c;
    for (const auto& [site, ax] : k) s.factors.push_back({site, static_cast<Axis>(ax)});
    out.terms.push_back(std::move(s));
  }
  return out;
}

/// Product A*B with single-site products reduced through the Pauli table
/// (xy = iz and so on). sigma^-/sigma^+ factors meeting another factor on the
/// same site are expanded through (x -+ i y)/2, so the result is again a sum
/// of Pauli strings; lone minus/plus factors pass through unchanged.
inline LocalOperator compose(const LocalOperator& a, const LocalOperator& b) {
  LocalOperator out;
  for (const auto& ta : a.terms) {
    for (const auto& tb : b.terms) {
      // Merge the two factor lists site by site.
      struct SitePair {
        int site;
        const PauliFactor* fa;
        const PauliFactor* fb;
      };
      std::vector<SitePair> sites;
      std::size_t i = 0, j = 0;
      while (i < ta.factors.size() || j < tb.factors.size()) {
        if (j >= tb.factors.size() ||
            (i < ta.factors.size() && ta.factors[i].site < tb.factors[j].site)) {
          sites.push_back({ta.factors[i].site, &ta.factors[i], nullptr});
          ++i;
        } else if (i >= ta.factors.size() || tb.factors[j].site < ta.factors[i].site) {
          sites.push_back({tb.factors[j].site, nullptr, &tb.factors[j]});
          ++j;
        } else {
          sites.push_back({ta.factors[i].site, &ta.factors[i], &tb.factors[j]});
          ++i;
          ++j;
        }
      }
      // Expand: every partial product is a coefficient plus factor list.
      std::vector<PauliString> partial{PauliString::identity(ta.coeff * tb.coeff)};
      for (const auto& sp : sites) {
        if (sp.fa && sp.fb) {
          const auto combo =
              detail::combo_mul(detail::combo_of(sp.fa->axis), detail::combo_of(sp.fb->axis));
          std::vector<PauliString> next;
          for (const auto& ps : partial) {
            for (int idx = 0; idx < 4; ++idx) {
              if (combo.w[idx] == cdouble(0.0)) continue;
              PauliString q = ps;
              q.coeff *= combo.w[idx];
              if (idx != 0) q.factors.push_back({sp.site, detail::axis_of_index(idx)});
              next.push_back(std::move(q));
            }
          }
          partial = std::move(next);
        } else {
          const PauliFactor f = sp.fa ? *sp.fa : *sp.fb;
          for (auto& ps : partial) ps.factors.push_back(f);
        }
      }
      for (auto& ps : partial) out.terms.push_back(std::move(ps));
    }
  }
  return combine_terms(out);
}

/// Dense 2^n x 2^n matrix of a local operator. Intended for small n only.
inline Eigen::MatrixXcd to_dense(const LocalOperator& op, int n) {
  check_qubit_count(n);
  if (n > 12) throw std::invalid_argument("to_dense: n too large for a dense matrix");
  const std::int64_t d = std::int64_t(1) << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : op.terms) {
    detail::check_sites(t, n);
    for (std::int64_t b = 0; b < d; ++b) {
      std::uint32_t b2;
      cdouble f;
      if (detail::apply_to_mask(t, n, static_cast<std::uint32_t>(b), b2, f)) out(b2, b) += f;
    }
  }
  return out;
}

namespace detail {

inline unsigned long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(n - k + i) / i;
  return r;
}

// Lexicographic unranking of a k-combination out of n (0-based members).
inline std::vector<int> unrank_combination(int n, int k, unsigned long long rank) {
  std::vector<int> out;
  out.reserve(k);
  int next = 0;
  for (int slot = 0; slot < k; ++slot) {
    for (int v = next;; ++v) {
      const unsigned long long c = binomial(n - v - 1, k - slot - 1);
      if (rank < c) {
        out.push_back(v);
        next = v + 1;
        break;
      }
      rank -= c;
    }
  }
  return out;
}

}  // namespace detail

/// k distinct Pauli strings of weight <= t (x/y/z factors; weight 0 is the
/// identity), sampled uniformly from all such strings with a fixed seed.
/// With rescale on, every string is scaled by 1/sqrt(k) so that
/// sum_a E_a^dag E_a = Id.
inline std::vector<LocalOperator> random_error_family(int n, int t, int k,
                                                      std::uint64_t seed,
                                                      bool rescale = true) {
  check_qubit_count(n);
  if (t < 0 || t > n) throw std::invalid_argument("random_error_family: bad weight bound");
  if (k < 1) throw std::invalid_argument("random_error_family: k must be >= 1");

  unsigned long long total = 0;
  std::vector<unsigned long long> per_weight(t + 1);
  for (int w = 0; w <= t; ++w) {
    unsigned long long c = detail::binomial(n, w);
    for (int i = 0; i < w; ++i) c *= 3ull;
    per_weight[w] = c;
    total += c;
  }
  if (static_cast<unsigned long long>(k) > total)
    throw std::invalid_argument("random_error_family: only " + std::to_string(total) +
                                " distinct strings of weight <= " + std::to_string(t));

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned long long> pick(0, total - 1);
  std::set<std::vector<std::pair<int, int>>> seen;
  std::vector<LocalOperator> family;
  const cdouble coeff = rescale ? cdouble(1.0 / std::sqrt(double(k))) : cdouble(1.0);
  while (family.size() < static_cast<std::size_t>(k)) {
    unsigned long long u = pick(rng);
    int w = 0;
    while (u >= per_weight[w]) u -= per_weight[w++];
    const unsigned long long combos = w > 0 ? per_weight[w] / detail::binomial(n, w) : 1;
    const unsigned long long site_rank = w > 0 ? u / combos : 0;
    const unsigned long long axes_rank = w > 0 ? u % combos : 0;

    PauliString s;
    s.coeff = coeff;
    if (w > 0) {
      const auto sites = detail::unrank_combination(n, w, site_rank);
      unsigned long long ar = axes_rank;
      for (int site0 : sites) {
        const int ax = static_cast<int>(ar % 3);
        ar /= 3;
        s.factors.push_back(
            {site0 + 1, ax == 0 ? Axis::x : (ax == 1 ? Axis::y : Axis::z)});
      }
    }
    std::vector<std::pair<int, int>> key;
    for (const auto& f : s.factors) key.emplace_back(f.site, static_cast<int>(f.axis));
    if (!seen.insert(key).second) continue;
    family.push_back(LocalOperator{{s}});
  }
  return family;
}

}  // namespace xx0lab
