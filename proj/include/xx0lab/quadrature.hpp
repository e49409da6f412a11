#pragma once

// Adaptive Gauss-Kronrod (G7/K15) quadrature with interval bisection driven
// by a worst-first priority queue. All integrands here are smooth, so the
// K15-G7 difference is a reliable error estimate.

#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace xx0lab {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // accumulated estimate
  std::int64_t evaluations = 0;
  bool converged = false;
};

namespace detail {

// Kronrod-15 abscissae and weights; the Gauss-7 rule reuses the odd-indexed
// abscissae (plus the center) with its own weights.
inline constexpr double kXgk15[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr double kWgk15[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr double kWg7[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
void gk15(const F& f, double a, double b, double& value, double& err) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  const double fc = f(c);
  double kron = kWgk15[7] * fc;
  double gauss = kWg7[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = hw * kXgk15[i];
    const double fsum = f(c - x) + f(c + x);
    kron += kWgk15[i] * fsum;
    if (i % 2 == 1) gauss += kWg7[i / 2] * fsum;
  }
  value = kron * hw;
  err = std::abs((kron - gauss) * hw);
}

}  // namespace detail

/// Integrates f over [a, b] to the requested absolute tolerance. Throws if
/// the evaluation budget is exhausted first; the message carries the
/// achieved error estimate.
template <typename F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double abs_tol,
                                    std::int64_t max_evaluations = 1000000) {
  struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  QuadratureResult res;
  std::priority_queue<Panel> panels;
  double v, e;
  detail::gk15(f, a, b, v, e);
  res.evaluations = 15;
  panels.push({a, b, v, e});
  double total_err = e;
  double total_val = v;
  while (total_err > abs_tol && res.evaluations + 30 <= max_evaluations) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left{worst.a, mid, 0, 0}, right{mid, worst.b, 0, 0};
    detail::gk15(f, left.a, left.b, left.value, left.err);
    detail::gk15(f, right.a, right.b, right.value, right.err);
    res.evaluations += 30;
    total_val += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    panels.push(left);
    panels.push(right);
  }
  res.value = total_val;
  res.error = total_err;
  res.converged = total_err <= abs_tol;
  if (!res.converged)
    throw std::runtime_error("quadrature did not converge: achieved error " +
                             std::to_string(total_err) + " > tolerance " +
                             std::to_string(abs_tol));
  return res;
}

}  // namespace xx0lab
