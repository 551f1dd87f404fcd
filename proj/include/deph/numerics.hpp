#pragma once

// Numerical kernels shared by all modules: Gauss-Legendre quadrature over
// the half line with oscillation-aware segmentation, a bracketed root
// finder, finite differences and a sign-change scanner.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace deph {

struct QuadratureSpec {
  double relative_tolerance = 1e-10;
  double absolute_tolerance = 1e-12;
  int max_subdivisions = 4000;          // adaptive bisection budget per segment
  double truncation_threshold = 1e-14;  // envelope cutoff relative to the partial sum
};

struct Bracket {
  double lo;
  double hi;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Euler gamma function for x > 0.
inline double gamma_function(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_function: argument must be > 0");
  return std::tgamma(x);
}

namespace detail {

template <int N>
struct GaussLegendre {
  std::array<double, N> node{};
  std::array<double, N> weight{};

  GaussLegendre() {
    const int m = (N + 1) / 2;
    for (int i = 0; i < m; ++i) {
      // Newton iteration on P_N from the Chebyshev-like initial guess.
      double x = std::cos(M_PI * (i + 0.75) / (N + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 64; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= N; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = N * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-16 * std::max(1.0, std::abs(x))) break;
      }
      node[i] = -x;
      node[N - 1 - i] = x;
      weight[i] = weight[N - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
  }
};

inline const GaussLegendre<10>& gl10() {
  static const GaussLegendre<10> rule;
  return rule;
}

inline const GaussLegendre<20>& gl20() {
  static const GaussLegendre<20> rule;
  return rule;
}

template <class F, int N>
double gl_eval(F& f, const GaussLegendre<N>& rule, double a, double b, double* max_abs) {
  const double hw = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = mid + hw * rule.node[i];
    const double v = f(x);
    if (!std::isfinite(v)) throw QuadratureError("integrand evaluated to a non-finite value");
    if (max_abs != nullptr) *max_abs = std::max(*max_abs, std::abs(v));
    acc += rule.weight[i] * v;
  }
  return acc * hw;
}

template <class F>
double integrate_adaptive(F& f, double a, double b, double rel, double abs_tol, int& budget,
                          double* max_abs) {
  const double i20 = gl_eval(f, gl20(), a, b, max_abs);
  const double i10 = gl_eval(f, gl10(), a, b, nullptr);
  const double err = std::abs(i20 - i10);
  if (err <= std::max(abs_tol, rel * std::abs(i20))) return i20;
  if (--budget <= 0) throw QuadratureError("integrate_semi_infinite: subdivision budget exhausted");
  const double m = 0.5 * (a + b);
  return integrate_adaptive(f, a, m, rel, 0.5 * abs_tol, budget, max_abs) +
         integrate_adaptive(f, m, b, rel, 0.5 * abs_tol, budget, max_abs);
}

inline void check_spec(const QuadratureSpec& spec) {
  if (!(spec.relative_tolerance > 0.0) || !(spec.absolute_tolerance > 0.0) ||
      spec.max_subdivisions < 1) {
    throw std::invalid_argument("QuadratureSpec: tolerances must be positive, max_subdivisions >= 1");
  }
}

}  // namespace detail

/// Integrates f over (0, inf).
///
/// oscillation_frequency > 0 splits the axis at half periods pi/freq so each
/// segment holds at most half an oscillation (callers integrating sin(w t) or
/// 1-cos(w t) kernels pass t here). low_order is the power-law exponent of f
/// at 0+; exponents below 1/2 trigger a substitution w = u^k on the first
/// segment that removes the integrable singularity. The tail is truncated
/// once the integrand envelope stays below truncation_threshold times the
/// accumulated sum.
template <class F>
double integrate_semi_infinite(F&& f, const QuadratureSpec& spec = {},
                               double oscillation_frequency = 0.0, double low_order = 1.0) {
  detail::check_spec(spec);
  const double osc_width =
      oscillation_frequency > 0.0 ? M_PI / oscillation_frequency : 0.0;
  const double rel_seg = spec.relative_tolerance;
  const double abs_seg = spec.absolute_tolerance * 1e-3;

  double sum = 0.0, comp = 0.0;  // Kahan
  auto accumulate = [&](double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };

  // First segment, with singularity-removing substitution if needed.
  const double b1 = osc_width > 0.0 ? osc_width : 1.0;
  {
    int budget = spec.max_subdivisions;
    double seg_max = 0.0;
    if (low_order < 0.5) {
      if (low_order <= -1.0)
        throw QuadratureError("integrate_semi_infinite: non-integrable endpoint (order <= -1)");
      const double k = std::clamp(2.0 / (1.0 + low_order), 2.0, 80.0);
      const double ub = std::pow(b1, 1.0 / k);
      auto fsub = [&](double u) { return f(std::pow(u, k)) * k * std::pow(u, k - 1.0); };
      accumulate(detail::integrate_adaptive(fsub, 0.0, ub, rel_seg, abs_seg, budget, &seg_max));
    } else {
      accumulate(detail::integrate_adaptive(f, 0.0, b1, rel_seg, abs_seg, budget, &seg_max));
    }
  }

  constexpr std::size_t kMaxSegments = 3'000'000;
  double a = b1;
  double width = b1;
  int quiet = 0;
  for (std::size_t i = 1;; ++i) {
    double b;
    if (osc_width > 0.0) {
      b = a + osc_width;
    } else {
      width = std::min(width * 2.0, 16.0);
      b = a + width;
    }
    int budget = spec.max_subdivisions;
    double seg_max = 0.0;
    accumulate(detail::integrate_adaptive(f, a, b, rel_seg, abs_seg, budget, &seg_max));
    const double scale = std::max(std::abs(sum), spec.absolute_tolerance);
    if (i >= 8 && seg_max * (b - a) <= spec.truncation_threshold * scale) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
    a = b;
    if (i > kMaxSegments)
      throw QuadratureError("integrate_semi_infinite: tail failed to decay below threshold");
  }
  return sum;
}

/// Bisection with a secant acceleration step; the secant iterate is used only
/// while it stays inside the current bracket.
template <class F>
double find_root_bracketed(F&& f, Bracket b, double tol = 1e-12) {
  if (!(b.lo < b.hi)) throw std::invalid_argument("find_root_bracketed: requires lo < hi");
  double lo = b.lo, hi = b.hi;
  double flo = f(lo), fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi))
    throw ConvergenceError("find_root_bracketed: non-finite endpoint value");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw BracketError("find_root_bracketed: endpoint values have the same sign");

  for (int it = 0; it < 200; ++it) {
    const double w = hi - lo;
    const double tol_eff = std::max(tol, 4.0 * 2.22e-16 * std::max({1.0, std::abs(lo), std::abs(hi)}));
    if (w <= tol_eff) break;
    double x;
    if (it % 3 != 2 && fhi != flo) {
      x = lo - flo * w / (fhi - flo);
      if (!(x > lo + 0.01 * w && x < hi - 0.01 * w)) x = 0.5 * (lo + hi);
    } else {
      x = 0.5 * (lo + hi);  // periodic forced bisection keeps the width shrinking
    }
    const double fx = f(x);
    if (!std::isfinite(fx)) throw ConvergenceError("find_root_bracketed: non-finite evaluation");
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
  }
  return 0.5 * (lo + hi);
}

/// Central-difference second derivative; h <= 0 selects the default step.
template <class F>
double second_derivative(F&& f, double x, double h = 0.0) {
  if (h <= 0.0) h = std::max(1e-4, 1e-4 * std::abs(x));
  const double fm = f(x - h), f0 = f(x), fp = f(x + h);
  if (!std::isfinite(fm) || !std::isfinite(f0) || !std::isfinite(fp))
    throw ConvergenceError("second_derivative: non-finite evaluation");
  return (fm - 2.0 * f0 + fp) / (h * h);
}

/// Returns every consecutive grid pair over which f changes sign, in
/// increasing order. Exact zeros on the grid carry the previous sign forward
/// so the zero lands on a bracket edge.
template <class F>
std::vector<Bracket> sign_change_scan(F&& f, double lo, double hi, int n_grid) {
  if (!(lo < hi) || n_grid < 2) throw std::invalid_argument("sign_change_scan: invalid grid");
  std::vector<Bracket> out;
  double prev_x = lo;
  double prev_f = f(lo);
  if (!std::isfinite(prev_f)) throw ConvergenceError("sign_change_scan: non-finite evaluation");
  for (int i = 1; i < n_grid; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / (n_grid - 1);
    const double v = f(x);
    if (!std::isfinite(v)) throw ConvergenceError("sign_change_scan: non-finite evaluation");
    if (prev_f * v < 0.0) out.push_back({prev_x, x});
    prev_x = x;
    if (v != 0.0) prev_f = v;
  }
  return out;
}

}  // namespace deph
