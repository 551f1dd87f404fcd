#include "deph/dephasing.hpp"

#include <cmath>
#include <functional>

namespace deph {

namespace {

// Closed forms below are in reduced units (omega_c = 1); a general cutoff
// enters as gamma(t) = w_c * gamma_reduced(w_c t) and Lambda(t) = Lambda_reduced(w_c t).

double low_order_hint(const Environment& env, bool rate_kernel) {
  if (const auto* ohmic = std::get_if<OhmicSpectrum>(&env.spectrum)) {
    const double base = env.temperature > 0.0 ? ohmic->s - 1.0 : ohmic->s;
    (void)rate_kernel;
    return base;
  }
  return 0.0;
}

}  // namespace

double dephasing_rate_zero_T(double s, double t) {
  if (!(s > 0.0)) throw std::domain_error("dephasing_rate_zero_T: s must be > 0");
  if (t < 0.0) throw std::domain_error("dephasing_rate_zero_T: t must be >= 0");
  return std::pow(1.0 + t * t, -0.5 * s) * gamma_function(s) * std::sin(s * std::atan(t));
}

double dephasing_rate_high_T(double s, double t, double temperature) {
  if (!(s > 1.0)) throw std::domain_error("dephasing_rate_high_T: s must be > 1");
  if (!(temperature > 0.0))
    throw std::domain_error("dephasing_rate_high_T: temperature must be > 0");
  return 2.0 * temperature * dephasing_rate_zero_T(s - 1.0, t);
}

double dephasing_rate_numeric(const Environment& env, double t, const QuadratureSpec& spec) {
  if (t < 0.0) throw std::domain_error("dephasing_rate_numeric: t must be >= 0");
  if (t == 0.0) return 0.0;
  const double temp = env.temperature;
  auto integrand = [&](double w) {
    const double coth = temp == 0.0 ? 1.0 : coth_stable(w / (2.0 * temp));
    return spectral_density(env, w) * coth * std::sin(w * t) / w;
  };
  return integrate_semi_infinite(integrand, spec, t, low_order_hint(env, true));
}

double dephasing_factor(const Environment& env, double t, const QuadratureSpec& spec) {
  if (t < 0.0) throw std::domain_error("dephasing_factor: t must be >= 0");
  if (t == 0.0) return 0.0;
  auto integrand = [&](double w) {
    const double sh = std::sin(0.5 * w * t);
    return thermal_weight(env, w) * 2.0 * sh * sh;  // 1 - cos(w t), cancellation-free
  };
  const double lambda = integrate_semi_infinite(integrand, spec, t, low_order_hint(env, false));
  return std::max(lambda, 0.0);
}

double coherence(const Environment& env, double t, const QuadratureSpec& spec) {
  return std::exp(-dephasing_factor(env, t, spec));
}

FactorAsymptote factor_asymptote(const Environment& env, const QuadratureSpec& spec) {
  const auto* ohmic = std::get_if<OhmicSpectrum>(&env.spectrum);
  if (ohmic == nullptr)
    throw std::invalid_argument("factor_asymptote: requires an Ohmic spectrum");
  const double s = ohmic->s;
  if (env.temperature == 0.0) {
    if (s <= 1.0) return {true, 0.0};
    return {false, 2.0 * gamma_function(s - 1.0)};
  }
  if (s <= 2.0) return {true, 0.0};
  auto integrand = [&](double w) { return thermal_weight(env, w); };
  return {false, integrate_semi_infinite(integrand, spec, 0.0, s - 3.0)};
}

namespace {

std::function<double(double)> rate_evaluator(const Environment& env) {
  const auto* ohmic = std::get_if<OhmicSpectrum>(&env.spectrum);
  if (ohmic != nullptr && env.temperature == 0.0) {
    const double s = ohmic->s, oc = ohmic->omega_c;
    return [s, oc](double t) { return oc * dephasing_rate_zero_T(s, oc * t); };
  }
  if (ohmic != nullptr && env.temperature >= kHighTemperatureThreshold && ohmic->s > 1.0) {
    const double s = ohmic->s, oc = ohmic->omega_c, temp = env.temperature;
    return [s, oc, temp](double t) { return oc * dephasing_rate_high_T(s, oc * t, temp); };
  }
  return [env](double t) { return dephasing_rate_numeric(env, t); };
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
  g.back() = hi;
  return g;
}

}  // namespace

NegativeRateReport negative_rate_report(const Environment& env, double t_max, int n_grid) {
  if (!(t_max > 0.0)) throw std::invalid_argument("negative_rate_report: t_max must be > 0");
  if (n_grid < 8) throw std::invalid_argument("negative_rate_report: n_grid too small");
  const auto rate = rate_evaluator(env);

  const double t_lo = std::min(1e-2, t_max * 1e-4);
  const auto grid = log_grid(t_lo, t_max, n_grid);
  std::vector<double> vals(grid.size());
  double max_abs = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = rate(grid[i]);
    if (!std::isfinite(vals[i]))
      throw ConvergenceError("negative_rate_report: non-finite rate evaluation");
    max_abs = std::max(max_abs, std::abs(vals[i]));
  }
  const double floor = 1e-12 * max_abs;  // quadrature noise must not flip the verdict

  // Refined sign-change times, then maximal negative stretches between them.
  std::vector<double> zeros;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (vals[i - 1] * vals[i] < 0.0)
      zeros.push_back(find_root_bracketed(rate, {grid[i - 1], grid[i]}, 1e-10 * grid[i]));
  }

  NegativeRateReport report;
  std::vector<double> edges;
  edges.push_back(t_lo);
  edges.insert(edges.end(), zeros.begin(), zeros.end());
  edges.push_back(t_max);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = edges[k], b = edges[k + 1];
    // most negative sample inside (a, b)
    double min_val = 0.0;
    bool sampled = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] > a && grid[i] < b) {
        min_val = sampled ? std::min(min_val, vals[i]) : vals[i];
        sampled = true;
      }
    }
    if (!sampled) {
      min_val = rate(0.5 * (a + b));
      sampled = true;
    }
    if (min_val < -floor) {
      const double start = k == 0 ? t_lo : edges[k];
      report.intervals.emplace_back(start, b);
    }
  }
  report.non_markovian = !report.intervals.empty();
  double measure = 0.0;
  for (const auto& [a, b] : report.intervals) measure += coherence(env, b) - coherence(env, a);
  report.backflow_measure = std::max(measure, 0.0);
  return report;
}

double find_s_crit(double temperature) {
  if (temperature < 0.0) throw std::domain_error("find_s_crit: temperature must be >= 0");

  auto turns_negative = [&](double s) {
    // Horizon grows near the threshold, where the first zero crossing of the
    // rate moves to late times.
    const double t_max = std::max(100.0, 10.0 * std::tan(M_PI / std::min(s, 3.9)));
    const Environment env{OhmicSpectrum{s, 1.0}, temperature};
    const auto rate = rate_evaluator(env);
    const bool closed_form =
        temperature == 0.0 || (temperature >= kHighTemperatureThreshold && s > 1.0);
    const int n = closed_form ? 3000 : 600;
    const auto grid = log_grid(1e-2, t_max, n);
    double max_abs = 0.0;
    for (const double t : grid) {
      const double g = rate(t);
      max_abs = std::max(max_abs, std::abs(g));
      if (g < -1e-12 * max_abs) return true;  // onset precedes the running max's decay
    }
    return false;
  };

  double lo = 1.9, hi = 3.1;
  if (turns_negative(lo) || !turns_negative(hi))
    throw BracketError("find_s_crit: negativity predicate constant over [1.9, 3.1]");
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (turns_negative(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

DephasingTrajectory trajectory(const Environment& env, std::span<const double> times,
                               const QuadratureSpec& spec) {
  DephasingTrajectory traj;
  traj.times.assign(times.begin(), times.end());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] < 0.0 || (i > 0 && !(traj.times[i] > traj.times[i - 1])))
      throw std::invalid_argument("trajectory: times must be strictly increasing and >= 0");
  }
  const auto* ohmic = std::get_if<OhmicSpectrum>(&env.spectrum);
  const bool zero_t_closed = ohmic != nullptr && env.temperature == 0.0;
  traj.rate.reserve(traj.times.size());
  traj.factor.reserve(traj.times.size());
  traj.coherence.reserve(traj.times.size());
  for (const double t : traj.times) {
    const double g = zero_t_closed
                         ? ohmic->omega_c * dephasing_rate_zero_T(ohmic->s, ohmic->omega_c * t)
                         : dephasing_rate_numeric(env, t, spec);
    const double lam = dephasing_factor(env, t, spec);
    traj.rate.push_back(g);
    traj.factor.push_back(lam);
    traj.coherence.push_back(std::exp(-lam));
  }
  return traj;
}

}  // namespace deph
