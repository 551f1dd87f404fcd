#include "deph/correlations.hpp"

#include <cmath>

#include "deph/parallel.hpp"

namespace deph {

namespace {

void check_state(const BellDiagonalParams& p) {
  if (!(std::abs(p.c) < 1.0))
    throw std::domain_error("BellDiagonalParams: requires |c| < 1");
}

// sum_{j=1,2} (1+(-1)^j x)/2 log2[1+(-1)^j x], with 0 log 0 = 0.
double entropy_sum(double x) {
  auto term = [](double a) { return a <= 0.0 ? 0.0 : 0.5 * a * std::log2(a); };
  return term(1.0 - x) + term(1.0 + x);
}

}  // namespace

double mutual_information(const BellDiagonalParams& p, double lambda) {
  check_state(p);
  if (lambda < 0.0) throw std::domain_error("mutual_information: Lambda must be >= 0");
  return entropy_sum(std::abs(p.c)) + entropy_sum(std::exp(-lambda));
}

double classical_correlations(const BellDiagonalParams& p, double lambda) {
  check_state(p);
  if (lambda < 0.0) throw std::domain_error("classical_correlations: Lambda must be >= 0");
  const double chi = std::max(std::exp(-lambda), std::abs(p.c));
  return entropy_sum(chi);
}

double discord(const BellDiagonalParams& p, double lambda) {
  const double q = mutual_information(p, lambda) - classical_correlations(p, lambda);
  if (q < -1e-12)
    throw std::logic_error("discord: mutual information fell below classical correlations");
  return std::max(q, 0.0);
}

double frozen_discord_value(const BellDiagonalParams& p) {
  check_state(p);
  return entropy_sum(std::abs(p.c));
}

SupFactor sup_dephasing_factor(const Environment& env) {
  const auto asym = factor_asymptote(env);
  if (asym.diverges) return {true, 0.0};
  const auto& ohmic = std::get<OhmicSpectrum>(env.spectrum);
  double sup = asym.value;
  if (ohmic.s > 2.0) {
    // Rate may turn negative; Lambda peaks at the onset of each negative
    // stretch, so evaluate it there.
    const double t_max = std::max(100.0, 10.0 * std::tan(M_PI / std::min(ohmic.s, 3.9)));
    const auto report = negative_rate_report(env, t_max, 800);
    for (const auto& [start, end] : report.intervals)
      sup = std::max(sup, dephasing_factor(env, start));
  }
  return {false, sup};
}

TransitionResult transition_time(const Environment& env, const BellDiagonalParams& p,
                                 double t_max) {
  check_state(p);
  const double c = std::abs(p.c);
  if (!(c > 0.0)) throw std::domain_error("transition_time: requires 0 < |c| < 1");
  if (!(t_max > 0.0)) throw std::invalid_argument("transition_time: t_max must be > 0");

  auto gap = [&](double t) { return coherence(env, t) - c; };
  const int n = 400;
  const double t_lo = std::min(1e-2, t_max * 1e-3);
  double prev_t = t_lo;
  double prev_g = gap(t_lo);
  if (prev_g <= 0.0) {
    // coherence already at or below c at the scan start; bracket from 0
    const double root = prev_g == 0.0 ? t_lo : find_root_bracketed(gap, {0.0, t_lo}, 1e-9);
    return {TransitionStatus::Found, root};
  }
  const double llo = std::log(t_lo), lhi = std::log(t_max);
  for (int i = 1; i < n; ++i) {
    const double t = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
    const double g = gap(t);
    if (g <= 0.0) {
      const double root = find_root_bracketed(gap, {prev_t, t}, 1e-9 * std::max(1.0, t));
      return {TransitionStatus::Found, root};
    }
    prev_t = t;
    prev_g = g;
  }
  const auto sup = sup_dephasing_factor(env);
  if (!sup.diverges && std::exp(-sup.value) > c) return {TransitionStatus::None, 0.0};
  return {TransitionStatus::Indeterminate, 0.0};
}

double markovian_transition_time(double c, double gamma) {
  const double ac = std::abs(c);
  if (!(ac > 0.0) || !(ac < 1.0))
    throw std::domain_error("markovian_transition_time: requires 0 < |c| < 1");
  if (!(gamma > 0.0)) throw std::domain_error("markovian_transition_time: gamma must be > 0");
  return -std::log(ac) / (2.0 * gamma);
}

bool is_time_invariant_discord(const Environment& env, const BellDiagonalParams& p) {
  check_state(p);
  if (!(std::abs(p.c) > 0.0))
    throw std::domain_error("is_time_invariant_discord: requires 0 < |c| < 1");
  const auto sup = sup_dephasing_factor(env);
  if (sup.diverges) return false;
  return sup.value < std::log(1.0 / std::abs(p.c));
}

bool is_time_invariant_discord(double sup_lambda, const BellDiagonalParams& p) {
  check_state(p);
  if (!(std::abs(p.c) > 0.0))
    throw std::domain_error("is_time_invariant_discord: requires 0 < |c| < 1");
  if (!std::isfinite(sup_lambda)) return false;
  return sup_lambda < std::log(1.0 / std::abs(p.c));
}

FrozenRegion frozen_region(double temperature, std::span<const double> s_grid, int threads) {
  if (temperature < 0.0) throw std::domain_error("frozen_region: temperature must be >= 0");
  FrozenRegion region;
  region.s_grid.assign(s_grid.begin(), s_grid.end());
  const int n = static_cast<int>(region.s_grid.size());
  region.boundary_c.assign(region.s_grid.size(), 0.0);
  region.empty_flag.assign(region.s_grid.size(), false);
  parallel_for(n, threads, [&](int i) {
    const Environment env{OhmicSpectrum{region.s_grid[static_cast<std::size_t>(i)], 1.0},
                          temperature};
    const auto sup = sup_dephasing_factor(env);
    if (sup.diverges) {
      region.boundary_c[static_cast<std::size_t>(i)] = 0.0;
      region.empty_flag[static_cast<std::size_t>(i)] = true;
    } else {
      region.boundary_c[static_cast<std::size_t>(i)] = std::exp(-sup.value);
    }
  });
  return region;
}

CorrelationTrajectory correlation_trajectories(const Environment& env,
                                               const BellDiagonalParams& p,
                                               std::span<const double> times) {
  check_state(p);
  CorrelationTrajectory traj;
  traj.times.assign(times.begin(), times.end());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] < 0.0 || (i > 0 && !(traj.times[i] > traj.times[i - 1])))
      throw std::invalid_argument(
          "correlation_trajectories: times must be strictly increasing and >= 0");
  }
  traj.mutual_information.reserve(traj.times.size());
  traj.classical.reserve(traj.times.size());
  traj.discord.reserve(traj.times.size());
  for (const double t : traj.times) {
    const double lam = dephasing_factor(env, t);
    traj.mutual_information.push_back(mutual_information(p, lam));
    traj.classical.push_back(classical_correlations(p, lam));
    traj.discord.push_back(discord(p, lam));
  }
  if (std::abs(p.c) > 0.0 && !traj.times.empty() && traj.times.back() > 0.0)
    traj.transition = transition_time(env, p, traj.times.back());
  return traj;
}

TransitionLandscape transition_landscape(double temperature, double c,
                                         std::span<const double> s_grid,
                                         std::span<const double> t_grid, int threads) {
  if (!(std::abs(c) < 1.0))
    throw std::domain_error("transition_landscape: requires |c| < 1");
  TransitionLandscape map;
  map.s_grid.assign(s_grid.begin(), s_grid.end());
  map.t_grid.assign(t_grid.begin(), t_grid.end());
  const std::size_t nt = map.t_grid.size();
  map.labels.assign(map.s_grid.size() * nt, PhaseLabel::Classical);
  const double ac = std::abs(c);
  const int cells = static_cast<int>(map.labels.size());
  parallel_for(cells, threads, [&](int idx) {
    const std::size_t i = static_cast<std::size_t>(idx) / nt;
    const std::size_t k = static_cast<std::size_t>(idx) % nt;
    const Environment env{OhmicSpectrum{map.s_grid[i], 1.0}, temperature};
    const double coh = coherence(env, map.t_grid[k]);
    PhaseLabel label = PhaseLabel::Boundary;
    if (coh > ac + 1e-12)
      label = PhaseLabel::Classical;
    else if (coh < ac - 1e-12)
      label = PhaseLabel::Quantum;
    map.labels[static_cast<std::size_t>(idx)] = label;
  });
  return map;
}

}  // namespace deph
