#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "deph/dephasing.hpp"

using namespace deph;

namespace {
Environment ohmic(double s, double temp) { return {OhmicSpectrum{s, 1.0}, temp}; }
}  // namespace

TEST_CASE("zero-temperature closed-form rate") {
  CHECK(dephasing_rate_zero_T(1.0, 3.0) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(dephasing_rate_zero_T(2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(dephasing_rate_zero_T(2.5, 0.0) == 0.0);
  CHECK_THROWS_AS(dephasing_rate_zero_T(-1.0, 1.0), std::domain_error);
}

TEST_CASE("high-temperature closed-form rate") {
  CHECK(dephasing_rate_high_T(2.0, 3.0, 10.0) == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(dephasing_rate_high_T(3.0, 0.0, 5.0) == 0.0);
  CHECK_THROWS_AS(dephasing_rate_high_T(1.0, 1.0, 5.0), std::domain_error);
  // s - 1 = 2.5 > 2: the rate must go negative somewhere
  bool negative = false;
  for (double t = 0.1; t < 50.0; t += 0.1) {
    if (dephasing_rate_high_T(3.5, t, 5.0) < 0.0) negative = true;
  }
  CHECK(negative);
}

TEST_CASE("numeric rate matches the zero-temperature closed form") {
  CHECK(dephasing_rate_numeric(ohmic(1.0, 0.0), 0.0) == 0.0);
  CHECK(dephasing_rate_numeric(ohmic(1.0, 0.0), 2.0) == doctest::Approx(0.4).epsilon(1e-9));
  for (double s : {0.5, 1.0, 2.0, 2.5, 3.5}) {
    for (double t : {0.1, 1.0, 3.0, 10.0}) {
      const double numeric = dephasing_rate_numeric(ohmic(s, 0.0), t);
      const double closed = dephasing_rate_zero_T(s, t);
      CHECK(std::abs(numeric - closed) <= 1e-8 * std::max(std::abs(closed), 1e-3));
    }
  }
  // negative branch above the critical Ohmicity
  const double v = dephasing_rate_numeric(ohmic(2.5, 0.0), 10.0);
  CHECK(v < 0.0);
  CHECK(v == doctest::Approx(dephasing_rate_zero_T(2.5, 10.0)).epsilon(1e-8));
}

TEST_CASE("dephasing factor closed form at s=1, T=0") {
  CHECK(dephasing_factor(ohmic(1.0, 0.0), 0.0) == 0.0);
  for (double t : {0.5, 1.0, 3.0, 10.0}) {
    CHECK(dephasing_factor(ohmic(1.0, 0.0), t) ==
          doctest::Approx(std::log(1.0 + t * t)).epsilon(1e-8));
  }
}

TEST_CASE("coherence decay") {
  CHECK(coherence(ohmic(1.0, 0.0), 0.0) == 1.0);
  CHECK(coherence(ohmic(1.0, 0.0), 3.0) == doctest::Approx(0.1).epsilon(1e-8));
  // s=2 saturates at e^{-2}
  CHECK(coherence(ohmic(2.0, 0.0), 1e4) == doctest::Approx(std::exp(-2.0)).epsilon(1e-3));
}

TEST_CASE("factor asymptote") {
  const auto super = factor_asymptote(ohmic(2.5, 0.0));
  CHECK_FALSE(super.diverges);
  CHECK(super.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));

  CHECK(factor_asymptote(ohmic(1.0, 0.0)).diverges);
  CHECK(factor_asymptote(ohmic(0.5, 0.0)).diverges);
  CHECK(factor_asymptote(ohmic(1.5, 1.0)).diverges);
  CHECK(factor_asymptote(ohmic(2.0, 1.0)).diverges);

  // finite-T value against the boson-expansion series
  // Lambda(inf) = 2 Gamma(s-1) [1 + 2 sum_n (1 + n/T)^{1-s}]
  const double s = 2.5, temp = 1.0;
  double series = 0.0;
  for (int n = 1; n <= 2'000'000; ++n) series += std::pow(1.0 + n / temp, 1.0 - s);
  series += std::pow(1.0 + 2'000'000 / temp, 2.0 - s) / (s - 2.0);  // integral tail
  const double expected = 2.0 * gamma_function(s - 1.0) * (1.0 + 2.0 * series);
  const auto warm = factor_asymptote(ohmic(s, temp));
  CHECK_FALSE(warm.diverges);
  CHECK(warm.value == doctest::Approx(expected).epsilon(1e-6));
  CHECK_THROWS_AS(factor_asymptote(Environment{TabulatedSpectrum({1.0}, {1.0}), 0.0}),
                  std::invalid_argument);
}

TEST_CASE("negative rate report") {
  const auto markov = negative_rate_report(ohmic(1.0, 0.0), 100.0);
  CHECK(markov.intervals.empty());
  CHECK_FALSE(markov.non_markovian);
  CHECK(markov.backflow_measure == 0.0);

  const auto super = negative_rate_report(ohmic(2.5, 0.0), 100.0);
  REQUIRE(super.intervals.size() == 1);
  CHECK(super.non_markovian);
  CHECK(super.intervals[0].first == doctest::Approx(std::tan(M_PI / 2.5)).epsilon(1e-6));
  CHECK(super.intervals[0].second == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(super.backflow_measure > 0.0);

  const auto hot = negative_rate_report(ohmic(3.5, 100.0), 100.0);
  CHECK(hot.non_markovian);
}

TEST_CASE("backflow measure is positive exactly when intervals exist") {
  for (double s : {1.0, 1.8, 2.2, 2.5, 3.0}) {
    const auto report = negative_rate_report(ohmic(s, 0.0), 100.0);
    CHECK((report.backflow_measure > 0.0) == report.non_markovian);
    CHECK((report.backflow_measure > 0.0) == !report.intervals.empty());
  }
}

TEST_CASE("critical Ohmicity") {
  CHECK(find_s_crit(0.0) == doctest::Approx(2.0).epsilon(0.01));
  CHECK(find_s_crit(100.0) == doctest::Approx(3.0).epsilon(0.02));
  CHECK_THROWS_AS(find_s_crit(-1.0), std::domain_error);
}

TEST_CASE("trajectory sampling") {
  const std::vector<double> times{0.0, 1.0, 3.0};
  const auto traj = trajectory(ohmic(1.0, 0.0), times);
  REQUIRE(traj.times.size() == 3);
  CHECK(traj.factor[0] == 0.0);
  CHECK(traj.factor[1] == doctest::Approx(std::log(2.0)).epsilon(1e-8));
  CHECK(traj.factor[2] == doctest::Approx(std::log(10.0)).epsilon(1e-8));
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    CHECK(traj.coherence[i] == doctest::Approx(std::exp(-traj.factor[i])).epsilon(1e-14));
    CHECK(traj.rate[i] ==
          doctest::Approx(dephasing_rate_zero_T(1.0, traj.times[i])).epsilon(1e-12));
  }
  CHECK_THROWS_AS(trajectory(ohmic(1.0, 0.0), std::vector<double>{1.0, 0.5}),
                  std::invalid_argument);
}

TEST_CASE("factor overshoots and relaxes for s=2.5 at T=0") {
  const Environment env = ohmic(2.5, 0.0);
  const double t_star = std::tan(M_PI / 2.5);
  const double peak = dephasing_factor(env, t_star);
  CHECK(peak > std::sqrt(M_PI));                        // above the asymptote
  CHECK(peak > dephasing_factor(env, 0.5 * t_star));    // rising before the peak
  CHECK(peak > dephasing_factor(env, 3.0 * t_star));    // decaying after it
}

TEST_CASE("factor is non-decreasing for s<=2 and non-monotone for s>2 at T=0") {
  for (double s : {0.7, 1.0, 1.6, 2.0}) {
    double prev = 0.0;
    for (double t = 0.25; t <= 40.0; t *= 1.3) {
      const double cur = dephasing_factor(ohmic(s, 0.0), t);
      CHECK(cur >= prev - 1e-10);
      prev = cur;
    }
  }
  bool decreased = false;
  double prev = 0.0;
  for (double t = 0.25; t <= 40.0; t *= 1.3) {
    const double cur = dephasing_factor(ohmic(2.5, 0.0), t);
    if (cur < prev - 1e-10) decreased = true;
    prev = cur;
  }
  CHECK(decreased);
}

TEST_CASE("dLambda/dt = 2 gamma") {
  std::mt19937 rng(421);
  std::uniform_real_distribution<double> s_dist(0.5, 3.5);
  std::uniform_real_distribution<double> t_dist(0.2, 20.0);
  const double temps[] = {0.0, 0.5, 2.0, 100.0};
  for (int trial = 0; trial < 12; ++trial) {
    const double s = s_dist(rng);
    const double temp = temps[trial % 4];
    const double t = t_dist(rng);
    const Environment env = ohmic(s, temp);
    const double h = 1e-4 * std::max(1.0, t);
    const double deriv =
        (dephasing_factor(env, t + h) - dephasing_factor(env, t - h)) / (2.0 * h);
    const double rate2 = 2.0 * dephasing_rate_numeric(env, t);
    CHECK(std::abs(deriv - rate2) <= 1e-4 * std::max(std::abs(rate2), 1e-6));
  }
}
