#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "deph/correlations.hpp"

using namespace deph;

namespace {
Environment ohmic(double s, double temp) { return {OhmicSpectrum{s, 1.0}, temp}; }
constexpr double kEntropy01 = 0.007225546012191789;  // (1.1/2)log2(1.1)+(0.9/2)log2(0.9)
constexpr double kEntropy09 = 0.7136030428840436;
}  // namespace

TEST_CASE("mutual information") {
  CHECK(mutual_information({0.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(mutual_information({0.1}, std::log(10.0)) ==
        doctest::Approx(2.0 * kEntropy01).epsilon(1e-12));
  CHECK(mutual_information({-0.1}, std::log(10.0)) ==
        doctest::Approx(2.0 * kEntropy01).epsilon(1e-12));
  CHECK_THROWS_AS(mutual_information({1.0}, 0.0), std::domain_error);
}

TEST_CASE("classical correlations") {
  CHECK(classical_correlations({0.1}, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
  // chi = max(e^{-ln 10}, 0.1) = 0.1
  CHECK(classical_correlations({0.1}, std::log(10.0)) ==
        doctest::Approx(kEntropy01).epsilon(1e-12));
  // chi = max(e^{-5}, 0.9) = 0.9
  CHECK(classical_correlations({0.9}, 5.0) == doctest::Approx(kEntropy09).epsilon(1e-12));
  CHECK(classical_correlations({-0.9}, 5.0) == doctest::Approx(kEntropy09).epsilon(1e-12));
}

TEST_CASE("discord") {
  CHECK(discord({0.1}, 0.0) == doctest::Approx(kEntropy01).epsilon(1e-12));
  // after the transition the quantum part is the decaying branch
  CHECK(discord({0.9}, 5.0) ==
        doctest::Approx(mutual_information({0.9}, 5.0) - kEntropy09).epsilon(1e-10));
  CHECK(discord({0.0}, 3.0) >= 0.0);
}

TEST_CASE("frozen discord value") {
  CHECK(frozen_discord_value({0.1}) == doctest::Approx(kEntropy01).epsilon(1e-12));
  CHECK(frozen_discord_value({-0.1}) == doctest::Approx(kEntropy01).epsilon(1e-12));
  CHECK(frozen_discord_value({0.0}) == 0.0);
}

TEST_CASE("supremum of the dephasing factor") {
  const auto sub = sup_dephasing_factor(ohmic(1.0, 0.0));
  CHECK(sub.diverges);

  // monotone factor: sup equals the asymptote 2 Gamma(1) = 2
  const auto quad = sup_dephasing_factor(ohmic(2.0, 0.0));
  CHECK_FALSE(quad.diverges);
  CHECK(quad.value == doctest::Approx(2.0).epsilon(1e-3));

  // overshooting factor: sup is the peak at t = tan(pi/s), above the asymptote
  const auto super = sup_dephasing_factor(ohmic(2.5, 0.0));
  CHECK_FALSE(super.diverges);
  CHECK(super.value == doctest::Approx(1.8665411163924597).epsilon(1e-4));
  CHECK(super.value > std::sqrt(M_PI));
}

TEST_CASE("transition time, sub-Ohmic and Ohmic") {
  const auto r1 = transition_time(ohmic(1.0, 0.0), {0.1}, 100.0);
  REQUIRE(r1.status == TransitionStatus::Found);
  CHECK(r1.time == doctest::Approx(3.0).epsilon(1e-6));

  const auto r2 = transition_time(ohmic(1.0, 0.0), {0.25}, 100.0);
  REQUIRE(r2.status == TransitionStatus::Found);
  CHECK(r2.time == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));

  const auto r3 = transition_time(ohmic(1.0, 0.0), {-0.1}, 100.0);
  REQUIRE(r3.status == TransitionStatus::Found);
  CHECK(r3.time == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("transition never happens when the coherence stays above |c|") {
  // s=2.5, T=0: coherence floor e^{-1.8665} = 0.1547 > 0.1
  const auto res = transition_time(ohmic(2.5, 0.0), {0.1}, 100.0);
  CHECK(res.status == TransitionStatus::None);

  // but a larger c is crossed
  const auto crossed = transition_time(ohmic(2.5, 0.0), {0.5}, 100.0);
  REQUIRE(crossed.status == TransitionStatus::Found);
  CHECK(crossed.time > 0.0);
}

TEST_CASE("transition indeterminate on a too-short horizon") {
  // s=1 always crosses eventually, but not by t=1 for c=0.1
  const auto res = transition_time(ohmic(1.0, 0.0), {0.1}, 1.0);
  CHECK(res.status == TransitionStatus::Indeterminate);
}

TEST_CASE("markovian transition time") {
  CHECK(markovian_transition_time(0.1, 0.5) ==
        doctest::Approx(std::log(10.0)).epsilon(1e-14));
  CHECK(markovian_transition_time(0.5, 1.0) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(markovian_transition_time(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(markovian_transition_time(0.1, 0.0), std::domain_error);
}

TEST_CASE("time-invariant discord verdicts") {
  CHECK(is_time_invariant_discord(0.058, {0.9}));
  CHECK_FALSE(is_time_invariant_discord(0.058, {0.95}));
  CHECK(std::exp(-0.058) == doctest::Approx(0.9436499474367985).epsilon(1e-12));

  // s=2, T=0: frozen for c < e^{-2}
  CHECK(is_time_invariant_discord(ohmic(2.0, 0.0), {0.1}));
  CHECK_FALSE(is_time_invariant_discord(ohmic(2.0, 0.0), {0.2}));
  // divergent factor: never frozen
  CHECK_FALSE(is_time_invariant_discord(ohmic(1.0, 0.0), {0.1}));
}

TEST_CASE("frozen region boundary") {
  const std::vector<double> s_grid{0.5, 1.0, 1.5, 2.0, 2.5};
  const auto region = frozen_region(0.0, s_grid);
  REQUIRE(region.s_grid.size() == 5);
  CHECK(region.empty_flag[0]);
  CHECK(region.boundary_c[0] == 0.0);
  CHECK(region.empty_flag[1]);
  CHECK(region.boundary_c[1] == 0.0);
  CHECK_FALSE(region.empty_flag[2]);
  CHECK(region.boundary_c[2] ==
        doctest::Approx(std::exp(-2.0 * gamma_function(0.5))).epsilon(1e-4));
  CHECK(region.boundary_c[3] == doctest::Approx(std::exp(-2.0)).epsilon(1e-4));
  // the overshoot peak, not the asymptote, bounds the frozen region for s>2
  CHECK(region.boundary_c[4] == doctest::Approx(0.1546576806445944).epsilon(1e-4));
  CHECK(region.boundary_c[4] < std::exp(-std::sqrt(M_PI)));
  CHECK(region.boundary_c[4] > region.boundary_c[2]);
}

TEST_CASE("frozen region is identical across thread counts") {
  std::vector<double> s_grid;
  for (double s = 1.2; s <= 3.0; s += 0.3) s_grid.push_back(s);
  const auto serial = frozen_region(0.0, s_grid, 1);
  const auto parallel = frozen_region(0.0, s_grid, 4);
  REQUIRE(serial.boundary_c.size() == parallel.boundary_c.size());
  for (std::size_t i = 0; i < serial.boundary_c.size(); ++i) {
    CHECK(serial.boundary_c[i] == parallel.boundary_c[i]);
    CHECK(serial.empty_flag[i] == parallel.empty_flag[i]);
  }
}

TEST_CASE("correlation trajectories: sudden transition structure at s=1") {
  std::vector<double> times;
  for (double t = 0.0; t <= 8.0; t += 0.05) times.push_back(t);
  const auto traj = correlation_trajectories(ohmic(1.0, 0.0), {0.1}, times);
  REQUIRE(traj.transition.status == TransitionStatus::Found);
  CHECK(traj.transition.time == doctest::Approx(3.0).epsilon(1e-6));
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(traj.discord[i] >= -1e-14);
    CHECK(traj.classical[i] >= -1e-14);
    CHECK(traj.mutual_information[i] ==
          doctest::Approx(traj.discord[i] + traj.classical[i]).epsilon(1e-12));
    if (times[i] < traj.transition.time - 0.05) {
      // frozen discord before the transition
      CHECK(traj.discord[i] == doctest::Approx(kEntropy01).epsilon(1e-9));
    }
    if (times[i] > traj.transition.time + 0.05) {
      // constant classical correlations after it
      CHECK(traj.classical[i] == doctest::Approx(kEntropy01).epsilon(1e-9));
    }
  }
}

TEST_CASE("correlation trajectories: discord constant forever at s=2.5, c=0.1") {
  std::vector<double> times;
  for (double t = 0.0; t <= 100.0; t += 2.0) times.push_back(t);
  const auto traj = correlation_trajectories(ohmic(2.5, 0.0), {0.1}, times);
  CHECK(traj.transition.status == TransitionStatus::None);
  for (double q : traj.discord) {
    CHECK(q == doctest::Approx(kEntropy01).epsilon(1e-8));
  }
}

TEST_CASE("transition landscape labels") {
  const std::vector<double> s_grid{1.0, 2.5};
  const std::vector<double> t_grid{0.0, 1.0, 3.0, 5.0};
  const auto land = transition_landscape(0.0, 0.1, s_grid, t_grid);
  REQUIRE(land.labels.size() == 8);
  auto at = [&](std::size_t i, std::size_t j) { return land.labels[i * 4 + j]; };
  // s=1: transition at t=3
  CHECK(at(0, 0) == PhaseLabel::Classical);
  CHECK(at(0, 1) == PhaseLabel::Classical);
  CHECK(at(0, 2) == PhaseLabel::Boundary);
  CHECK(at(0, 3) == PhaseLabel::Quantum);
  // s=2.5, c=0.1: never crosses
  CHECK(at(1, 1) == PhaseLabel::Classical);
  CHECK(at(1, 3) == PhaseLabel::Classical);
}

TEST_CASE("discord and classical parts always sum to the mutual information") {
  std::mt19937 rng(90210);
  std::uniform_real_distribution<double> c_dist(-0.95, 0.95);
  std::uniform_real_distribution<double> l_dist(0.0, 6.0);
  for (int trial = 0; trial < 500; ++trial) {
    const BellDiagonalParams p{c_dist(rng)};
    const double lambda = l_dist(rng);
    const double i = mutual_information(p, lambda);
    const double c = classical_correlations(p, lambda);
    const double q = discord(p, lambda);
    CHECK(std::abs(i - c - q) <= 1e-12);
    CHECK(q >= 0.0);
    CHECK(c >= 0.0);
  }
}
