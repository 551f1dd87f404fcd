#pragma once

// Dephasing rate gamma(t), dephasing factor Lambda(t), coherence decay,
// negative-rate (information backflow) detection and the critical Ohmicity
// s_crit(T).

#include <span>
#include <utility>
#include <vector>

#include "deph/spectral.hpp"

namespace deph {

// Above this reduced temperature the negative-rate scan switches to the
// high-T closed form for Ohmic spectra.
inline constexpr double kHighTemperatureThreshold = 50.0;

struct DephasingTrajectory {
  std::vector<double> times;
  std::vector<double> rate;
  std::vector<double> factor;
  std::vector<double> coherence;
};

struct NegativeRateReport {
  std::vector<std::pair<double, double>> intervals;  // (t_start, t_end) with gamma < 0
  bool non_markovian = false;
  double backflow_measure = 0.0;  // summed coherence revival over the intervals
};

struct FactorAsymptote {
  bool diverges = false;
  double value = 0.0;  // meaningful only when !diverges
};

/// Zero-temperature closed form
/// gamma0(t,s) = [1+t^2]^{-s/2} Gamma(s) sin(s arctan t), reduced units.
double dephasing_rate_zero_T(double s, double t);

/// High-temperature closed form gamma_HT(t,s) = 2 T gamma0(t, s-1); requires s > 1.
double dephasing_rate_high_T(double s, double t, double temperature);

/// gamma(t) = int_0^inf J(w) coth(w/2T) sin(w t)/w dw by quadrature.
double dephasing_rate_numeric(const Environment& env, double t, const QuadratureSpec& spec = {});

/// Lambda(t) = int_0^inf g(w,T) [1 - cos(w t)] dw by quadrature.
double dephasing_factor(const Environment& env, double t, const QuadratureSpec& spec = {});

/// exp(-Lambda(t)).
double coherence(const Environment& env, double t, const QuadratureSpec& spec = {});

/// Long-time limit of Lambda(t) for Ohmic spectra: 2 Gamma(s-1) at T = 0 when
/// s > 1, the integral of g(w,T) at T > 0 when s > 2; diverges otherwise.
FactorAsymptote factor_asymptote(const Environment& env, const QuadratureSpec& spec = {});

/// Scans gamma on (0, t_max], refines sign changes and accumulates the
/// coherence backflow over negative-rate intervals. Ohmic environments use
/// the closed-form rate at T = 0 and for T above the high-T threshold.
NegativeRateReport negative_rate_report(const Environment& env, double t_max, int n_grid = 2000);

/// Critical Ohmicity s_crit(T): bisection of the negativity predicate over
/// s in [1.9, 3.1] with an s-adaptive time horizon, to width 1e-3.
double find_s_crit(double temperature);

/// Samples rate, factor and coherence on a strictly increasing time grid,
/// each point evaluated independently.
DephasingTrajectory trajectory(const Environment& env, std::span<const double> times,
                               const QuadratureSpec& spec = {});

}  // namespace deph
