#pragma once

// Reservoir spectral densities J(w), the thermal weight g(w,T) whose cosine
// transform gives the dephasing factor, and convexity analysis of g.
// Reduced units throughout: hbar = k_B = 1, frequencies in units of the
// cutoff, temperature in units of the cutoff.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "deph/numerics.hpp"

namespace deph {

struct OhmicSpectrum {
  double s = 1.0;        // Ohmicity exponent: sub-Ohmic s<1, Ohmic s=1, super-Ohmic s>1
  double omega_c = 1.0;  // cutoff frequency
};

/// Sampled spectral density with monotone piecewise-cubic interpolation.
/// J is linear from the origin up to the first sample and zero beyond the
/// last one.
class TabulatedSpectrum {
 public:
  TabulatedSpectrum(std::vector<double> omega, std::vector<double> j);

  double value(double omega) const;
  const std::vector<double>& omegas() const { return omega_; }
  const std::vector<double>& values() const { return j_; }

 private:
  std::vector<double> omega_;
  std::vector<double> j_;
  std::vector<double> slope_;  // Fritsch-Carlson tangents
};

/// Loads a two-column CSV with header "omega,J" and strictly increasing omega.
TabulatedSpectrum load_tabulated_csv(const std::string& path);

using Spectrum = std::variant<OhmicSpectrum, TabulatedSpectrum>;

struct Environment {
  Spectrum spectrum;
  double temperature = 0.0;  // 0 means zero temperature
};

double spectral_density(const OhmicSpectrum& spec, double omega);
double spectral_density(const TabulatedSpectrum& spec, double omega);
double spectral_density(const Environment& env, double omega);

/// coth(x) for x > 0, switching to the small-x series below 1e-4.
double coth_stable(double x);

/// g(w,T) = 2 J(w) coth(w/2T) / w^2; the coth factor is 1 at T = 0.
double thermal_weight(const Environment& env, double omega);

struct ConvexityResult {
  bool convex;
  std::optional<double> first_nonconvex_omega;
};

/// Tests convexity of g(.,T) on a log-spaced grid over omega_range.
/// Ohmic spectra at T = 0 use the analytic second derivative; everything
/// else falls back to finite differences.
ConvexityResult is_convex(const Environment& env, Bracket omega_range = {1e-4, 50.0},
                          int n_grid = 2000);

/// Ohmicity at which g(.,T) turns non-convex, bisected over s in [1.5, 3.5]
/// to width 1e-3.
double convexity_threshold_s(double temperature, Bracket omega_range = {1e-4, 50.0});

}  // namespace deph
