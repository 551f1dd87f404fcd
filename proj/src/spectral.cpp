#include "deph/spectral.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace deph {

namespace {

// Fritsch-Carlson tangents for a monotone-preserving cubic Hermite spline.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n == 1) return d;
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0)
      d = 0.0;
    else if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0))
      d = 3.0 * d0;
    return d;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

}  // namespace

TabulatedSpectrum::TabulatedSpectrum(std::vector<double> omega, std::vector<double> j)
    : omega_(std::move(omega)), j_(std::move(j)) {
  if (omega_.empty() || omega_.size() != j_.size())
    throw std::invalid_argument("TabulatedSpectrum: empty or mismatched sample lists");
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    if (!(omega_[i] > 0.0))
      throw std::invalid_argument("TabulatedSpectrum: all omega must be > 0");
    if (i > 0 && !(omega_[i] > omega_[i - 1]))
      throw std::invalid_argument("TabulatedSpectrum: omega must be strictly increasing");
    if (!(j_[i] >= 0.0)) throw std::invalid_argument("TabulatedSpectrum: J must be >= 0");
  }
  slope_ = pchip_slopes(omega_, j_);
}

double TabulatedSpectrum::value(double omega) const {
  if (omega < 0.0) throw std::domain_error("spectral_density: omega must be >= 0");
  if (omega >= omega_.back()) return omega == omega_.back() ? j_.back() : 0.0;
  if (omega <= omega_.front()) return j_.front() * omega / omega_.front();
  const auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
  const std::size_t i = static_cast<std::size_t>(it - omega_.begin()) - 1;
  const double h = omega_[i + 1] - omega_[i];
  const double t = (omega - omega_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * j_[i] + h10 * h * slope_[i] + h01 * j_[i + 1] + h11 * h * slope_[i + 1];
}

TabulatedSpectrum load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_tabulated_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_tabulated_csv: empty file " + path);
  // strip a UTF-8 BOM and trailing CR if present
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "omega,J")
    throw std::runtime_error("load_tabulated_csv: expected header 'omega,J', got '" + line + "'");
  std::vector<double> omega, j;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) {
      throw std::runtime_error("load_tabulated_csv: malformed row at line " +
                               std::to_string(line_no));
    }
    try {
      omega.push_back(std::stod(a));
      j.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw std::runtime_error("load_tabulated_csv: non-numeric value at line " +
                               std::to_string(line_no));
    }
  }
  return TabulatedSpectrum(std::move(omega), std::move(j));
}

double spectral_density(const OhmicSpectrum& spec, double omega) {
  if (omega < 0.0) throw std::domain_error("spectral_density: omega must be >= 0");
  if (!(spec.s > 0.0) || !(spec.omega_c > 0.0))
    throw std::domain_error("spectral_density: requires s > 0 and omega_c > 0");
  if (omega == 0.0) return 0.0;
  return std::pow(omega, spec.s) * std::pow(spec.omega_c, 1.0 - spec.s) *
         std::exp(-omega / spec.omega_c);
}

double spectral_density(const TabulatedSpectrum& spec, double omega) { return spec.value(omega); }

double spectral_density(const Environment& env, double omega) {
  return std::visit([omega](const auto& s) { return spectral_density(s, omega); }, env.spectrum);
}

double coth_stable(double x) {
  if (!(x > 0.0)) throw std::domain_error("coth_stable: x must be > 0");
  if (x < 1e-4) return 1.0 / x + x / 3.0 - x * x * x / 45.0;
  return 1.0 / std::tanh(x);
}

double thermal_weight(const Environment& env, double omega) {
  if (!(omega > 0.0)) throw std::domain_error("thermal_weight: omega must be > 0");
  if (env.temperature < 0.0) throw std::domain_error("thermal_weight: temperature must be >= 0");
  const double j = spectral_density(env, omega);
  const double coth = env.temperature == 0.0 ? 1.0 : coth_stable(omega / (2.0 * env.temperature));
  return 2.0 * j * coth / (omega * omega);
}

namespace {

// d^2 g / d omega^2 for the Ohmic family at T = 0:
// g = 2 w_c^{1-s} w^{s-2} e^{-w/w_c}.
double ohmic_g2_zero_T(const OhmicSpectrum& spec, double omega) {
  const double s = spec.s;
  const double u = omega / spec.omega_c;
  return 2.0 * std::pow(spec.omega_c, -3.0) * std::pow(u, s - 4.0) * std::exp(-u) *
         ((s - 2.0) * (s - 3.0) - 2.0 * (s - 2.0) * u + u * u);
}

}  // namespace

ConvexityResult is_convex(const Environment& env, Bracket omega_range, int n_grid) {
  if (!(omega_range.lo > 0.0) || !(omega_range.lo < omega_range.hi) || n_grid < 16)
    throw std::invalid_argument("is_convex: invalid range or grid");
  const auto* ohmic = std::get_if<OhmicSpectrum>(&env.spectrum);
  const bool analytic = ohmic != nullptr && env.temperature == 0.0;

  const double llo = std::log(omega_range.lo);
  const double lhi = std::log(omega_range.hi);
  std::vector<double> grid(n_grid), g2(n_grid);
  for (int i = 0; i < n_grid; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n_grid - 1));

  auto g = [&](double w) { return thermal_weight(env, w); };
  double max_abs = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    const double w = grid[i];
    g2[i] = analytic ? ohmic_g2_zero_T(*ohmic, w) : second_derivative(g, w, 1e-3 * w);
    max_abs = std::max(max_abs, std::abs(g2[i]));
  }
  const double eps = 1e-9 * max_abs;
  for (int i = 0; i < n_grid; ++i) {
    if (g2[i] < -eps) return {false, grid[i]};
  }
  return {true, std::nullopt};
}

double convexity_threshold_s(double temperature, Bracket omega_range) {
  if (temperature < 0.0)
    throw std::domain_error("convexity_threshold_s: temperature must be >= 0");
  auto nonconvex = [&](double s) {
    Environment env{OhmicSpectrum{s, 1.0}, temperature};
    return !is_convex(env, omega_range).convex;
  };
  double lo = 1.5, hi = 3.5;
  if (nonconvex(lo) || !nonconvex(hi))
    throw BracketError("convexity_threshold_s: predicate does not change over [1.5, 3.5]");
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (nonconvex(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace deph
