#pragma once

// Two-qubit correlation dynamics for Bell-diagonal initial states under
// local dephasing: mutual information, classical correlations, discord,
// the sudden classical-to-quantum transition and the frozen-discord
// phase diagram. All entropic quantities are in bits.

#include <optional>
#include <span>
#include <vector>

#include "deph/dephasing.hpp"

namespace deph {

struct BellDiagonalParams {
  double c = 0.0;  // |c| < 1; only |c| enters any computation
};

enum class TransitionStatus { Found, None, Indeterminate };

struct TransitionResult {
  TransitionStatus status = TransitionStatus::None;
  double time = 0.0;  // meaningful only when status == Found
};

struct CorrelationTrajectory {
  std::vector<double> times;
  std::vector<double> mutual_information;
  std::vector<double> classical;
  std::vector<double> discord;
  TransitionResult transition;
};

struct FrozenRegion {
  std::vector<double> s_grid;
  std::vector<double> boundary_c;  // c*(s); frozen discord for 0 < c < c*(s)
  std::vector<bool> empty_flag;    // true where Lambda diverges and no frozen region exists
};

enum class PhaseLabel { Classical, Quantum, Boundary };

struct TransitionLandscape {
  std::vector<double> s_grid;
  std::vector<double> t_grid;
  std::vector<PhaseLabel> labels;  // row-major, s outer / t inner
};

struct SupFactor {
  bool diverges = false;
  double value = 0.0;
};

double mutual_information(const BellDiagonalParams& p, double lambda);
double classical_correlations(const BellDiagonalParams& p, double lambda);
double discord(const BellDiagonalParams& p, double lambda);

/// Discord plateau value (1+c)log2(1+c)/2 + (1-c)log2(1-c)/2.
double frozen_discord_value(const BellDiagonalParams& p);

/// sup_t Lambda(t): the asymptote when Lambda is monotone, otherwise the
/// maximum over the onsets of negative-rate intervals and the asymptote.
SupFactor sup_dephasing_factor(const Environment& env);

/// Smallest t in (0, t_max] with coherence(t) = |c|. Returns None when the
/// coherence provably stays above |c| forever, Indeterminate when t_max is
/// too short to decide.
TransitionResult transition_time(const Environment& env, const BellDiagonalParams& p,
                                 double t_max);

/// Lindblad reference -ln|c| / (2 gamma) for a constant dephasing rate.
double markovian_transition_time(double c, double gamma);

bool is_time_invariant_discord(const Environment& env, const BellDiagonalParams& p);
/// Same verdict from an externally supplied sup_t Lambda.
bool is_time_invariant_discord(double sup_lambda, const BellDiagonalParams& p);

FrozenRegion frozen_region(double temperature, std::span<const double> s_grid, int threads = 1);

CorrelationTrajectory correlation_trajectories(const Environment& env,
                                               const BellDiagonalParams& p,
                                               std::span<const double> times);

TransitionLandscape transition_landscape(double temperature, double c,
                                         std::span<const double> s_grid,
                                         std::span<const double> t_grid, int threads = 1);

}  // namespace deph
