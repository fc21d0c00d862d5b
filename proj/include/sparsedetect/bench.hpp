#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sparsedetect/alternatives.hpp"
#include "sparsedetect/designs.hpp"
#include "sparsedetect/stats.hpp"

namespace sparsedetect::bench {

// ---------------------------------------------------------------------------
// Monte Carlo estimation of the best achievable Bayes risk
// (false-alarm rate + missed-detection rate, minimized over thresholds).
//
// Randomness contract: everything a trial draws is a pure function of
// (master_seed, trial index) plus, for the coefficient vector, the alpha of
// the cell. Concretely
//   design        <- derive_seed(master, {Design, trial})
//   null noise    <- derive_seed(master, {NullNoise, trial})
//   alt noise     <- derive_seed(master, {AltNoise, trial})
//   support/signs <- derive_seed(master, {Signal, alpha bits, trial})
// so all tests and all signal strengths of a grid see common random numbers,
// and results do not depend on the thread schedule.
// ---------------------------------------------------------------------------

/// Start of the integer grid for HC_DISC.
enum class SPolicy {
  Theorem,      // hc_grid_start(alpha, p); needs alpha in (1/2, 1]
  AdaptiveOne,  // s = 1
  Sqrt2,        // s = sqrt(2 log p)
};

std::string to_string(SPolicy policy);
SPolicy parse_s_policy(const std::string& text);
double grid_start(SPolicy policy, double alpha, std::size_t p);

/// How SFEM signal_grid values are read. SREM values are always tau.
enum class SignalParameter {
  Rate,       // r, with A = sigma sqrt(2 r log p)
  Amplitude,  // A directly
};

struct ExperimentConfig {
  designs::DesignSpec design = designs::Identity{1};
  alternatives::Model model = alternatives::Model::Sfem;
  SignalParameter signal_parameter = SignalParameter::Rate;
  std::vector<double> alpha_grid;
  std::vector<double> signal_grid;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  double sigma = 1.0;
  bool sigma_known = true;
  std::vector<stats::TestKind> tests;
  SPolicy s_policy = SPolicy::AdaptiveOne;
  bool fresh_design_per_trial = true;
  /// Multiply the coefficient scale by 1/sqrt(1 - gamma) for constant-correlation designs.
  bool zeta_rescale = false;
  unsigned threads = 1;
};

/// Throws Error(Parameter) describing the first violated constraint.
void validate(const ExperimentConfig& config);

/// signal / sqrt(1 - gamma), gamma in [0, 1).
double zeta_rescale(double signal, double gamma);

/// Pairwise correlation of a constant-correlation design family (the
/// constrained one-way layout counts, with gamma = 1/2).
double constant_correlation_of(const designs::DesignSpec& spec);

/// Coefficient-level alternative for one cell: applies the sigma scaling of
/// rates and the optional zeta rescaling.
alternatives::AlternativeSpec cell_alternative(const ExperimentConfig& config, std::size_t p, double alpha,
                                               double signal);

struct CellSamples {
  double alpha = 0.0;
  double signal = 0.0;
  stats::TestKind test = stats::TestKind::Max;
  std::vector<double> null_stats;
  std::vector<double> alt_stats;
};

/// Statistics under the null and the alternative for every trial of one cell.
CellSamples run_cell(const ExperimentConfig& config, double alpha, double signal, stats::TestKind test);

/// All cells of the grid, ordered alpha-major, then signal, then test (in
/// the order given by the config).
std::vector<CellSamples> simulate_grid(const ExperimentConfig& config);

struct Quantiles {
  double q05 = 0, q25 = 0, q50 = 0, q75 = 0, q95 = 0;
};

Quantiles summarize(std::span<const double> values);

struct RiskEstimate {
  stats::TestKind test = stats::TestKind::Max;
  SPolicy s_policy = SPolicy::AdaptiveOne;
  double alpha = 0.0;
  std::size_t sparsity = 0;
  double signal = 0.0;
  double best_risk = 1.0;
  double best_threshold = 0.0;
  std::size_t n_trials = 0;
  /// sqrt(best_risk (2 - best_risk) / trials). Indicative only: a minimum
  /// over thresholds is not a binomial proportion.
  double standard_error = 0.0;
  Quantiles null_summary;
  Quantiles alt_summary;
};

/// Rejection is "statistic >= threshold". Thresholds swept: -inf, +inf and
/// the midpoints between consecutive distinct pooled values. Ties go to the
/// largest threshold attaining the minimum.
RiskEstimate best_empirical_risk(std::span<const double> null_stats, std::span<const double> alt_stats);

std::vector<RiskEstimate> run_grid(const ExperimentConfig& config);

struct MonotonicityViolation {
  stats::TestKind test;
  double alpha;
  double signal_low;
  double signal_high;
  double risk_low;
  double risk_high;
};

/// Pairs of consecutive signals (ascending) where risk rises by more than
/// twice the larger standard error.
std::vector<MonotonicityViolation> check_monotone_power(const std::vector<RiskEstimate>& results);

}  // namespace sparsedetect::bench
