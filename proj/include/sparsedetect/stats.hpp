#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsedetect/designs.hpp"

namespace sparsedetect::stats {

enum class TestKind { Anova, Max, HcCont, HcDisc };

std::string to_string(TestKind kind);
TestKind parse_test_kind(const std::string& text);

struct TestOutcome {
  TestKind kind = TestKind::Anova;
  double value = 0.0;
  /// HC: threshold t attaining the maximum. MAX: 0-based column index.
  std::optional<double> location;
  /// Non-fatal remarks, e.g. a rank-deficient design for ANOVA.
  std::string note;
};

// ---------------------------------------------------------------------------
// ANOVA: ||P y||^2 with P the orthogonal projector onto range(X).
// ---------------------------------------------------------------------------

enum class ProjectionRoute {
  /// Use what the construction guarantees (orthonormal columns, full row
  /// rank) and fall back to least squares otherwise.
  FromStructure,
  /// Always factor X (rank-revealing QR). Implicit identities are exempt.
  LeastSquares,
};

/// Reusable projector for one design; factoring happens once. The design
/// must outlive the projector.
class Projector {
public:
  explicit Projector(const designs::DesignMatrix& x, ProjectionRoute route = ProjectionRoute::FromStructure);

  /// ||P y||^2
  double squared_norm(const Eigen::VectorXd& y) const;

  std::size_t rank() const noexcept { return rank_; }
  bool rank_deficient() const noexcept { return rank_ < std::min(n_, p_); }

private:
  enum class Mode { Whole, Orthonormal, Factored };

  Mode mode_ = Mode::Factored;
  const designs::DesignMatrix* design_ = nullptr;
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::size_t rank_ = 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

TestOutcome anova_stat(const designs::DesignMatrix& x, const Eigen::VectorXd& y,
                       ProjectionRoute route = ProjectionRoute::FromStructure);

// ---------------------------------------------------------------------------
// Max test
// ---------------------------------------------------------------------------

/// max_j |x_j^T y|, ties resolved to the lowest index.
TestOutcome max_stat(const designs::DesignMatrix& x, const Eigen::VectorXd& y);
/// Same statistic on precomputed correlations v = X^T y.
TestOutcome max_abs(std::span<const double> v);

// ---------------------------------------------------------------------------
// Higher criticism on v = X^T y
// ---------------------------------------------------------------------------

/// P(N(0,1) > t)
double gaussian_survival(double t);

/// Sorted magnitudes supporting O(log p) exceedance counts #{i : |v_i| > t}.
class ExceedanceCounter {
public:
  explicit ExceedanceCounter(std::span<const double> v);

  std::size_t count_above(double t) const;
  std::size_t size() const noexcept { return sorted_.size(); }
  double max_magnitude() const noexcept { return sorted_.empty() ? 0.0 : sorted_.back(); }
  const std::vector<double>& sorted_magnitudes() const noexcept { return sorted_; }

private:
  std::vector<double> sorted_;
};

/// H(t) = (count - 2 p S(t)) / sqrt(2 p S(t) (1 - 2 S(t))), S the Gaussian
/// survival function. Empty when t is not admissible: t <= 0, S(t) within
/// 1e-9 of 1/2, or a denominator below 1e-300.
std::optional<double> hc_objective(std::size_t count, std::size_t p, double t);

/// sup_{t>0} H(t), evaluated just below every distinct |v_i| (t = |v_i| (1 - 1e-9))
/// and on 512 uniform points of (0, max |v_i|]. For v = 0 the uniform grid
/// spans (0, max(1, sqrt(2 log p))].
TestOutcome hc_continuous(std::span<const double> v);

/// Integer thresholds max(1, ceil(s)) .. floor(sqrt(5 log p)), inclusive.
/// Throws Error(EmptyGrid) when there are none.
std::vector<int> hc_grid(std::size_t p, double s);

/// max of H(t) over hc_grid(p, s); location is the maximizing t.
TestOutcome hc_discretized(std::span<const double> v, double s);
TestOutcome hc_discretized(const ExceedanceCounter& counts, double s);

/// sqrt(2 min(1, 4 rho*(alpha)) log p), alpha in (1/2, 1].
double hc_grid_start(double alpha, std::size_t p);

// ---------------------------------------------------------------------------
// Unknown noise level
// ---------------------------------------------------------------------------

struct VarianceEstimate {
  double sigma_hat = 0.0;
  double t_n = 0.0;  // log n
  double a_n = 0.0;  // t_n / sqrt(n)
  std::size_t n = 0;
  bool degenerate = false;  // y == 0
};

/// sigma_hat = ||y|| (1/sqrt(n) + log(n)/n), biased upward so that
/// sigma <= sigma_hat <= (1 + a_n) sigma with high probability.
VarianceEstimate estimate_sigma(const Eigen::VectorXd& y);

}  // namespace sparsedetect::stats
