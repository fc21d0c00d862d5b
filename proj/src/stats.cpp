#include "sparsedetect/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sparsedetect/boundaries.hpp"
#include "sparsedetect/error.hpp"

namespace sparsedetect::stats {

std::string to_string(TestKind kind) {
  switch (kind) {
    case TestKind::Anova: return "ANOVA";
    case TestKind::Max: return "MAX";
    case TestKind::HcCont: return "HC_CONT";
    case TestKind::HcDisc: return "HC_DISC";
  }
  return "?";
}

TestKind parse_test_kind(const std::string& text) {
  if (text == "ANOVA") return TestKind::Anova;
  if (text == "MAX") return TestKind::Max;
  if (text == "HC_CONT") return TestKind::HcCont;
  if (text == "HC_DISC") return TestKind::HcDisc;
  fail(ErrorCode::Parse, "unknown test '" + text + "' (expected ANOVA, MAX, HC_CONT or HC_DISC)");
}

// ---------------------------------------------------------------------------

Projector::Projector(const designs::DesignMatrix& x, ProjectionRoute route)
    : design_(&x), n_(x.n()), p_(x.p()) {
  using designs::ColumnSpace;
  if (x.is_implicit_identity()) {
    mode_ = Mode::Whole;
    rank_ = n_;
    return;
  }
  if (route == ProjectionRoute::FromStructure) {
    if (x.column_space() == ColumnSpace::FullRowRank) {
      mode_ = Mode::Whole;
      rank_ = n_;
      return;
    }
    if (x.column_space() == ColumnSpace::Orthonormal) {
      mode_ = Mode::Orthonormal;
      rank_ = p_;
      return;
    }
  }
  mode_ = Mode::Factored;
  qr_.compute(x.dense());
  rank_ = static_cast<std::size_t>(qr_.rank());
}

double Projector::squared_norm(const Eigen::VectorXd& y) const {
  if (static_cast<std::size_t>(y.size()) != n_)
    fail(ErrorCode::Dimension, "observation length " + std::to_string(y.size()) +
                                   " does not match design rows " + std::to_string(n_));
  switch (mode_) {
    case Mode::Whole: return y.squaredNorm();
    case Mode::Orthonormal: return design_->correlate(y).squaredNorm();
    case Mode::Factored: break;
  }
  const Eigen::VectorXd qty = qr_.householderQ().transpose() * y;
  return qty.head(static_cast<Eigen::Index>(rank_)).squaredNorm();
}

TestOutcome anova_stat(const designs::DesignMatrix& x, const Eigen::VectorXd& y, ProjectionRoute route) {
  const Projector proj(x, route);
  TestOutcome out{TestKind::Anova, proj.squared_norm(y), std::nullopt, {}};
  if (proj.rank_deficient())
    out.note = "rank-deficient design: projected onto a " + std::to_string(proj.rank()) +
               "-dimensional column space";
  return out;
}

// ---------------------------------------------------------------------------

TestOutcome max_abs(std::span<const double> v) {
  TestOutcome out{TestKind::Max, 0.0, std::nullopt, {}};
  if (v.empty()) fail(ErrorCode::Dimension, "max statistic needs at least one correlation");
  std::size_t best = 0;
  double value = std::abs(v[0]);
  for (std::size_t j = 1; j < v.size(); ++j) {
    const double a = std::abs(v[j]);
    if (a > value) {
      value = a;
      best = j;
    }
  }
  out.value = value;
  out.location = static_cast<double>(best);
  return out;
}

TestOutcome max_stat(const designs::DesignMatrix& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd v = x.correlate(y);
  return max_abs(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

// ---------------------------------------------------------------------------

double gaussian_survival(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

ExceedanceCounter::ExceedanceCounter(std::span<const double> v) : sorted_(v.size()) {
  std::transform(v.begin(), v.end(), sorted_.begin(), [](double x) { return std::abs(x); });
  std::sort(sorted_.begin(), sorted_.end());
}

std::size_t ExceedanceCounter::count_above(double t) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<std::size_t>(sorted_.end() - it);
}

std::optional<double> hc_objective(std::size_t count, std::size_t p, double t) {
  if (!(t > 0.0)) return std::nullopt;
  const double tail = gaussian_survival(t);
  if (tail >= 0.5 - 1e-9) return std::nullopt;
  const double expected = 2.0 * static_cast<double>(p) * tail;
  const double var = expected * (1.0 - 2.0 * tail);
  if (var < 1e-300) return std::nullopt;
  return (static_cast<double>(count) - expected) / std::sqrt(var);
}

namespace {

constexpr int kUniformGridPoints = 512;
constexpr double kDataNudge = 1e-9;

}  // namespace

TestOutcome hc_continuous(std::span<const double> v) {
  if (v.empty()) fail(ErrorCode::Dimension, "higher criticism needs at least one value");
  const ExceedanceCounter counter(v);
  const std::size_t p = counter.size();

  double best = -std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  auto consider = [&](double t) {
    const auto h = hc_objective(counter.count_above(t), p, t);
    if (h && (*h > best || (*h == best && t < best_t))) {
      best = *h;
      best_t = t;
    }
  };

  const auto& mags = counter.sorted_magnitudes();
  for (std::size_t i = 0; i < mags.size(); ++i) {
    if (mags[i] <= 0.0 || (i > 0 && mags[i] == mags[i - 1])) continue;
    consider(mags[i] * (1.0 - kDataNudge));
  }
  auto uniform_grid = [&](double upper) {
    for (int k = 1; k <= kUniformGridPoints; ++k) consider(upper * k / kUniformGridPoints);
  };
  if (counter.max_magnitude() > 0.0) uniform_grid(counter.max_magnitude());
  if (!std::isfinite(best)) {
    // no admissible threshold among the data (v = 0 or all |v_i| tiny)
    const double log_p = std::log(static_cast<double>(std::max<std::size_t>(p, 2)));
    uniform_grid(std::max(1.0, std::sqrt(2.0 * log_p)));
  }
  return {TestKind::HcCont, best, best_t, {}};
}

std::vector<int> hc_grid(std::size_t p, double s) {
  if (p < 1) fail(ErrorCode::Dimension, "higher criticism grid needs p >= 1");
  if (!(s >= 0.0)) fail(ErrorCode::Domain, "grid start s must be >= 0");
  const double upper = std::sqrt(5.0 * std::log(static_cast<double>(p)));
  const double lo = std::max(1.0, std::ceil(s));
  const double hi = std::floor(upper);
  if (lo > hi)
    fail(ErrorCode::EmptyGrid, "empty integer grid [" + std::to_string(s) + ", " + std::to_string(upper) +
                                   "] for p = " + std::to_string(p));
  std::vector<int> grid;
  for (double t = lo; t <= hi; t += 1.0) grid.push_back(static_cast<int>(t));
  return grid;
}

TestOutcome hc_discretized(const ExceedanceCounter& counts, double s) {
  const std::size_t p = counts.size();
  const auto grid = hc_grid(p, s);
  double best = -std::numeric_limits<double>::infinity();
  int best_t = grid.front();
  for (int t : grid) {
    const auto h = hc_objective(counts.count_above(t), p, t);
    if (h && *h > best) {
      best = *h;
      best_t = t;
    }
  }
  if (!std::isfinite(best)) fail(ErrorCode::EmptyGrid, "no admissible threshold on the integer grid");
  return {TestKind::HcDisc, best, static_cast<double>(best_t), {}};
}

TestOutcome hc_discretized(std::span<const double> v, double s) {
  if (v.empty()) fail(ErrorCode::Dimension, "higher criticism needs at least one value");
  return hc_discretized(ExceedanceCounter(v), s);
}

double hc_grid_start(double alpha, std::size_t p) {
  if (!(alpha > 0.5 && alpha <= 1.0)) fail(ErrorCode::Domain, "grid start requires alpha in (1/2, 1]");
  if (p < 1) fail(ErrorCode::Domain, "grid start requires p >= 1");
  const double r_alpha = std::min(1.0, 4.0 * boundaries::rho_star(alpha));
  return std::sqrt(2.0 * r_alpha * std::log(static_cast<double>(p)));
}

// ---------------------------------------------------------------------------

VarianceEstimate estimate_sigma(const Eigen::VectorXd& y) {
  const auto n = static_cast<std::size_t>(y.size());
  if (n < 2) fail(ErrorCode::Dimension, "variance estimate needs n >= 2");
  const double nd = static_cast<double>(n);
  VarianceEstimate out;
  out.n = n;
  out.t_n = std::log(nd);
  out.a_n = out.t_n / std::sqrt(nd);
  const double norm = y.norm();
  out.sigma_hat = norm * (1.0 / std::sqrt(nd) + out.t_n / nd);
  out.degenerate = norm == 0.0;
  return out;
}

}  // namespace sparsedetect::stats
