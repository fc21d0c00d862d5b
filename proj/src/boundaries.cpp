#include "sparsedetect/boundaries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsedetect/error.hpp"
#include "text_util.hpp"

namespace sparsedetect::boundaries {

namespace {

void require_strong_sparsity(double alpha) {
  if (!(alpha > 0.5 && alpha <= 1.0))
    fail(ErrorCode::Domain, "alpha = " + detail::format_sig(alpha, 17) + " is outside (1/2, 1]");
}

}  // namespace

double rho_star(double alpha) {
  require_strong_sparsity(alpha);
  if (alpha < 0.75) return alpha - 0.5;
  const double root = 1.0 - std::sqrt(1.0 - alpha);
  return root * root;
}

double rho_max(double alpha) {
  require_strong_sparsity(alpha);
  const double root = 1.0 - std::sqrt(1.0 - alpha);
  return root * root;
}

RandomEffectsBoundary rho_rand(double alpha) {
  if (!(alpha >= 0.5 && alpha <= 1.0))
    fail(ErrorCode::Domain, "alpha = " + detail::format_sig(alpha, 17) + " is outside [1/2, 1]");
  if (alpha == 1.0) return {std::numeric_limits<double>::infinity(), EdgeFlag::Infinite};
  const RandomEffectsBoundary out{std::sqrt(alpha / (1.0 - alpha)), EdgeFlag::Interior};
  if (alpha == 0.5) return {out.value, EdgeFlag::DomainEdge};
  return out;
}

BoundaryPoint boundary_point(double alpha) {
  return {alpha, rho_star(alpha), rho_max(alpha), rho_rand(alpha)};
}

std::vector<double> alpha_grid(double alpha_min, double alpha_max, std::optional<double> step) {
  if (!std::isfinite(alpha_min) || !std::isfinite(alpha_max) || alpha_min > alpha_max)
    fail(ErrorCode::Parameter, "alpha range must satisfy alpha_min <= alpha_max");
  if (!step) {
    if (alpha_min != alpha_max) fail(ErrorCode::Parameter, "a step is required when alpha_min < alpha_max");
    return {alpha_min};
  }
  if (!(*step > 0.0) || !std::isfinite(*step)) fail(ErrorCode::Parameter, "step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((alpha_max - alpha_min) / *step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(std::min(alpha_max, alpha_min + static_cast<double>(i) * *step));
  return out;
}

std::string boundary_table_csv(const std::vector<double>& alphas) {
  std::string out = "alpha,rho_star,rho_max,rho_rand\n";
  for (double a : alphas) {
    const BoundaryPoint b = boundary_point(a);
    out += detail::format_trimmed(b.alpha, 10) + "," + detail::format_trimmed(b.rho_star, 10) + "," +
           detail::format_trimmed(b.rho_max, 10) + "," + detail::format_trimmed(b.rho_rand.value, 10) + "\n";
  }
  return out;
}

double anova_power_scaling(const designs::DesignMatrix& x, const Eigen::VectorXd& beta) {
  const double m = static_cast<double>(std::min(x.n(), x.p()));
  return x.apply(beta).squaredNorm() / std::sqrt(m);
}

}  // namespace sparsedetect::boundaries
