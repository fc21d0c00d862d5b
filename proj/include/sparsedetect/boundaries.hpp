#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsedetect/designs.hpp"

namespace sparsedetect::boundaries {

/// Sharp SFEM detection boundary on alpha in (1/2, 1]:
/// alpha - 1/2 below 3/4, (1 - sqrt(1 - alpha))^2 from 3/4 on.
double rho_star(double alpha);

/// Boundary of the Max test, (1 - sqrt(1 - alpha))^2 on (1/2, 1].
double rho_max(double alpha);

enum class EdgeFlag {
  Interior,
  DomainEdge,  // alpha == 1/2, value 1 by continuity
  Infinite,    // alpha == 1, value +inf
};

struct RandomEffectsBoundary {
  double value = 0.0;
  EdgeFlag flag = EdgeFlag::Interior;
};

/// SREM boundary sqrt(alpha / (1 - alpha)); alpha < 1/2 or alpha > 1 is a
/// domain error, the two endpoints are flagged.
RandomEffectsBoundary rho_rand(double alpha);

struct BoundaryPoint {
  double alpha = 0.0;
  double rho_star = 0.0;
  double rho_max = 0.0;
  RandomEffectsBoundary rho_rand;
};

BoundaryPoint boundary_point(double alpha);

/// alpha_min + i * step for i = 0, 1, ... up to alpha_max (1e-9 slack).
/// Without a step the grid is the single point alpha_min == alpha_max.
/// Throws Error(Parameter) for step <= 0 or an inverted range.
std::vector<double> alpha_grid(double alpha_min, double alpha_max, std::optional<double> step);

/// CSV "alpha,rho_star,rho_max,rho_rand" with values printed to 10 decimals,
/// trailing zeros trimmed; rho_rand at alpha = 1 prints "inf".
std::string boundary_table_csv(const std::vector<double>& alphas);

/// ||X beta||^2 / sqrt(min(n, p)): ANOVA is powerless when this vanishes.
double anova_power_scaling(const designs::DesignMatrix& x, const Eigen::VectorXd& beta);

}  // namespace sparsedetect::boundaries
