#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsedetect/designs.hpp"
#include "sparsedetect/rng.hpp"

namespace sparsedetect::alternatives {

enum class Model {
  Sfem,  // fixed effects: S entries of magnitude A with random signs
  Srem,  // random effects: S entries i.i.d. N(0, tau^2)
};

std::string to_string(Model m);
Model parse_model(const std::string& text);

/// S = max(1, round(p^(1 - alpha))). Throws Error(Domain) for alpha outside [0, 1].
std::size_t sparsity_from_alpha(std::size_t p, double alpha);

/// A = sqrt(2 r log p). Requires p >= 2 and r >= 0.
double amplitude_from_r(std::size_t p, double r);
/// Inverse of amplitude_from_r.
double r_from_amplitude(std::size_t p, double amplitude);

class AlternativeSpec {
public:
  /// SFEM with the amplitude given directly.
  static AlternativeSpec sfem_amplitude(std::size_t p, double alpha, double amplitude, double sigma = 1.0);
  /// SFEM parameterized by the rate r, A = sqrt(2 r log p).
  static AlternativeSpec sfem_rate(std::size_t p, double alpha, double r, double sigma = 1.0);
  static AlternativeSpec srem(std::size_t p, double alpha, double tau, double sigma = 1.0);

  Model model() const noexcept { return model_; }
  std::size_t p() const noexcept { return p_; }
  double alpha() const noexcept { return alpha_; }
  std::size_t sparsity() const noexcept { return sparsity_; }
  double amplitude() const noexcept { return amplitude_; }
  /// NaN when the rate is undefined (p < 2).
  double rate() const noexcept { return rate_; }
  double tau() const noexcept { return tau_; }
  double sigma() const noexcept { return sigma_; }
  /// True when the SFEM primary parameter is r (A is derived), false when it is A.
  bool rate_is_primary() const noexcept { return rate_primary_; }

  /// "A=...;r=..." or "tau=...", with the primary parameter first.
  std::string params_string() const;

private:
  AlternativeSpec() = default;

  Model model_ = Model::Sfem;
  std::size_t p_ = 0;
  double alpha_ = 0.0;
  std::size_t sparsity_ = 1;
  double amplitude_ = 0.0;
  double rate_ = 0.0;
  double tau_ = 0.0;
  double sigma_ = 1.0;
  bool rate_primary_ = false;
};

struct SignalInstance {
  Eigen::VectorXd beta;
  std::vector<std::size_t> support;  // sorted, 0-based
};

/// Uniformly random S-subset of {0, ..., p-1}, sorted ascending.
std::vector<std::size_t> sample_support(std::size_t p, std::size_t s, Engine& engine);

SignalInstance sample_sfem(const AlternativeSpec& spec, std::uint64_t seed);
SignalInstance sample_srem(const AlternativeSpec& spec, std::uint64_t seed);
/// Dispatches on spec.model().
SignalInstance sample(const AlternativeSpec& spec, std::uint64_t seed);

/// y = X beta + sigma z with z ~ N(0, I_n) drawn from `seed`.
Eigen::VectorXd synthesize_observation(const designs::DesignMatrix& x, const SignalInstance& beta,
                                       double sigma, std::uint64_t seed);

// CSV: "p,S,model,params" header, its values, then "index,value" rows for the
// nonzero entries (0-based indices, 17 significant digits).
std::string to_csv(const AlternativeSpec& spec, const SignalInstance& signal);
void write_csv(const AlternativeSpec& spec, const SignalInstance& signal, const std::string& path);

}  // namespace sparsedetect::alternatives
