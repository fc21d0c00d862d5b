#include "sparsedetect/alternatives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsedetect/error.hpp"
#include "sparsedetect/rng.hpp"
#include "text_util.hpp"

namespace sparsedetect::alternatives {

std::string to_string(Model m) { return m == Model::Sfem ? "SFEM" : "SREM"; }

Model parse_model(const std::string& text) {
  if (text == "SFEM" || text == "sfem") return Model::Sfem;
  if (text == "SREM" || text == "srem") return Model::Srem;
  fail(ErrorCode::Parse, "unknown model '" + text + "' (expected SFEM or SREM)");
}

std::size_t sparsity_from_alpha(std::size_t p, double alpha) {
  if (p < 1) fail(ErrorCode::Domain, "sparsity requires p >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorCode::Domain, "sparsity exponent must lie in [0, 1]");
  const double s = std::round(std::pow(static_cast<double>(p), 1.0 - alpha));
  return std::clamp<std::size_t>(static_cast<std::size_t>(s), 1, p);
}

double amplitude_from_r(std::size_t p, double r) {
  if (p < 2) fail(ErrorCode::Domain, "amplitude from r requires p >= 2");
  if (!(r >= 0.0) || !std::isfinite(r)) fail(ErrorCode::Domain, "r must be a finite value >= 0");
  return std::sqrt(2.0 * r * std::log(static_cast<double>(p)));
}

double r_from_amplitude(std::size_t p, double amplitude) {
  if (p < 2) fail(ErrorCode::Domain, "r from amplitude requires p >= 2");
  return amplitude * amplitude / (2.0 * std::log(static_cast<double>(p)));
}

namespace {

void check_common(std::size_t p, double sigma) {
  if (p < 1) fail(ErrorCode::Parameter, "alternative requires p >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) fail(ErrorCode::Parameter, "sigma must be finite and >= 0");
}

}  // namespace

AlternativeSpec AlternativeSpec::sfem_amplitude(std::size_t p, double alpha, double amplitude, double sigma) {
  check_common(p, sigma);
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    fail(ErrorCode::Parameter, "SFEM amplitude must be finite and >= 0");
  AlternativeSpec s;
  s.model_ = Model::Sfem;
  s.p_ = p;
  s.alpha_ = alpha;
  s.sparsity_ = sparsity_from_alpha(p, alpha);
  s.amplitude_ = amplitude;
  s.rate_ = p >= 2 ? r_from_amplitude(p, amplitude) : std::numeric_limits<double>::quiet_NaN();
  s.sigma_ = sigma;
  s.rate_primary_ = false;
  return s;
}

AlternativeSpec AlternativeSpec::sfem_rate(std::size_t p, double alpha, double r, double sigma) {
  check_common(p, sigma);
  AlternativeSpec s;
  s.model_ = Model::Sfem;
  s.p_ = p;
  s.alpha_ = alpha;
  s.sparsity_ = sparsity_from_alpha(p, alpha);
  s.amplitude_ = amplitude_from_r(p, r);
  s.rate_ = r;
  s.sigma_ = sigma;
  s.rate_primary_ = true;
  return s;
}

AlternativeSpec AlternativeSpec::srem(std::size_t p, double alpha, double tau, double sigma) {
  check_common(p, sigma);
  if (!(tau >= 0.0) || !std::isfinite(tau)) fail(ErrorCode::Parameter, "SREM tau must be finite and >= 0");
  AlternativeSpec s;
  s.model_ = Model::Srem;
  s.p_ = p;
  s.alpha_ = alpha;
  s.sparsity_ = sparsity_from_alpha(p, alpha);
  s.tau_ = tau;
  s.sigma_ = sigma;
  return s;
}

std::string AlternativeSpec::params_string() const {
  using detail::format_sig;
  std::string out = "alpha=" + format_sig(alpha_, 17) + ";";
  if (model_ == Model::Srem) {
    out += "tau=" + format_sig(tau_, 17);
  } else if (rate_primary_) {
    out += "r=" + format_sig(rate_, 17) + ";A=" + format_sig(amplitude_, 17);
  } else {
    out += "A=" + format_sig(amplitude_, 17);
    if (!std::isnan(rate_)) out += ";r=" + format_sig(rate_, 17);
  }
  return out + ";sigma=" + format_sig(sigma_, 17);
}

std::vector<std::size_t> sample_support(std::size_t p, std::size_t s, Engine& engine) {
  if (s > p) fail(ErrorCode::Parameter, "support size exceeds p");
  // Floyd's algorithm: every s-subset is equally likely.
  std::vector<bool> chosen(p, false);
  std::vector<std::size_t> out;
  out.reserve(s);
  for (std::size_t j = p - s; j < p; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    const std::size_t t = pick(engine);
    const std::size_t idx = chosen[t] ? j : t;
    chosen[idx] = true;
    out.push_back(idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SignalInstance sample_sfem(const AlternativeSpec& spec, std::uint64_t seed) {
  if (spec.model() != Model::Sfem) fail(ErrorCode::Parameter, "sample_sfem needs an SFEM spec");
  Engine engine = make_engine(seed);
  SignalInstance out;
  out.support = sample_support(spec.p(), spec.sparsity(), engine);
  out.beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.p()));
  std::bernoulli_distribution coin(0.5);
  const double a = spec.amplitude();
  for (std::size_t j : out.support) out.beta[static_cast<Eigen::Index>(j)] = coin(engine) ? a : -a;
  return out;
}

SignalInstance sample_srem(const AlternativeSpec& spec, std::uint64_t seed) {
  if (spec.model() != Model::Srem) fail(ErrorCode::Parameter, "sample_srem needs an SREM spec");
  Engine engine = make_engine(seed);
  SignalInstance out;
  out.support = sample_support(spec.p(), spec.sparsity(), engine);
  out.beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.p()));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t j : out.support) out.beta[static_cast<Eigen::Index>(j)] = spec.tau() * normal(engine);
  return out;
}

SignalInstance sample(const AlternativeSpec& spec, std::uint64_t seed) {
  return spec.model() == Model::Sfem ? sample_sfem(spec, seed) : sample_srem(spec, seed);
}

Eigen::VectorXd synthesize_observation(const designs::DesignMatrix& x, const SignalInstance& beta,
                                       double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) fail(ErrorCode::Parameter, "sigma must be >= 0");
  Eigen::VectorXd y = x.apply(beta.beta);
  if (sigma > 0.0) {
    Engine engine = make_engine(seed);
    Eigen::VectorXd z(y.size());
    fill_standard_normal(engine, std::span<double>(z.data(), static_cast<std::size_t>(z.size())));
    y.noalias() += sigma * z;
  }
  return y;
}

std::string to_csv(const AlternativeSpec& spec, const SignalInstance& signal) {
  using detail::format_sig;
  std::string out = "p,S,model,params\n";
  out += std::to_string(spec.p()) + "," + std::to_string(signal.support.size()) + "," +
         to_string(spec.model()) + "," + spec.params_string() + "\n";
  out += "index,value\n";
  for (std::size_t j : signal.support)
    out += std::to_string(j) + "," + format_sig(signal.beta[static_cast<Eigen::Index>(j)], 17) + "\n";
  return out;
}

void write_csv(const AlternativeSpec& spec, const SignalInstance& signal, const std::string& path) {
  detail::write_file(path, to_csv(spec, signal));
}

}  // namespace sparsedetect::alternatives
