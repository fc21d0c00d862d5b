#include "sparsedetect/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "sparsedetect/boundaries.hpp"
#include "sparsedetect/error.hpp"
#include "sparsedetect/rng.hpp"
#include "text_util.hpp"

namespace sparsedetect::bench {

using alternatives::AlternativeSpec;
using alternatives::Model;
using stats::TestKind;

std::string to_string(SPolicy policy) {
  switch (policy) {
    case SPolicy::Theorem: return "theorem";
    case SPolicy::AdaptiveOne: return "adaptive-one";
    case SPolicy::Sqrt2: return "sqrt2";
  }
  return "?";
}

SPolicy parse_s_policy(const std::string& text) {
  if (text == "theorem") return SPolicy::Theorem;
  if (text == "adaptive-one") return SPolicy::AdaptiveOne;
  if (text == "sqrt2") return SPolicy::Sqrt2;
  fail(ErrorCode::Parse, "unknown s-policy '" + text + "' (expected theorem, adaptive-one or sqrt2)");
}

double grid_start(SPolicy policy, double alpha, std::size_t p) {
  switch (policy) {
    case SPolicy::Theorem: return stats::hc_grid_start(alpha, p);
    case SPolicy::AdaptiveOne: return 1.0;
    case SPolicy::Sqrt2: return std::sqrt(2.0 * std::log(static_cast<double>(p)));
  }
  return 1.0;
}

double zeta_rescale(double signal, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) fail(ErrorCode::Domain, "zeta rescaling needs gamma in [0, 1)");
  return signal / std::sqrt(1.0 - gamma);
}

double constant_correlation_of(const designs::DesignSpec& spec) {
  if (const auto* cc = std::get_if<designs::ConstantCorrelation>(&spec)) return cc->gamma;
  if (std::holds_alternative<designs::BalancedOneWayConstrained>(spec)) return 0.5;
  fail(ErrorCode::Parameter, "design '" + designs::variant_name(spec) + "' is not a constant-correlation design");
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::Parameter, what);
  };
  designs::validate(c.design);
  const std::size_t p = designs::cols(c.design);
  require(c.trials >= 1, "trials must be >= 1");
  require(!c.alpha_grid.empty(), "alpha_grid must be nonempty");
  require(!c.signal_grid.empty(), "signal_grid must be nonempty");
  require(!c.tests.empty(), "tests must be nonempty");
  require(c.threads >= 1, "threads must be >= 1");
  require(std::isfinite(c.sigma) && c.sigma >= 0.0, "sigma must be finite and >= 0");
  require(c.sigma_known || designs::rows(c.design) >= 2, "unknown sigma needs n >= 2");
  for (double a : c.alpha_grid) require(a >= 0.0 && a <= 1.0, "alpha values must lie in [0, 1]");
  for (double s : c.signal_grid) require(std::isfinite(s) && s >= 0.0, "signal values must be finite and >= 0");
  if (c.model == Model::Sfem && c.signal_parameter == SignalParameter::Rate)
    require(p >= 2, "rate-parameterized SFEM needs p >= 2");
  const bool has_disc = std::find(c.tests.begin(), c.tests.end(), TestKind::HcDisc) != c.tests.end();
  if (has_disc) {
    for (double a : c.alpha_grid) {
      if (c.s_policy == SPolicy::Theorem)
        require(a > 0.5 && a <= 1.0, "HC_DISC with the theorem s-policy needs alpha in (1/2, 1]");
      stats::hc_grid(p, grid_start(c.s_policy, a, p));  // throws EmptyGrid
    }
  }
  if (c.zeta_rescale) constant_correlation_of(c.design);
  std::vector<double> sorted_alpha = c.alpha_grid;
  std::sort(sorted_alpha.begin(), sorted_alpha.end());
  require(std::adjacent_find(sorted_alpha.begin(), sorted_alpha.end()) == sorted_alpha.end(),
          "alpha_grid has duplicates");
  std::vector<double> sorted_signal = c.signal_grid;
  std::sort(sorted_signal.begin(), sorted_signal.end());
  require(std::adjacent_find(sorted_signal.begin(), sorted_signal.end()) == sorted_signal.end(),
          "signal_grid has duplicates");
}

AlternativeSpec cell_alternative(const ExperimentConfig& c, std::size_t p, double alpha, double signal) {
  const double unit = c.sigma > 0.0 ? c.sigma : 1.0;
  const double zeta = c.zeta_rescale ? zeta_rescale(1.0, constant_correlation_of(c.design)) : 1.0;
  if (c.model == Model::Srem) return AlternativeSpec::srem(p, alpha, signal * unit * zeta, c.sigma);
  if (c.signal_parameter == SignalParameter::Amplitude)
    return AlternativeSpec::sfem_amplitude(p, alpha, signal * zeta, c.sigma);
  if (unit == 1.0 && zeta == 1.0) return AlternativeSpec::sfem_rate(p, alpha, signal, c.sigma);
  return AlternativeSpec::sfem_amplitude(p, alpha, alternatives::amplitude_from_r(p, signal) * unit * zeta,
                                         c.sigma);
}

// ---------------------------------------------------------------------------

namespace {

struct TrialContext {
  const ExperimentConfig& config;
  const designs::DesignMatrix* fixed_design = nullptr;
  std::vector<CellSamples>& cells;  // alpha-major, signal, test
};

std::size_t cell_index(const ExperimentConfig& c, std::size_t ai, std::size_t si, std::size_t ti) {
  return (ai * c.signal_grid.size() + si) * c.tests.size() + ti;
}

/// Scales y to unit noise level and evaluates every requested test. `out`
/// receives one value per (alpha, test) pair, alpha-major.
void evaluate(const ExperimentConfig& c, const designs::DesignMatrix& x, const stats::Projector* projector,
              const Eigen::VectorXd& y, std::span<const double> alphas, std::vector<double>& out) {
  double scale = 1.0;
  if (c.sigma_known) {
    if (c.sigma > 0.0) scale = c.sigma;
  } else {
    const auto est = stats::estimate_sigma(y);
    if (!est.degenerate) scale = est.sigma_hat;
  }

  bool need_corr = false;
  bool need_counts = false;
  for (TestKind t : c.tests) {
    need_corr |= t != TestKind::Anova;
    need_counts |= t == TestKind::HcCont || t == TestKind::HcDisc;
  }
  Eigen::VectorXd v;
  if (need_corr) v = x.correlate(y) / scale;
  const std::span<const double> vs(v.data(), static_cast<std::size_t>(v.size()));
  std::optional<stats::ExceedanceCounter> counts;
  if (need_counts) counts.emplace(vs);

  std::optional<double> anova, max, hc_cont;
  out.clear();
  for (double alpha : alphas) {
    for (TestKind t : c.tests) {
      switch (t) {
        case TestKind::Anova:
          if (!anova) anova = projector->squared_norm(y) / (scale * scale);
          out.push_back(*anova);
          break;
        case TestKind::Max:
          if (!max) max = stats::max_abs(vs).value;
          out.push_back(*max);
          break;
        case TestKind::HcCont:
          if (!hc_cont) hc_cont = stats::hc_continuous(vs).value;
          out.push_back(*hc_cont);
          break;
        case TestKind::HcDisc:
          out.push_back(stats::hc_discretized(*counts, grid_start(c.s_policy, alpha, x.p())).value);
          break;
      }
    }
  }
}

void run_trial(const TrialContext& ctx, std::size_t trial) {
  const ExperimentConfig& c = ctx.config;
  const std::uint64_t master = c.master_seed;
  const auto tag = [](Stream s) { return static_cast<std::uint64_t>(s); };

  std::optional<designs::DesignMatrix> fresh;
  if (!ctx.fixed_design) fresh.emplace(designs::build_design(c.design, derive_seed(master, {tag(Stream::Design), trial})));
  const designs::DesignMatrix& x = ctx.fixed_design ? *ctx.fixed_design : *fresh;

  std::optional<stats::Projector> projector;
  if (std::find(c.tests.begin(), c.tests.end(), TestKind::Anova) != c.tests.end()) projector.emplace(x);

  const auto n = static_cast<Eigen::Index>(x.n());
  auto noise = [&](Stream s) {
    Eigen::VectorXd z(n);
    Engine engine = make_engine(derive_seed(master, {tag(s), trial}));
    fill_standard_normal(engine, std::span<double>(z.data(), static_cast<std::size_t>(n)));
    return z;
  };

  const std::size_t nt = c.tests.size();
  std::vector<double> values;

  // Null: y = sigma z.
  const Eigen::VectorXd y_null = c.sigma * noise(Stream::NullNoise);
  evaluate(c, x, projector ? &*projector : nullptr, y_null, c.alpha_grid, values);
  for (std::size_t ai = 0; ai < c.alpha_grid.size(); ++ai)
    for (std::size_t si = 0; si < c.signal_grid.size(); ++si)
      for (std::size_t ti = 0; ti < nt; ++ti)
        ctx.cells[cell_index(c, ai, si, ti)].null_stats[trial] = values[ai * nt + ti];

  // Alternative: y = X beta + sigma z', independent noise.
  const Eigen::VectorXd z_alt = c.sigma * noise(Stream::AltNoise);
  for (std::size_t ai = 0; ai < c.alpha_grid.size(); ++ai) {
    const double alpha = c.alpha_grid[ai];
    const std::uint64_t signal_seed = derive_seed(master, {tag(Stream::Signal), real_key(alpha), trial});
    for (std::size_t si = 0; si < c.signal_grid.size(); ++si) {
      const AlternativeSpec spec = cell_alternative(c, x.p(), alpha, c.signal_grid[si]);
      const alternatives::SignalInstance beta = alternatives::sample(spec, signal_seed);
      const Eigen::VectorXd y_alt = x.apply(beta.beta) + z_alt;
      evaluate(c, x, projector ? &*projector : nullptr, y_alt, std::span<const double>(&alpha, 1), values);
      for (std::size_t ti = 0; ti < nt; ++ti) ctx.cells[cell_index(c, ai, si, ti)].alt_stats[trial] = values[ti];
    }
  }
}

}  // namespace

std::vector<CellSamples> simulate_grid(const ExperimentConfig& c) {
  validate(c);

  std::vector<CellSamples> cells;
  for (double a : c.alpha_grid)
    for (double s : c.signal_grid)
      for (TestKind t : c.tests)
        cells.push_back({a, s, t, std::vector<double>(c.trials), std::vector<double>(c.trials)});

  std::optional<designs::DesignMatrix> fixed;
  if (!c.fresh_design_per_trial)
    fixed.emplace(designs::build_design(
        c.design, derive_seed(c.master_seed, {static_cast<std::uint64_t>(Stream::FixedDesign)})));
  const TrialContext ctx{c, fixed ? &*fixed : nullptr, cells};

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::map<std::size_t, std::string> failures;
  auto worker = [&] {
    while (true) {
      const std::size_t trial = next.fetch_add(1);
      if (trial >= c.trials) return;
      try {
        run_trial(ctx, trial);
      } catch (const std::exception& e) {
        const std::lock_guard lock(failure_mutex);
        failures.emplace(trial, e.what());
      }
    }
  };

  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(c.threads, c.trials));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (!failures.empty()) {
    const auto& [trial, what] = *failures.begin();
    fail(ErrorCode::Runtime, "trial " + std::to_string(trial) + ": " + what);
  }
  return cells;
}

CellSamples run_cell(const ExperimentConfig& config, double alpha, double signal, TestKind test) {
  ExperimentConfig one = config;
  one.alpha_grid = {alpha};
  one.signal_grid = {signal};
  one.tests = {test};
  return std::move(simulate_grid(one).front());
}

// ---------------------------------------------------------------------------

Quantiles summarize(std::span<const double> values) {
  if (values.empty()) return {};
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  auto q = [&](double prob) {
    const double pos = prob * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return {q(0.05), q(0.25), q(0.5), q(0.75), q(0.95)};
}

RiskEstimate best_empirical_risk(std::span<const double> null_stats, std::span<const double> alt_stats) {
  if (null_stats.empty() || alt_stats.empty())
    fail(ErrorCode::Parameter, "risk estimation needs nonempty null and alternative samples");
  std::vector<double> null_sorted(null_stats.begin(), null_stats.end());
  std::vector<double> alt_sorted(alt_stats.begin(), alt_stats.end());
  std::sort(null_sorted.begin(), null_sorted.end());
  std::sort(alt_sorted.begin(), alt_sorted.end());
  std::vector<double> pooled;
  pooled.reserve(null_sorted.size() + alt_sorted.size());
  std::merge(null_sorted.begin(), null_sorted.end(), alt_sorted.begin(), alt_sorted.end(),
             std::back_inserter(pooled));
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  // risk(thr) * n0 * n1 as an integer so that ties are exact.
  const auto n0 = static_cast<std::uint64_t>(null_sorted.size());
  const auto n1 = static_cast<std::uint64_t>(alt_sorted.size());
  auto scaled_risk = [&](double thr) {
    const auto false_alarms = static_cast<std::uint64_t>(
        null_sorted.end() - std::lower_bound(null_sorted.begin(), null_sorted.end(), thr));
    const auto misses = static_cast<std::uint64_t>(
        std::lower_bound(alt_sorted.begin(), alt_sorted.end(), thr) - alt_sorted.begin());
    return false_alarms * n1 + misses * n0;
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::uint64_t best = scaled_risk(-inf);
  double best_thr = -inf;
  auto consider = [&](double thr) {
    const std::uint64_t r = scaled_risk(thr);
    if (r <= best) {  // ascending sweep: later (larger) thresholds win ties
      best = r;
      best_thr = thr;
    }
  };
  for (std::size_t k = 0; k + 1 < pooled.size(); ++k) consider(pooled[k] + (pooled[k + 1] - pooled[k]) / 2.0);
  consider(inf);

  RiskEstimate out;
  out.best_risk = static_cast<double>(best) / static_cast<double>(n0 * n1);
  out.best_threshold = best_thr;
  out.n_trials = std::min(null_sorted.size(), alt_sorted.size());
  out.standard_error = std::sqrt(out.best_risk * (2.0 - out.best_risk) / static_cast<double>(out.n_trials));
  out.null_summary = summarize(null_sorted);
  out.alt_summary = summarize(alt_sorted);
  return out;
}

std::vector<RiskEstimate> run_grid(const ExperimentConfig& config) {
  const std::vector<CellSamples> cells = simulate_grid(config);
  const std::size_t p = designs::cols(config.design);
  std::vector<RiskEstimate> out;
  out.reserve(cells.size());
  for (const CellSamples& cell : cells) {
    RiskEstimate r = best_empirical_risk(cell.null_stats, cell.alt_stats);
    r.test = cell.test;
    r.s_policy = config.s_policy;
    r.alpha = cell.alpha;
    r.sparsity = alternatives::sparsity_from_alpha(p, cell.alpha);
    r.signal = cell.signal;
    out.push_back(r);
  }
  return out;
}

std::vector<MonotonicityViolation> check_monotone_power(const std::vector<RiskEstimate>& results) {
  std::map<std::pair<int, double>, std::vector<const RiskEstimate*>> curves;
  for (const auto& r : results) curves[{static_cast<int>(r.test), r.alpha}].push_back(&r);
  std::vector<MonotonicityViolation> out;
  for (auto& [key, curve] : curves) {
    std::sort(curve.begin(), curve.end(), [](auto* a, auto* b) { return a->signal < b->signal; });
    for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
      const RiskEstimate& lo = *curve[k];
      const RiskEstimate& hi = *curve[k + 1];
      const double slack = 2.0 * std::max(lo.standard_error, hi.standard_error);
      if (hi.best_risk > lo.best_risk + slack)
        out.push_back({lo.test, lo.alpha, lo.signal, hi.signal, lo.best_risk, hi.best_risk});
    }
  }
  return out;
}

}  // namespace sparsedetect::bench
