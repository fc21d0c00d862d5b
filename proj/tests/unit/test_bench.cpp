#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "sparsedetect/bench.hpp"
#include "sparsedetect/error.hpp"
#include "sparsedetect/report.hpp"

using namespace sparsedetect;
using namespace sparsedetect::bench;
using stats::TestKind;

namespace {

struct Enumerated {
  long long numerator;  // fp * n_alt + fn * n_null
  double threshold;
};

// Exhaustive oracle: each pooled value v as a threshold (reject >= v), plus
// +inf. Every achievable split of the sorted sample is one of these.
Enumerated enumerate_best(const std::vector<double>& null, const std::vector<double>& alt) {
  std::set<double> pooled(null.begin(), null.end());
  pooled.insert(alt.begin(), alt.end());
  const long long n0 = static_cast<long long>(null.size()), n1 = static_cast<long long>(alt.size());
  auto score = [&](double thr) {
    long long fp = 0, fn = 0;
    for (double x : null) fp += x >= thr;
    for (double x : alt) fn += x < thr;
    return fp * n1 + fn * n0;
  };
  const double inf = std::numeric_limits<double>::infinity();
  Enumerated best{score(inf), inf};
  std::vector<double> values(pooled.begin(), pooled.end());
  for (std::size_t k = values.size(); k-- > 0;) {
    const long long s = score(values[k]);
    if (s < best.numerator) best = {s, k == 0 ? -inf : values[k - 1] + (values[k] - values[k - 1]) / 2.0};
  }
  return best;
}

std::vector<double> small_sample(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> len(1, 8);
  std::uniform_int_distribution<int> level(-3, 3);
  std::vector<double> v(static_cast<std::size_t>(len(gen)));
  for (auto& x : v) x = level(gen) * 0.5;
  return v;
}

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.design = designs::GaussianNormalized{30, 60};
  c.alpha_grid = {0.6, 0.8};
  c.signal_grid = {0.3, 1.2};
  c.trials = 12;
  c.master_seed = 5;
  c.tests = {TestKind::Anova, TestKind::Max, TestKind::HcCont, TestKind::HcDisc};
  return c;
}

}  // namespace

TEST(Risk, Examples) {
  auto r = best_empirical_risk(std::vector<double>{1, 2}, std::vector<double>{3, 4});
  EXPECT_EQ(r.best_risk, 0.0);
  EXPECT_EQ(r.best_threshold, 2.5);
  EXPECT_EQ(best_empirical_risk(std::vector<double>{1, 2}, std::vector<double>{1, 2}).best_risk, 1.0);
  EXPECT_EQ(best_empirical_risk(std::vector<double>{1, 3}, std::vector<double>{2, 4}).best_risk, 0.5);
  EXPECT_TRUE(std::isinf(best_empirical_risk(std::vector<double>{5}, std::vector<double>{1}).best_threshold));
}

TEST(RiskProperty, ExhaustiveOracle) {
  std::mt19937_64 gen(31337);
  for (int it = 0; it < 1000; ++it) {
    const auto null = small_sample(gen), alt = small_sample(gen);
    const auto got = best_empirical_risk(null, alt);
    const auto want = enumerate_best(null, alt);
    const double n0 = double(null.size()), n1 = double(alt.size());
    EXPECT_EQ(got.best_risk, double(want.numerator) / (n0 * n1)) << it;
    EXPECT_EQ(got.best_threshold, want.threshold) << it;
    EXPECT_GE(got.best_risk, 0.0);
    EXPECT_LE(got.best_risk, 1.0);
  }
}

TEST(RiskProperty, ExtraThresholdsNeverHelp) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int it = 0; it < 300; ++it) {
    const auto null = small_sample(gen), alt = small_sample(gen);
    const double best = best_empirical_risk(null, alt).best_risk;
    for (int k = 0; k < 20; ++k) {
      const double thr = u(gen);
      double fp = 0, fn = 0;
      for (double x : null) fp += x >= thr;
      for (double x : alt) fn += x < thr;
      EXPECT_GE(fp / double(null.size()) + fn / double(alt.size()), best - 1e-15);
    }
  }
}

TEST(Risk, StandardErrorAndSummary) {
  std::vector<double> null = {0, 1, 2, 3, 4}, alt = {2.5, 3.5, 4.5, 5.5, 6.5};
  const auto r = best_empirical_risk(null, alt);
  EXPECT_NEAR(r.standard_error, std::sqrt(r.best_risk * (2 - r.best_risk) / 5.0), 1e-15);
  EXPECT_EQ(r.null_summary.q50, 2.0);
  EXPECT_EQ(r.alt_summary.q25, 3.5);
  const auto q = summarize(std::vector<double>{0, 10});
  EXPECT_DOUBLE_EQ(q.q05, 0.5);
  EXPECT_DOUBLE_EQ(q.q95, 9.5);
}

TEST(Zeta, Examples) {
  EXPECT_EQ(zeta_rescale(1.7, 0.0), 1.7);
  EXPECT_NEAR(zeta_rescale(1.0, 0.5), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(zeta_rescale(2.0, 0.75), 4.0, 1e-15);
  EXPECT_THROW(zeta_rescale(1.0, 1.0), Error);
}

TEST(Cell, NoiselessMax) {
  ExperimentConfig c;
  c.design = designs::Identity{50};
  c.alpha_grid = {0.8};
  c.signal_grid = {2.5};
  c.signal_parameter = SignalParameter::Amplitude;
  c.sigma = 0.0;
  c.trials = 1;
  c.tests = {TestKind::Max};
  const auto cell = run_cell(c, 0.8, 2.5, TestKind::Max);
  ASSERT_EQ(cell.null_stats.size(), 1u);
  EXPECT_EQ(cell.null_stats[0], 0.0);
  EXPECT_EQ(cell.alt_stats[0], 2.5);
}

TEST(Cell, DeterministicAndThreadInvariant) {
  auto c = tiny_config();
  const auto a = simulate_grid(c);
  const auto b = simulate_grid(c);
  c.threads = 3;
  const auto d = simulate_grid(c);
  ASSERT_EQ(a.size(), 16u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].null_stats, b[i].null_stats);
    EXPECT_EQ(a[i].alt_stats, b[i].alt_stats);
    EXPECT_EQ(a[i].null_stats, d[i].null_stats);
    EXPECT_EQ(a[i].alt_stats, d[i].alt_stats);
  }
  const auto one = run_cell(c, 0.8, 1.2, TestKind::HcCont);
  const auto& ref = a[2 * 4 + 1 * 4 + 2];
  ASSERT_EQ(ref.test, TestKind::HcCont);
  EXPECT_EQ(one.alt_stats, ref.alt_stats);
  c.master_seed = 6;
  EXPECT_NE(simulate_grid(c)[0].null_stats, a[0].null_stats);
}

TEST(Cell, CommonRandomNumbersAcrossSignals) {
  const auto cells = simulate_grid(tiny_config());
  // same alpha, same test, different signal: identical null draws
  EXPECT_EQ(cells[1].null_stats, cells[5].null_stats);
}

TEST(Grid, CsvDeterministicAndCardinality) {
  auto c = tiny_config();
  c.alpha_grid = {0.7};
  c.signal_grid = {0.5};
  c.tests = {TestKind::Max};
  EXPECT_EQ(run_grid(c).size(), 1u);
  c = tiny_config();
  const auto r1 = report::csv_rows(c, run_grid(c));
  const auto r2 = report::csv_rows(c, run_grid(c));
  EXPECT_EQ(r1, r2);
  EXPECT_EQ(std::count(r1.begin(), r1.end(), '\n'), 16);
}

TEST(GridProperty, NullSelfConsistency) {
  for (auto model : {alternatives::Model::Sfem, alternatives::Model::Srem}) {
    ExperimentConfig c;
    c.design = designs::GaussianNormalized{40, 100};
    c.model = model;
    c.alpha_grid = {0.7};
    c.signal_grid = {0.0};
    c.trials = 100;
    c.master_seed = 17;
    c.tests = {TestKind::Anova, TestKind::Max, TestKind::HcCont, TestKind::HcDisc};
    for (const auto& r : run_grid(c)) EXPECT_GE(r.best_risk, 1.0 - 2.0 / std::sqrt(100.0)) << stats::to_string(r.test);
  }
}

TEST(GridProperty, RiskBoundsAndMonotonePower) {
  ExperimentConfig c;
  c.design = designs::Identity{2000};
  c.alpha_grid = {0.7};
  c.signal_grid = {0.05, 0.4, 1.6};
  c.trials = 80;
  c.master_seed = 3;
  c.tests = {TestKind::Anova, TestKind::Max, TestKind::HcCont, TestKind::HcDisc};
  const auto results = run_grid(c);
  for (const auto& r : results) {
    EXPECT_GE(r.best_risk, 0.0);
    EXPECT_LE(r.best_risk, 1.0);
  }
  EXPECT_TRUE(check_monotone_power(results).empty());
}

TEST(Grid, MaxPowerfulAboveBoundary) {
  ExperimentConfig c;
  c.design = designs::Identity{10000};
  c.alpha_grid = {0.75};
  c.signal_grid = {2.0};
  c.trials = 200;
  c.tests = {TestKind::Max};
  EXPECT_LE(run_grid(c)[0].best_risk, 0.05);
}

TEST(Monotone, FlagsRises) {
  std::vector<RiskEstimate> r(2);
  for (auto& e : r) {
    e.test = TestKind::Max;
    e.alpha = 0.7;
    e.n_trials = 100;
  }
  r[0].signal = 1;
  r[0].best_risk = 0.2;
  r[0].standard_error = 0.05;
  r[1].signal = 2;
  r[1].best_risk = 0.5;
  r[1].standard_error = 0.05;
  EXPECT_EQ(check_monotone_power(r).size(), 1u);
  r[1].best_risk = 0.29;
  EXPECT_TRUE(check_monotone_power(r).empty());
}

TEST(Validate, Rejections) {
  auto c = tiny_config();
  c.trials = 0;
  EXPECT_THROW(validate(c), Error);
  c = tiny_config();
  c.alpha_grid.clear();
  EXPECT_THROW(validate(c), Error);
  c = tiny_config();
  c.tests.clear();
  EXPECT_THROW(validate(c), Error);
  c = tiny_config();
  c.alpha_grid = {1.2};
  EXPECT_THROW(validate(c), Error);
  c = tiny_config();
  c.s_policy = SPolicy::Theorem;
  c.alpha_grid = {0.5};
  EXPECT_THROW(validate(c), Error);
  c = tiny_config();
  c.design = designs::Identity{2};  // floor(sqrt(5 log 2)) = 1, so s = sqrt(2 log 2) ~ 1.18 leaves no grid
  c.s_policy = SPolicy::Sqrt2;
  EXPECT_THROW(validate(c), Error);
  c = tiny_config();
  c.signal_grid = {0.5, 0.5};
  EXPECT_THROW(validate(c), Error);
}

TEST(SPolicyText, RoundTrip) {
  for (auto s : {SPolicy::Theorem, SPolicy::AdaptiveOne, SPolicy::Sqrt2}) EXPECT_EQ(parse_s_policy(to_string(s)), s);
  EXPECT_NEAR(grid_start(SPolicy::Sqrt2, 0.7, 10000), std::sqrt(2 * std::log(10000.0)), 1e-12);
  EXPECT_EQ(grid_start(SPolicy::AdaptiveOne, 0.7, 10000), 1.0);
}

TEST(CellAlternative, SigmaAndZeta) {
  ExperimentConfig c = tiny_config();
  c.sigma = 2.0;
  const auto a = cell_alternative(c, 1000, 0.7, 0.5);
  EXPECT_NEAR(a.amplitude(), 2.0 * alternatives::amplitude_from_r(1000, 0.5), 1e-12);
  c.sigma = 1.0;
  c.design = designs::ConstantCorrelation{20, 0.75, 21};
  c.zeta_rescale = true;
  const auto z = cell_alternative(c, 20, 0.7, 0.5);
  EXPECT_NEAR(z.amplitude(), 2.0 * alternatives::amplitude_from_r(20, 0.5), 1e-12);
  EXPECT_EQ(constant_correlation_of(designs::BalancedOneWayConstrained{3, 2}), 0.5);
}
