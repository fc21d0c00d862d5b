#include <cmath>
#include <set>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "sparsedetect/alternatives.hpp"
#include "sparsedetect/error.hpp"
#include "sparsedetect/rng.hpp"

using namespace sparsedetect;
using namespace sparsedetect::alternatives;
using big = boost::multiprecision::cpp_bin_float_50;

TEST(Sparsity, Examples) {
  EXPECT_EQ(sparsity_from_alpha(10000, 0.5), 100u);
  EXPECT_EQ(sparsity_from_alpha(10000, 1.0), 1u);
  EXPECT_EQ(sparsity_from_alpha(10000, 0.0), 10000u);
  EXPECT_EQ(sparsity_from_alpha(10000, 0.75), 10u);
}

TEST(Sparsity, HighPrecisionOracle) {
  // 10000^0.4 = 39.8107... rounds to 40
  const big exact = boost::multiprecision::pow(big(10000), big("0.4"));
  EXPECT_NEAR(exact.convert_to<double>(), 39.81071705534972, 1e-12);
  EXPECT_EQ(sparsity_from_alpha(10000, 0.6), 40u);
  EXPECT_EQ(static_cast<std::size_t>(boost::multiprecision::round(exact).convert_to<double>()), 40u);
}

TEST(Sparsity, DomainAndMonotone) {
  EXPECT_THROW(sparsity_from_alpha(100, -0.01), Error);
  EXPECT_THROW(sparsity_from_alpha(100, 1.01), Error);
  for (std::size_t p : {1u, 2u, 7u, 100u, 12345u}) {
    std::size_t prev = p + 1;
    for (int i = 0; i <= 100; ++i) {
      const std::size_t s = sparsity_from_alpha(p, i / 100.0);
      EXPECT_GE(s, 1u);
      EXPECT_LE(s, p);
      EXPECT_LE(s, prev);
      prev = s;
    }
  }
}

TEST(Amplitude, Examples) {
  const big oracle = boost::multiprecision::sqrt(boost::multiprecision::log(big(10000)));
  EXPECT_NEAR(amplitude_from_r(10000, 0.5), oracle.convert_to<double>(), 1e-14);
  EXPECT_NEAR(amplitude_from_r(10000, 0.5), 3.0349, 1e-4);
  EXPECT_NEAR(amplitude_from_r(2, 1.0 / (2.0 * std::log(2.0))), 1.0, 1e-15);
  EXPECT_NEAR(amplitude_from_r(777, 0.6) * std::sqrt(2.0), amplitude_from_r(777, 1.2), 1e-13);
  EXPECT_NEAR(r_from_amplitude(777, amplitude_from_r(777, 0.3)), 0.3, 1e-14);
  EXPECT_THROW(amplitude_from_r(1, 0.5), Error);
}

TEST(Sfem, FullSupportAndSparsityOne) {
  const auto full = AlternativeSpec::sfem_rate(50, 0.0, 0.4);
  const auto inst = sample_sfem(full, 3);
  EXPECT_EQ(inst.support.size(), 50u);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(std::abs(inst.beta[i]), full.amplitude());

  const auto one = AlternativeSpec::sfem_amplitude(3, 1.0, 2.5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto b = sample_sfem(one, seed);
    ASSERT_EQ(b.support.size(), 1u);
    EXPECT_EQ((b.beta.array() != 0.0).count(), 1);
    EXPECT_EQ(std::abs(b.beta[static_cast<Eigen::Index>(b.support[0])]), 2.5);
  }
}

TEST(SfemProperty, InclusionFrequency) {
  // Each index is in an S = 3 subset of p = 10 w.p. 0.3; binomial sd over 1e4 draws ~ 0.0046.
  const auto spec = AlternativeSpec::sfem_amplitude(10, 1.0 - std::log(3.0) / std::log(10.0), 1.0);
  ASSERT_EQ(spec.sparsity(), 3u);
  std::vector<int> hits(10, 0);
  for (std::uint64_t seed = 0; seed < 10000; ++seed)
    for (auto j : sample_sfem(spec, seed).support) ++hits[j];
  for (int h : hits) EXPECT_NEAR(h / 10000.0, 0.3, 0.02);
}

TEST(SfemProperty, ExactnessAndSignSymmetry) {
  std::size_t positives = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const std::size_t p = 5 + seed % 200;
    const double alpha = (seed % 11) / 10.0;
    const auto spec = AlternativeSpec::sfem_rate(p, alpha, 0.05 + (seed % 7) * 0.3);
    const auto inst = sample_sfem(spec, seed * 31 + 1);
    ASSERT_EQ(inst.support.size(), spec.sparsity());
    EXPECT_TRUE(std::is_sorted(inst.support.begin(), inst.support.end()));
    EXPECT_EQ(std::set<std::size_t>(inst.support.begin(), inst.support.end()).size(), inst.support.size());
    std::size_t nz = 0;
    for (Eigen::Index i = 0; i < inst.beta.size(); ++i) {
      if (inst.beta[i] == 0.0) continue;
      ++nz;
      EXPECT_TRUE(inst.beta[i] == spec.amplitude() || inst.beta[i] == -spec.amplitude());
      positives += inst.beta[i] > 0;
      ++total;
    }
    EXPECT_EQ(nz, spec.sparsity());
  }
  const double frac = double(positives) / double(total);
  EXPECT_NEAR(frac, 0.5, 4.0 * std::sqrt(0.25 / double(total)));
}

TEST(Sfem, SeedDeterminism) {
  const auto spec = AlternativeSpec::sfem_rate(1000, 0.6, 0.3);
  const auto a = sample_sfem(spec, 42), b = sample_sfem(spec, 42), c = sample_sfem(spec, 43);
  EXPECT_EQ(a.beta, b.beta);
  EXPECT_EQ(a.support, b.support);
  EXPECT_NE(a.beta, c.beta);
}

TEST(Srem, TinyTauAndFullSupport) {
  const auto tiny = AlternativeSpec::srem(100, 0.5, 1e-8);
  const auto b = sample_srem(tiny, 1);
  for (auto j : b.support) EXPECT_LT(std::abs(b.beta[static_cast<Eigen::Index>(j)]), 1e-6);

  const auto two = AlternativeSpec::srem(2, 0.0, 1.0);
  const auto t = sample_srem(two, 9);
  EXPECT_EQ(t.support.size(), 2u);
  EXPECT_NE(t.beta[0], 0.0);
  EXPECT_NE(t.beta[1], 0.0);
  EXPECT_NE(t.beta[0], t.beta[1]);
}

TEST(SremProperty, VarianceMatchesTau) {
  // 1e4 single-coefficient draws: relative sd of the sample variance ~ sqrt(2/1e4) = 1.4%.
  const double tau = 1.7;
  const auto spec = AlternativeSpec::srem(50, 1.0, tau);
  double sum = 0, sumsq = 0;
  const int draws = 10000;
  for (int s = 0; s < draws; ++s) {
    const auto b = sample_srem(spec, static_cast<std::uint64_t>(s));
    ASSERT_EQ(b.support.size(), 1u);
    const double v = b.beta[static_cast<Eigen::Index>(b.support[0])];
    sum += v;
    sumsq += v * v;
  }
  const double var = (sumsq - sum * sum / draws) / (draws - 1);
  EXPECT_NEAR(var / (tau * tau), 1.0, 0.05);
}

TEST(Synthesize, NoiselessCases) {
  const auto x = designs::DesignMatrix::identity(30);
  const auto spec = AlternativeSpec::sfem_amplitude(30, 0.5, 2.0);
  const auto beta = sample(spec, 5);
  EXPECT_EQ(synthesize_observation(x, beta, 0.0, 77), beta.beta);
  SignalInstance zero{Eigen::VectorXd::Zero(30), {}};
  EXPECT_TRUE(synthesize_observation(x, zero, 0.0, 77).isZero(0.0));
}

TEST(SynthesizeProperty, NoiseEnergy) {
  // mean ||y||^2 / n over 1e4 draws with n = 20: sd = sqrt(2/20/1e4) ~ 0.3%.
  const std::size_t n = 20;
  const auto x = designs::DesignMatrix::identity(n);
  SignalInstance zero{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), {}};
  double acc = 0;
  const int draws = 10000;
  for (int s = 0; s < draws; ++s) acc += synthesize_observation(x, zero, 1.0, static_cast<std::uint64_t>(s)).squaredNorm() / n;
  EXPECT_NEAR(acc / draws, 1.0, 0.03);
}

TEST(Synthesize, DimensionMismatch) {
  const auto x = designs::DesignMatrix::identity(10);
  SignalInstance wrong{Eigen::VectorXd::Zero(9), {}};
  EXPECT_THROW(synthesize_observation(x, wrong, 1.0, 0), Error);
}

TEST(SignalCsv, Layout) {
  const auto spec = AlternativeSpec::sfem_amplitude(10, 1.0, 1.5);
  const auto inst = sample_sfem(spec, 2);
  const std::string csv = to_csv(spec, inst);
  EXPECT_EQ(csv.rfind("p,S,model,params\n10,1,SFEM,", 0), 0u);
  EXPECT_NE(csv.find("\nindex,value\n" + std::to_string(inst.support[0]) + ","), std::string::npos);
}

TEST(Model, Parse) {
  EXPECT_EQ(parse_model("SFEM"), Model::Sfem);
  EXPECT_EQ(parse_model("SREM"), Model::Srem);
  EXPECT_THROW(parse_model("mixed"), Error);
}
