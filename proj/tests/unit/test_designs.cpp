#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "sparsedetect/designs.hpp"
#include "sparsedetect/error.hpp"

using namespace sparsedetect;
using namespace sparsedetect::designs;

namespace {

double max_offdiag(const Eigen::MatrixXd& c) {
  double m = 0;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      if (i != j) m = std::max(m, std::abs(c(i, j)));
  return m;
}

std::vector<DesignSpec> family_samples() {
  return {Identity{7},
          RandomOrthonormal{12, 5},
          BalancedOneWay{4, 3},
          BalancedOneWayConstrained{5, 2},
          ConstantCorrelation{6, 0.3, 9},
          GaussianNormalized{15, 40},
          RademacherNormalized{16, 9},
          BasisConcatenation{8}};
}

}  // namespace

TEST(Designs, BalancedOneWayBlocks) {
  const auto x = build_design(BalancedOneWay{3, 2}, 0).dense();
  ASSERT_EQ(x.rows(), 6);
  ASSERT_EQ(x.cols(), 3);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) {
      if (i / 2 == j)
        EXPECT_NEAR(x(i, j), 1.0 / std::sqrt(2.0), 1e-15);
      else
        EXPECT_EQ(x(i, j), 0.0);
    }
}

TEST(Designs, IdentityIsIdentity) {
  const auto x = build_design(Identity{4}, 5);
  EXPECT_TRUE(x.dense().isIdentity(0.0));
  EXPECT_TRUE(gram(build_design(Identity{3}, 0)).isIdentity(0.0));
}

TEST(Designs, ConstantCorrelationGram) {
  const auto c = gram(build_design(ConstantCorrelation{3, 0.5, 4}, 11));
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) EXPECT_NEAR(c(i, j), i == j ? 1.0 : 0.5, 1e-10);
}

TEST(Designs, GramExamples) {
  EXPECT_TRUE(gram(build_design(BalancedOneWay{2, 3}, 0)).isIdentity(1e-12));
  const auto c = gram(build_design(BalancedOneWayConstrained{3, 2}, 0));
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) EXPECT_NEAR(c(i, j), i == j ? 1.0 : 0.5, 1e-12);
  const auto x = build_design(BalancedOneWayConstrained{3, 2}, 0).dense();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = std::abs(x.data()[i]);
    EXPECT_TRUE(v == 0.0 || std::abs(v - 0.5) < 1e-15);
  }
}

TEST(Designs, ParameterErrors) {
  EXPECT_THROW(build_design(RandomOrthonormal{3, 5}, 0), Error);
  EXPECT_THROW(build_design(BasisConcatenation{12}, 0), Error);
  EXPECT_THROW(build_design(ConstantCorrelation{5, 0.0, 8}, 0), Error);
  EXPECT_THROW(build_design(ConstantCorrelation{5, 1.0, 8}, 0), Error);
  EXPECT_THROW(build_design(ConstantCorrelation{5, 0.5, 5}, 0), Error);
  EXPECT_THROW(build_design(Identity{0}, 0), Error);
  EXPECT_THROW(build_design(GaussianNormalized{0, 4}, 0), Error);
}

TEST(DesignsProperty, UnitColumnsOrthogonalityDeterminism) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    for (const auto& spec : family_samples()) {
      const auto x = build_design(spec, seed);
      const Eigen::MatrixXd d = x.dense();
      ASSERT_EQ(std::size_t(d.rows()), rows(spec));
      ASSERT_EQ(std::size_t(d.cols()), cols(spec));
      for (Eigen::Index j = 0; j < d.cols(); ++j) EXPECT_LE(std::abs(d.col(j).norm() - 1.0), 1e-10) << to_string(spec);
      EXPECT_EQ(d, build_design(spec, seed).dense()) << to_string(spec);

      const auto c = gram(x);
      EXPECT_LE((c - c.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LE((c.diagonal().array() - 1.0).abs().maxCoeff(), 1e-10);
      if (column_space(spec) == ColumnSpace::Orthonormal) EXPECT_LE(max_offdiag(c), 1e-10) << to_string(spec);
      if (std::holds_alternative<ConstantCorrelation>(spec)) {
        const double g = std::get<ConstantCorrelation>(spec).gamma;
        for (Eigen::Index i = 0; i < c.rows(); ++i)
          for (Eigen::Index j = 0; j < c.cols(); ++j)
            if (i != j) EXPECT_NEAR(c(i, j), g, 1e-10);
      }
      if (x.p() >= x.n())
        EXPECT_GE(coherence_profile(c, 0.5).max_offdiag, coherence_lower_bound(x.n(), x.p()) - 1e-9) << to_string(spec);
    }
  }
}

TEST(Designs, BasisConcatenationBlocks) {
  const auto c = gram(build_design(BasisConcatenation{16}, 0));
  EXPECT_LE(max_offdiag(c.topLeftCorner(16, 16)), 1e-12);
  EXPECT_LE(max_offdiag(c.bottomRightCorner(16, 16)), 1e-10);
  EXPECT_NEAR(c.topRightCorner(16, 16).cwiseAbs().maxCoeff(), 0.25, 1e-12);
}

TEST(Designs, SeedsDiffer) {
  EXPECT_NE(build_design(GaussianNormalized{5, 6}, 1).dense(), build_design(GaussianNormalized{5, 6}, 2).dense());
}

TEST(Coherence, Examples) {
  const auto id = coherence_profile(Eigen::MatrixXd::Identity(4, 4), 0.1);
  EXPECT_EQ(id.delta_observed, 1u);
  EXPECT_EQ(id.max_offdiag, 0.0);
  EXPECT_TRUE(id.strong_ok);

  Eigen::MatrixXd half = Eigen::MatrixXd::Constant(3, 3, 0.5);
  half.diagonal().setOnes();
  const auto prof = coherence_profile(half, 0.4);
  EXPECT_EQ(prof.delta_observed, 3u);
  for (auto e : prof.exceedance_counts) EXPECT_EQ(e, 3u);

  const auto tiny = coherence_profile(Eigen::MatrixXd::Identity(1, 1), 0.1);
  EXPECT_EQ(tiny.delta_observed, 1u);
  EXPECT_EQ(tiny.max_offdiag, 0.0);

  Eigen::MatrixXd two(2, 2);
  two << 1, 0.99, 0.99, 1;
  EXPECT_TRUE(coherence_profile(two, 0.5).strong_ok);
}

TEST(Coherence, StrongCheckUsesNaturalLog) {
  // p = 100: cap 1 - 1/log(100) ~ 0.78285
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(100, 100);
  c(0, 1) = c(1, 0) = 0.78;
  EXPECT_TRUE(coherence_profile(c, 0.5).strong_ok);
  c(0, 1) = c(1, 0) = 0.79;
  EXPECT_FALSE(coherence_profile(c, 0.5).strong_ok);
  EXPECT_TRUE(coherence_profile(c, 0.5, 0.1).strong_ok);
}

TEST(CoherenceProperty, ProfileInvariants) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = gram(build_design(GaussianNormalized{6 + seed % 5, 10 + seed}, seed));
    for (double g : {0.0, 0.2, 0.6, 0.99}) {
      const auto prof = coherence_profile(c, g);
      EXPECT_GE(prof.delta_observed, 1u);
      EXPECT_LE(prof.delta_observed, std::size_t(c.rows()));
      EXPECT_GE(prof.max_offdiag, 0.0);
      for (auto e : prof.exceedance_counts) {
        EXPECT_GE(e, 1u);
        EXPECT_LE(e, std::size_t(c.rows()));
      }
    }
  }
}

TEST(Coherence, GaussianWeakCorrelationRate) {
  // n = 500, p = 2000, gamma = sqrt(5 log p / n)
  const double gamma = std::sqrt(5.0 * std::log(2000.0) / 500.0);
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    ok += coherence_profile(gram(build_design(GaussianNormalized{500, 2000}, seed)), gamma).delta_observed == 1;
  EXPECT_GE(ok, 95);
}

TEST(Coherence, LowerBound) {
  EXPECT_NEAR(coherence_lower_bound(5, 10), std::sqrt(0.1), 1e-15);
  EXPECT_GE(coherence_lower_bound(10, 20), 1.0 / std::sqrt(20.0) - 1e-15);
  EXPECT_EQ(coherence_lower_bound(7, 7), 0.0);
  EXPECT_THROW(coherence_lower_bound(10, 5), Error);
}

TEST(DesignSpecText, RoundTrip) {
  for (const auto& spec : family_samples()) EXPECT_EQ(to_string(parse_spec(to_string(spec))), to_string(spec));
  EXPECT_EQ(to_string(GaussianNormalized{2000, 10000}), "gaussian;n=2000;p=10000");
  EXPECT_THROW(parse_spec("gaussian;n=4"), Error);
  EXPECT_THROW(parse_spec("hexagonal;n=4"), Error);
}

TEST(DesignCsv, RoundTripExact) {
  const auto x = build_design(GaussianNormalized{6, 9}, 17);
  const auto y = from_csv(to_csv(x));
  EXPECT_EQ(y.n(), 6u);
  EXPECT_EQ(y.p(), 9u);
  EXPECT_EQ(y.dense(), x.dense());
  EXPECT_EQ(to_string(y.spec()), to_string(x.spec()));
  const std::string csv = to_csv(x);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "6,9,gaussian;n=6;p=9");

  const auto path = std::filesystem::temp_directory_path() / "sparsedetect_design_roundtrip.csv";
  write_csv(x, path.string());
  EXPECT_EQ(read_csv(path.string()).dense(), x.dense());
  std::filesystem::remove(path);
}

TEST(DesignCsv, Rejections) {
  EXPECT_THROW(from_csv("2,2,identity;p=2\n1,0\n"), Error);
  EXPECT_THROW(from_csv("2,2,identity;p=2\n1,0\n0,x\n"), Error);
  EXPECT_THROW(from_csv("2,2,identity;p=2\n2,0\n0,1\n"), Error);  // column norm
  EXPECT_THROW(read_csv("/nonexistent/design.csv"), Error);
}

TEST(Designs, ImplicitIdentityOperations) {
  const auto x = DesignMatrix::identity(5);
  EXPECT_TRUE(x.is_implicit_identity());
  Eigen::VectorXd v(5);
  v << 1, -2, 3, -4, 5;
  EXPECT_EQ(x.correlate(v), v);
  EXPECT_EQ(x.apply(v), v);
}

TEST(Designs, CorrelateAndApplyMatchDense) {
  const auto x = build_design(RademacherNormalized{8, 12}, 4);
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(8, -1, 2);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(12);
  b[3] = 2;
  b[10] = -1;
  EXPECT_LE((x.correlate(y) - x.dense().transpose() * y).norm(), 1e-12);
  EXPECT_LE((x.apply(b) - x.dense() * b).norm(), 1e-12);
}
