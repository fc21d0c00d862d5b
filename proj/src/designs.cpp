#include "sparsedetect/designs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "sparsedetect/error.hpp"
#include "sparsedetect/rng.hpp"
#include "text_util.hpp"

namespace sparsedetect::designs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::Parameter, what);
}

/// n x m matrix with orthonormal columns from the QR factor of a Gaussian draw.
Eigen::MatrixXd random_orthonormal_columns(std::size_t n, std::size_t m, Engine& engine) {
  Eigen::MatrixXd g(n, m);
  fill_standard_normal(engine, std::span<double>(g.data(), static_cast<std::size_t>(g.size())));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
  return q;
}

void normalize_columns(Eigen::MatrixXd& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double norm = x.col(j).norm();
    if (norm == 0.0) fail(ErrorCode::Runtime, "sampled a zero column");
    x.col(j) /= norm;
  }
}

}  // namespace

void validate(const DesignSpec& spec) {
  std::visit(overloaded{
                 [](const Identity& s) { require(s.p >= 1, "identity: p must be >= 1"); },
                 [](const RandomOrthonormal& s) {
                   require(s.n >= 1 && s.p >= 1, "random_orthonormal: n and p must be >= 1");
                   require(s.p <= s.n, "random_orthonormal: requires p <= n");
                 },
                 [](const BalancedOneWay& s) {
                   require(s.p >= 1 && s.k >= 1, "balanced_one_way: p and k must be >= 1");
                 },
                 [](const BalancedOneWayConstrained& s) {
                   require(s.p >= 1 && s.k >= 1,
                           "balanced_one_way_constrained: p and k must be >= 1");
                 },
                 [](const ConstantCorrelation& s) {
                   require(s.p >= 1, "constant_correlation: p must be >= 1");
                   require(s.gamma > 0.0 && s.gamma < 1.0,
                           "constant_correlation: requires 0 < gamma < 1");
                   require(s.n >= s.p + 1, "constant_correlation: requires n >= p + 1");
                 },
                 [](const GaussianNormalized& s) {
                   require(s.n >= 1 && s.p >= 1, "gaussian: n and p must be >= 1");
                 },
                 [](const RademacherNormalized& s) {
                   require(s.n >= 1 && s.p >= 1, "rademacher: n and p must be >= 1");
                 },
                 [](const BasisConcatenation& s) {
                   require(s.n >= 1 && std::has_single_bit(s.n),
                           "basis_concatenation: n must be a power of two");
                 },
             },
             spec);
}

std::size_t rows(const DesignSpec& spec) {
  return std::visit(overloaded{
                        [](const Identity& s) { return s.p; },
                        [](const RandomOrthonormal& s) { return s.n; },
                        [](const BalancedOneWay& s) { return s.p * s.k; },
                        [](const BalancedOneWayConstrained& s) { return (s.p + 1) * s.k; },
                        [](const ConstantCorrelation& s) { return s.n; },
                        [](const GaussianNormalized& s) { return s.n; },
                        [](const RademacherNormalized& s) { return s.n; },
                        [](const BasisConcatenation& s) { return s.n; },
                    },
                    spec);
}

std::size_t cols(const DesignSpec& spec) {
  return std::visit(overloaded{
                        [](const BasisConcatenation& s) { return 2 * s.n; },
                        [](const auto& s) { return s.p; },
                    },
                    spec);
}

std::string variant_name(const DesignSpec& spec) {
  return std::visit(overloaded{
                        [](const Identity&) { return std::string("identity"); },
                        [](const RandomOrthonormal&) { return std::string("random_orthonormal"); },
                        [](const BalancedOneWay&) { return std::string("balanced_one_way"); },
                        [](const BalancedOneWayConstrained&) {
                          return std::string("balanced_one_way_constrained");
                        },
                        [](const ConstantCorrelation&) { return std::string("constant_correlation"); },
                        [](const GaussianNormalized&) { return std::string("gaussian"); },
                        [](const RademacherNormalized&) { return std::string("rademacher"); },
                        [](const BasisConcatenation&) { return std::string("basis_concatenation"); },
                    },
                    spec);
}

std::string variant_params(const DesignSpec& spec) {
  auto sz = [](std::size_t v) { return std::to_string(v); };
  return std::visit(
      overloaded{
          [&](const Identity& s) { return "p=" + sz(s.p); },
          [&](const RandomOrthonormal& s) { return "n=" + sz(s.n) + ";p=" + sz(s.p); },
          [&](const BalancedOneWay& s) { return "p=" + sz(s.p) + ";k=" + sz(s.k); },
          [&](const BalancedOneWayConstrained& s) { return "p=" + sz(s.p) + ";k=" + sz(s.k); },
          [&](const ConstantCorrelation& s) {
            return "p=" + sz(s.p) + ";gamma=" + detail::format_sig(s.gamma, 17) + ";n=" + sz(s.n);
          },
          [&](const GaussianNormalized& s) { return "n=" + sz(s.n) + ";p=" + sz(s.p); },
          [&](const RademacherNormalized& s) { return "n=" + sz(s.n) + ";p=" + sz(s.p); },
          [&](const BasisConcatenation& s) { return "n=" + sz(s.n); },
      },
      spec);
}

std::string to_string(const DesignSpec& spec) {
  return variant_name(spec) + ";" + variant_params(spec);
}

DesignSpec parse_spec(const std::string& text) {
  const auto parts = detail::split(text, ';');
  const std::string name(detail::trim(parts.front()));
  std::map<std::string, std::string> kv;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto item = detail::trim(parts[i]);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorCode::Parse, "design spec parameter '" + std::string(item) + "' is not key=value");
    kv[std::string(detail::trim(item.substr(0, eq)))] = std::string(item.substr(eq + 1));
  }
  auto take = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) fail(ErrorCode::Parse, "design '" + name + "' needs parameter '" + key + "'");
    return it->second;
  };
  auto size = [&](const char* key) { return detail::parse_size(take(key), key); };

  DesignSpec spec;
  if (name == "identity") spec = Identity{size("p")};
  else if (name == "random_orthonormal") spec = RandomOrthonormal{size("n"), size("p")};
  else if (name == "balanced_one_way") spec = BalancedOneWay{size("p"), size("k")};
  else if (name == "balanced_one_way_constrained") spec = BalancedOneWayConstrained{size("p"), size("k")};
  else if (name == "constant_correlation")
    spec = ConstantCorrelation{size("p"), detail::parse_double(take("gamma"), "gamma"), size("n")};
  else if (name == "gaussian") spec = GaussianNormalized{size("n"), size("p")};
  else if (name == "rademacher") spec = RademacherNormalized{size("n"), size("p")};
  else if (name == "basis_concatenation") spec = BasisConcatenation{size("n")};
  else fail(ErrorCode::Parse, "unknown design variant '" + name + "'");
  return spec;
}

ColumnSpace column_space(const DesignSpec& spec) {
  return std::visit(overloaded{
                        [](const Identity&) { return ColumnSpace::Orthonormal; },
                        [](const RandomOrthonormal&) { return ColumnSpace::Orthonormal; },
                        [](const BalancedOneWay&) { return ColumnSpace::Orthonormal; },
                        // contains the identity basis
                        [](const BasisConcatenation&) { return ColumnSpace::FullRowRank; },
                        // rank min(n, p) with probability one
                        [](const GaussianNormalized& s) {
                          return s.p >= s.n ? ColumnSpace::FullRowRank : ColumnSpace::General;
                        },
                        [](const auto&) { return ColumnSpace::General; },
                    },
                    spec);
}

// ---------------------------------------------------------------------------

DesignMatrix::DesignMatrix(DesignSpec spec, Eigen::MatrixXd values, std::optional<std::uint64_t> seed,
                           ColumnSpace structure)
    : spec_(std::move(spec)),
      n_(static_cast<std::size_t>(values.rows())),
      p_(static_cast<std::size_t>(values.cols())),
      values_(std::move(values)),
      seed_(seed),
      column_space_(structure) {
  if (n_ == 0 || p_ == 0) fail(ErrorCode::Parameter, "design matrix must be non-empty");
  check_invariants();
}

DesignMatrix::DesignMatrix(DesignSpec spec, std::size_t p)
    : spec_(std::move(spec)), n_(p), p_(p), column_space_(ColumnSpace::Orthonormal),
      implicit_identity_(true) {}

DesignMatrix DesignMatrix::identity(std::size_t p) {
  validate(Identity{p});
  return DesignMatrix(Identity{p}, p);
}

Eigen::MatrixXd DesignMatrix::dense() const {
  if (implicit_identity_) return Eigen::MatrixXd::Identity(n_, p_);
  return values_;
}

Eigen::VectorXd DesignMatrix::correlate(const Eigen::VectorXd& y) const {
  if (static_cast<std::size_t>(y.size()) != n_)
    fail(ErrorCode::Dimension, "observation length " + std::to_string(y.size()) +
                                   " does not match design rows " + std::to_string(n_));
  if (implicit_identity_) return y;
  return values_.transpose() * y;
}

Eigen::VectorXd DesignMatrix::apply(const Eigen::VectorXd& beta) const {
  if (static_cast<std::size_t>(beta.size()) != p_)
    fail(ErrorCode::Dimension, "coefficient length " + std::to_string(beta.size()) +
                                   " does not match design columns " + std::to_string(p_));
  if (implicit_identity_) return beta;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    if (beta[j] != 0.0) out.noalias() += beta[j] * values_.col(j);
  return out;
}

void DesignMatrix::check_invariants() const {
  if (implicit_identity_) return;
  if (!values_.allFinite()) fail(ErrorCode::Parameter, "design matrix has non-finite entries");
  for (Eigen::Index j = 0; j < values_.cols(); ++j) {
    const double norm = values_.col(j).norm();
    if (std::abs(norm - 1.0) > 1e-10)
      fail(ErrorCode::Parameter, "column " + std::to_string(j) + " has norm " +
                                     detail::format_sig(norm, 17) + ", expected 1");
  }
}

DesignMatrix build_design(const DesignSpec& spec, std::uint64_t seed) {
  validate(spec);
  if (std::holds_alternative<Identity>(spec)) return DesignMatrix::identity(std::get<Identity>(spec).p);

  Engine engine = make_engine(seed);
  const auto n = static_cast<Eigen::Index>(rows(spec));
  const auto p = static_cast<Eigen::Index>(cols(spec));
  Eigen::MatrixXd x = std::visit(
      overloaded{
          [&](const Identity&) -> Eigen::MatrixXd { return Eigen::MatrixXd::Identity(n, p); },
          [&](const RandomOrthonormal& s) -> Eigen::MatrixXd {
            return random_orthonormal_columns(s.n, s.p, engine);
          },
          [&](const BalancedOneWay& s) -> Eigen::MatrixXd {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, p);
            const double v = 1.0 / std::sqrt(static_cast<double>(s.k));
            for (std::size_t j = 0; j < s.p; ++j)
              for (std::size_t i = 0; i < s.k; ++i)
                m(static_cast<Eigen::Index>(j * s.k + i), static_cast<Eigen::Index>(j)) = v;
            return m;
          },
          [&](const BalancedOneWayConstrained& s) -> Eigen::MatrixXd {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, p);
            const double v = 1.0 / std::sqrt(2.0 * static_cast<double>(s.k));
            for (std::size_t j = 0; j < s.p; ++j) {
              for (std::size_t i = 0; i < s.k; ++i) {
                m(static_cast<Eigen::Index>(j * s.k + i), static_cast<Eigen::Index>(j)) = v;
                m(static_cast<Eigen::Index>(s.p * s.k + i), static_cast<Eigen::Index>(j)) = -v;
              }
            }
            return m;
          },
          [&](const ConstantCorrelation& s) -> Eigen::MatrixXd {
            const Eigen::MatrixXd basis = random_orthonormal_columns(s.n, s.p + 1, engine);
            const double a = std::sqrt(s.gamma);
            const double b = std::sqrt(1.0 - s.gamma);
            Eigen::MatrixXd m(n, p);
            for (Eigen::Index j = 0; j < p; ++j) m.col(j) = a * basis.col(0) + b * basis.col(j + 1);
            return m;
          },
          [&](const GaussianNormalized&) -> Eigen::MatrixXd {
            Eigen::MatrixXd m(n, p);
            fill_standard_normal(engine, std::span<double>(m.data(), static_cast<std::size_t>(m.size())));
            normalize_columns(m);
            return m;
          },
          [&](const RademacherNormalized&) -> Eigen::MatrixXd {
            Eigen::MatrixXd m(n, p);
            const double v = 1.0 / std::sqrt(static_cast<double>(n));
            std::uniform_int_distribution<int> coin(0, 1);
            for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = coin(engine) ? v : -v;
            return m;
          },
          [&](const BasisConcatenation& s) -> Eigen::MatrixXd {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, p);
            m.leftCols(n).setIdentity();
            const double v = 1.0 / std::sqrt(static_cast<double>(s.n));
            for (std::size_t i = 0; i < s.n; ++i)
              for (std::size_t j = 0; j < s.n; ++j)
                m(static_cast<Eigen::Index>(i), n + static_cast<Eigen::Index>(j)) =
                    (std::popcount(i & j) % 2 == 0) ? v : -v;
            return m;
          },
      },
      spec);

  return DesignMatrix(spec, std::move(x), seed, column_space(spec));
}

Eigen::MatrixXd gram(const DesignMatrix& x) {
  const auto p = static_cast<Eigen::Index>(x.p());
  if (x.is_implicit_identity()) return Eigen::MatrixXd::Identity(p, p);
  const Eigen::MatrixXd values = x.dense();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(p, p);
  c.selfadjointView<Eigen::Lower>().rankUpdate(values.transpose());
  return c.selfadjointView<Eigen::Lower>();
}

CoherenceProfile coherence_profile(const Eigen::MatrixXd& c, double gamma,
                                   std::optional<double> strong_delta) {
  if (c.rows() != c.cols()) fail(ErrorCode::Dimension, "Gram matrix must be square");
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail(ErrorCode::Domain, "gamma must lie in [0, 1]");
  const auto p = static_cast<std::size_t>(c.rows());

  CoherenceProfile out;
  out.gamma_used = gamma;
  out.strong_delta = strong_delta.value_or(p >= 2 ? 1.0 / std::log(static_cast<double>(p)) : 0.0);
  if (p < 2) {
    out.exceedance_counts.assign(p, 1);
    return out;
  }

  out.exceedance_counts.assign(p, 0);
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    std::size_t count = 0;
    for (Eigen::Index k = 0; k < c.rows(); ++k) {
      const double v = std::abs(c(k, j));
      if (v > gamma) ++count;
      if (k != j) out.max_offdiag = std::max(out.max_offdiag, v);
    }
    out.exceedance_counts[static_cast<std::size_t>(j)] = count;
  }
  out.delta_observed = *std::max_element(out.exceedance_counts.begin(), out.exceedance_counts.end());
  out.strong_ok = p <= 2 || out.max_offdiag <= 1.0 - out.strong_delta;
  return out;
}

double coherence_lower_bound(std::size_t n, std::size_t p) {
  if (n < 1 || p < n) fail(ErrorCode::Domain, "coherence lower bound requires p >= n >= 1");
  const double nd = static_cast<double>(n);
  const double pd = static_cast<double>(p);
  return std::sqrt((pd - nd) / (nd * pd));
}

}  // namespace sparsedetect::designs
