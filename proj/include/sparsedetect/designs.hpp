#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace sparsedetect::designs {

// ---------------------------------------------------------------------------
// Design families. Every variant produces unit-norm columns.
// ---------------------------------------------------------------------------

struct Identity {
  std::size_t p = 0;
};

/// n x p matrix with orthonormal columns (p <= n), from a seeded Gaussian QR.
struct RandomOrthonormal {
  std::size_t n = 0;
  std::size_t p = 0;
};

/// One indicator block of k replicates per treatment, scaled by 1/sqrt(k).
struct BalancedOneWay {
  std::size_t p = 0;
  std::size_t k = 0;
};

/// One-way layout under the sum-to-zero constraint: blocks of +1, a trailing
/// block of -1 shared by all columns, scaled by 1/sqrt(2k). Gram off-diagonal
/// entries are exactly 1/2.
struct BalancedOneWayConstrained {
  std::size_t p = 0;
  std::size_t k = 0;
};

/// x_j = sqrt(gamma) w + sqrt(1 - gamma) v_j with w, v_1..v_p orthonormal.
struct ConstantCorrelation {
  std::size_t p = 0;
  double gamma = 0.0;
  std::size_t n = 0;
};

struct GaussianNormalized {
  std::size_t n = 0;
  std::size_t p = 0;
};

struct RademacherNormalized {
  std::size_t n = 0;
  std::size_t p = 0;
};

/// [I_n | H_n / sqrt(n)] with H_n the Sylvester Hadamard matrix; n must be a
/// power of two. Coherence is exactly 1/sqrt(n).
struct BasisConcatenation {
  std::size_t n = 0;
};

using DesignSpec = std::variant<Identity, RandomOrthonormal, BalancedOneWay,
                                BalancedOneWayConstrained, ConstantCorrelation,
                                GaussianNormalized, RademacherNormalized,
                                BasisConcatenation>;

/// Throws Error(Parameter) when the spec violates its family's constraints.
void validate(const DesignSpec& spec);

std::size_t rows(const DesignSpec& spec);
std::size_t cols(const DesignSpec& spec);

/// Short family name, e.g. "gaussian".
std::string variant_name(const DesignSpec& spec);
/// Parameters as "key=value" pairs joined by ';', e.g. "n=2000;p=10000".
std::string variant_params(const DesignSpec& spec);
/// "name;params", the canonical text form accepted by parse_spec.
std::string to_string(const DesignSpec& spec);
DesignSpec parse_spec(const std::string& text);

/// What is known about range(X) from the construction alone.
enum class ColumnSpace {
  Orthonormal,         // X^T X = I
  FullRowRank,         // range(X) = R^n (exact, or with probability one)
  General,
};

ColumnSpace column_space(const DesignSpec& spec);

// ---------------------------------------------------------------------------

class DesignMatrix {
public:
  /// Wraps explicit values (e.g. read from CSV). Columns must have unit norm.
  /// `structure` is trusted; pass General unless the construction proves more.
  DesignMatrix(DesignSpec spec, Eigen::MatrixXd values, std::optional<std::uint64_t> seed,
               ColumnSpace structure = ColumnSpace::General);

  /// Identity designs are kept implicit so that p = 10^5 stays cheap.
  static DesignMatrix identity(std::size_t p);

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }
  const DesignSpec& spec() const noexcept { return spec_; }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }
  ColumnSpace column_space() const noexcept { return column_space_; }
  bool is_implicit_identity() const noexcept { return implicit_identity_; }

  /// Dense n x p values (materialized for implicit identities).
  Eigen::MatrixXd dense() const;

  /// X^T y
  Eigen::VectorXd correlate(const Eigen::VectorXd& y) const;
  /// X beta, exploiting sparsity of beta.
  Eigen::VectorXd apply(const Eigen::VectorXd& beta) const;

  /// Column-norm invariant check; throws Error(Parameter) on violation.
  void check_invariants() const;

private:
  DesignMatrix(DesignSpec spec, std::size_t p);

  DesignSpec spec_;
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  Eigen::MatrixXd values_;
  std::optional<std::uint64_t> seed_;
  ColumnSpace column_space_ = ColumnSpace::General;
  bool implicit_identity_ = false;
};

DesignMatrix build_design(const DesignSpec& spec, std::uint64_t seed);

/// C = X^T X
Eigen::MatrixXd gram(const DesignMatrix& x);

struct CoherenceProfile {
  double gamma_used = 0.0;
  double max_offdiag = 0.0;
  std::size_t delta_observed = 1;
  bool strong_ok = true;
  double strong_delta = 0.0;  // cap is 1 - strong_delta
  std::vector<std::size_t> exceedance_counts;
};

/// `strong_delta` defaults to 1 / log p. For p <= 2 the strong-correlation
/// check is reported as satisfied.
CoherenceProfile coherence_profile(const Eigen::MatrixXd& c, double gamma,
                                   std::optional<double> strong_delta = std::nullopt);

/// sqrt((p - n) / (n p)): no n x p unit-norm design with p >= n has smaller
/// coherence.
double coherence_lower_bound(std::size_t n, std::size_t p);

// CSV exchange: first line "n,p,variant" with values, then n rows of p
// entries printed with 17 significant digits.
std::string to_csv(const DesignMatrix& x);
DesignMatrix from_csv(const std::string& text);
void write_csv(const DesignMatrix& x, const std::string& path);
DesignMatrix read_csv(const std::string& path);

}  // namespace sparsedetect::designs
