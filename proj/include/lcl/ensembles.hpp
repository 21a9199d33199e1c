// Random matrices with i.i.d. centered entries of variance 1/N.
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "lcl/dense.hpp"
#include "lcl/rng.hpp"

namespace lcl {

/// Entry laws. All are centered with variance exactly 1/N after scaling:
///   ginibre-real     Normal(0, 1/N)
///   ginibre-complex  Normal(0, 1/(2N)) + i Normal(0, 1/(2N))
///   rademacher       +-1/sqrt(N) with probability 1/2 each
///   uniform          Uniform(-sqrt(3/N), sqrt(3/N))
///   laplace          Laplace with scale 1/sqrt(2N)
enum class EnsembleKind { GinibreReal, GinibreComplex, Rademacher, Uniform, Laplace };

std::string_view to_string(EnsembleKind kind);
/// Throws std::invalid_argument for unknown names.
EnsembleKind parse_ensemble_kind(std::string_view name);
bool is_complex(EnsembleKind kind);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::GinibreComplex;
  Index N = 2;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SampleMatrix {
  Index N = 0;
  MatrixXc entries;
  bool is_real = false;
  /// Total diagonal shift applied since sampling, and the diagonal before it. Keeping the
  /// original diagonal makes shift(shift(X, z), -z) reproduce X bit for bit.
  Complex applied_shift{};
  VectorXc base_diagonal;

  /// Real part as a real matrix; only meaningful when is_real.
  Eigen::MatrixXd real_entries() const { return entries.real(); }
  bool all_finite() const { return entries.allFinite(); }
};

/// One entry of sqrt(N) * X, i.e. the law before the 1/sqrt(N) scaling (unit variance).
Complex draw_standardized(EnsembleKind kind, Xoshiro256pp& rng);

/// Column-major fill from a generator seeded with spec.seed.
SampleMatrix sample_matrix(const EnsembleSpec& spec);

/// Fresh entries for row `row` of an N x N matrix of the given law, from an explicit generator.
VectorXc sample_row(EnsembleKind kind, Index N, Xoshiro256pp& rng);

struct TailReport {
  std::int64_t sample_count = 0;
  Complex empirical_mean{};
  double empirical_variance = 0.0;
  /// (lambda, empirical P(|sqrt(N) X_ij| > lambda)) on lambda = 2^{k/4}, k = -16..24.
  std::vector<std::pair<double, double>> exceedance_curve;
  /// Least-squares slope of log(-log P) against log(lambda) over the tail; empty when
  /// fewer than three tail points have enough exceedances to fit.
  std::optional<double> theta;
};

/// Empirical tail of the standardized entry law. Requires trials >= 10^4.
TailReport validate_tails(const EnsembleSpec& spec, std::int64_t trials);

/// X - zI; off-diagonal entries are copied untouched.
SampleMatrix shift(const SampleMatrix& x, Complex z);

}  // namespace lcl
