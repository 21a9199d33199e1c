#include "lcl/ensembles.hpp"

#include "lcl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lcl {

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::GinibreReal: return "ginibre-real";
    case EnsembleKind::GinibreComplex: return "ginibre-complex";
    case EnsembleKind::Rademacher: return "rademacher";
    case EnsembleKind::Uniform: return "uniform";
    case EnsembleKind::Laplace: return "laplace";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  for (auto k : {EnsembleKind::GinibreReal, EnsembleKind::GinibreComplex, EnsembleKind::Rademacher,
                 EnsembleKind::Uniform, EnsembleKind::Laplace}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown ensemble kind '" + std::string(name) +
                              "' (expected ginibre-real, ginibre-complex, rademacher, uniform, laplace)");
}

bool is_complex(EnsembleKind kind) { return kind == EnsembleKind::GinibreComplex; }

void EnsembleSpec::validate() const {
  if (N < 2) throw std::invalid_argument("ensemble dimension N must be >= 2, got " + std::to_string(N));
}

Complex draw_standardized(EnsembleKind kind, Xoshiro256pp& rng) {
  switch (kind) {
    case EnsembleKind::GinibreReal: return {rng.normal(), 0.0};
    case EnsembleKind::GinibreComplex: {
      const double re = rng.normal();
      const double im = rng.normal();
      return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }
    case EnsembleKind::Rademacher: return {(rng.next() >> 63) != 0 ? 1.0 : -1.0, 0.0};
    case EnsembleKind::Uniform: return {(2.0 * rng.uniform() - 1.0) * std::sqrt(3.0), 0.0};
    case EnsembleKind::Laplace: {
      // Inverse CDF with scale b = 1/sqrt(2): variance 2 b^2 = 1.
      const double u = rng.uniform() - 0.5;
      const double mag = -std::log1p(-2.0 * std::abs(u)) / std::numbers::sqrt2;
      return {u < 0.0 ? -mag : mag, 0.0};
    }
  }
  throw std::invalid_argument("unknown ensemble kind");
}

SampleMatrix sample_matrix(const EnsembleSpec& spec) {
  spec.validate();
  const Index n = spec.N;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Xoshiro256pp rng(spec.seed);
  SampleMatrix out{n, MatrixXc(n, n), !is_complex(spec.kind)};
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) out.entries(i, j) = draw_standardized(spec.kind, rng) * scale;
  }
  return out;
}

VectorXc sample_row(EnsembleKind kind, Index N, Xoshiro256pp& rng) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  VectorXc row(N);
  for (Index j = 0; j < N; ++j) row(j) = draw_standardized(kind, rng) * scale;
  return row;
}

TailReport validate_tails(const EnsembleSpec& spec, std::int64_t trials) {
  spec.validate();
  if (trials < 10000) throw std::invalid_argument("validate_tails needs at least 10^4 trials");

  constexpr int kGrid = 41;
  std::vector<double> lambdas(kGrid);
  for (int k = 0; k < kGrid; ++k) lambdas[k] = std::exp2((k - 16) / 4.0);

  Xoshiro256pp rng(spec.seed);
  std::vector<std::int64_t> counts(kGrid, 0);
  Complex sum{};
  double sum_sq = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const Complex x = draw_standardized(spec.kind, rng);
    sum += x;
    sum_sq += std::norm(x);
    const double a = std::abs(x);
    // lambdas is increasing, so every lambda below a counts this draw.
    const auto first_not_below = std::lower_bound(lambdas.begin(), lambdas.end(), a);
    for (auto it = lambdas.begin(); it != first_not_below; ++it) ++counts[it - lambdas.begin()];
  }

  TailReport report;
  report.sample_count = trials;
  const double n = static_cast<double>(trials);
  // Moments are reported on the 1/N scale of the actual matrix entries.
  const double inv_n = 1.0 / static_cast<double>(spec.N);
  report.empirical_mean = sum / n * std::sqrt(inv_n);
  report.empirical_variance = (sum_sq / n - std::norm(sum / n)) * inv_n;

  std::vector<double> xs;
  std::vector<double> ys;
  for (int k = 0; k < kGrid; ++k) {
    const double p = static_cast<double>(counts[k]) / n;
    report.exceedance_curve.emplace_back(lambdas[k], p);
    if (p <= 0.5 && counts[k] >= 20) {
      xs.push_back(std::log(lambdas[k]));
      ys.push_back(std::log(-std::log(p)));
    }
  }
  if (xs.size() >= 3) {
    const LineFit fit = fit_line(xs, ys);
    if (std::isfinite(fit.slope)) report.theta = fit.slope;
  }
  return report;
}

SampleMatrix shift(const SampleMatrix& x, Complex z) {
  SampleMatrix out = x;
  if (out.base_diagonal.size() == 0) out.base_diagonal = x.entries.diagonal();
  out.applied_shift = x.applied_shift + z;
  out.entries.diagonal() = out.base_diagonal.array() - out.applied_shift;
  out.is_real = x.is_real && out.applied_shift.imag() == 0.0;
  return out;
}

}  // namespace lcl
