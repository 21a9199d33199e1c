// Hermitized spectra of Y_z = X - z, empirical Green functions and their minors, the
// spectral grid S(alpha), and local-law statistics.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lcl/dense.hpp"
#include "lcl/ensembles.hpp"
#include "lcl/limiting.hpp"

namespace lcl {

enum class HermitizeMethod {
  Svd,               // squared singular values of Y_z (default; accurate near lambda_1 ~ 0)
  HermitianProduct,  // eigenvalues of the explicitly formed Y_z^* Y_z
};

struct HermitizedSpectrum {
  Complex z{};
  Index N = 0;
  /// Ascending, >= 0.
  Eigen::VectorXd eigenvalues;
  /// Orthonormal eigenvectors of Y^*Y as columns (right singular vectors of Y), if requested.
  std::optional<MatrixXc> eigenvectors;
  /// Eigenvalues that came out slightly negative and were set to 0.
  Index clamped_count = 0;
};

/// Spectrum of Y_z^* Y_z. Throws NumericError if the eigensolver fails or returns an
/// eigenvalue below -1e-10 (relative to the largest).
HermitizedSpectrum hermitize(const SampleMatrix& x, Complex z, bool want_vectors,
                             HermitizeMethod method = HermitizeMethod::Svd);

/// N^{-1} sum_j (lambda_j - w)^{-1}. Requires eta > 0.
Complex m_empirical(const HermitizedSpectrum& spec, const SpectralPoint& w);

/// Removed column labels T and row labels U (0-based).
struct MinorSpec {
  std::vector<Index> T;
  std::vector<Index> U;

  /// Labels in range, no duplicates, |T| + |U| <= N / 2.
  void validate(Index N) const;
};

struct GreenPair {
  /// ((Y^{(T,U)})^* Y^{(T,U)} - w)^{-1} on the original column labels, zero on rows/columns in T.
  MatrixXc G;
  /// (Y^{(T,U)} (Y^{(T,U)})^* - w)^{-1} on the original row labels, zero on rows/columns in U.
  MatrixXc Gcal;
};

/// Dense Green functions of the minor by LU solves.
GreenPair green_entries(const SampleMatrix& x, Complex z, const SpectralPoint& w, const MinorSpec& minor = {});

/// Same, for an already shifted complex matrix y.
GreenPair green_entries(const MatrixXc& y, const SpectralPoint& w, const MinorSpec& minor = {});

struct IdentityReport {
  Index N = 0;
  Complex z{};
  SpectralPoint w;
  // Exact identities; relative to the size of the Green function entries involved.
  double schur_G = 0.0;        // G^{(k,0)}_ij = G_ij - G_ik G_kj / G_kk
  double schur_Gcal = 0.0;     // the same for Gcal with row k removed
  double rank_one_G = 0.0;     // G^{(0,i)} from G and row i, and back
  double rank_one_Gcal = 0.0;  // Gcal^{(i,0)} from Gcal and column i, and back
  double ygy = 0.0;            // Y G Y^* = 1 + w Gcal
  double trace_relation = 0.0; // (tr G^{(T,U)} - tr Gcal^{(T,U)}) / N = (|T| - |U|) / (N w)
  // Deterministic inequalities as slack (bound minus value); >= 0 means the inequality holds.
  double minor_bound_slack = 0.0;  // (|T| + |U|)/(N eta) - |m - m_G^{(T,U)}|, and for m_Gcal
  double re_im_slack = 0.0;        // 2 sqrt(Im m / eta) - |Re m|
  double g2_slack = 0.0;           // min_i (Im G_ii - eta |[G^2]_ii|), relative to max Im G_ii

  double max_identity_residual() const;
  double min_inequality_slack() const;
};

/// Minors used by identity_suite when none are passed.
std::vector<MinorSpec> default_identity_minors(Index N);

/// Verifies the exact resolvent identities and deterministic inequalities for one matrix.
/// Requires eta > 0 and N <= 400.
IdentityReport identity_suite(const SampleMatrix& x, Complex z, const SpectralPoint& w,
                              const std::vector<MinorSpec>& minors = {});

/// (log N)^{log log N}.
double reference_phi(Index N);

struct SGrid {
  Complex z{};
  Index N = 0;
  double alpha_exponent = 0.0;
  std::vector<double> E_points;
  /// eta_points[k] belongs to E_points[k]; empty when the floor exceeds 10.
  std::vector<std::vector<double>> eta_points;
  std::vector<double> eta_floor;

  std::size_t size() const;
};

/// E equispaced on [max(lambda_-/5, 0), 5 lambda_+]; eta log-spaced from the S(alpha) floor
/// phi^alpha / (N |m_c(E + i floor)|), found by fixed-point iteration, up to 10.
SGrid build_sgrid(Complex z, Index N, double alpha_exponent, int nE, int nEta);

/// True when (E, eta) satisfies both S(alpha) inequalities.
bool in_sgrid(const SGrid& grid, double E, double eta);

struct LocalLawPoint {
  double E = 0.0;
  double eta = 0.0;
  double median_NetaLambda = 0.0;
  double max_NetaLambda = 0.0;
  /// max_ij |G_ij - m_c delta_ij| / (sqrt(Im m_c/(N eta)) + 1/(N eta)), median over seeds;
  /// NaN where entries were not computed.
  double entry_ratio_median = 0.0;
  double entry_ratio_max = 0.0;
  double median_Lambda = 0.0;
  bool bulk = false;
  bool slope_flag = false;
};

struct LocalLawSlope {
  double E = 0.0;
  /// Least-squares slope of log median Lambda against log eta over [N^-0.9, N^-0.2]; NaN when
  /// fewer than three grid etas fall in the window.
  double slope = 0.0;
  bool bulk = false;
};

struct LocalLawReport {
  EnsembleSpec spec;
  Complex z{};
  std::vector<std::uint64_t> seeds;
  std::vector<LocalLawPoint> points;
  std::vector<LocalLawSlope> slopes;
  /// Grid indices (into points) at which entrywise statistics were computed.
  std::vector<std::size_t> entry_points;
  /// Number of seeds whose spectrum needed clamping.
  Index clamped_total = 0;
};

/// Bulk energies: at least kRegimeTau inside the support.
bool is_bulk_energy(double E, const ShiftContext& c);

/// Strong local law statistics over the grid. Requires ||z| - 1| >= 0.05 (HypothesisError).
LocalLawReport local_law_sweep(const EnsembleSpec& spec, Complex z, const SGrid& grid,
                               const std::vector<std::uint64_t>& seeds, int threads = 0,
                               std::size_t max_entry_points = 32);

struct McErrorReport {
  Index i = 0;
  Index j = 0;
  std::int64_t resamples = 0;
  Complex average{};
  Complex target{};
  double deviation = 0.0;
  /// Standard error of the average (from the sample variance).
  double standard_error = 0.0;
  /// 1 / sqrt(resamples).
  double statistical_scale = 0.0;
};

/// Averages y_i G^{(0,{i,j})} y_j^* over fresh draws of rows i and j (law `kind`, seeds derived
/// from `seed`), with the minor held fixed; the exact mean is |z|^2 G^{(0,{i,j})}_ij.
McErrorReport conditional_expectation_check(const SampleMatrix& x, EnsembleKind kind, Complex z,
                                            const SpectralPoint& w, Index i, Index j, std::int64_t resamples,
                                            std::uint64_t seed);

}  // namespace lcl
