// Non-Hermitian spectra of X and the experiments built on them: the local circular law
// statistic, Girko's Hermitization identity, rigidity of the Hermitized spectrum against
// classical locations, and the smallest eigenvalue of Y_z^* Y_z.
#pragma once

#include <cstdint>
#include <vector>

#include "lcl/dense.hpp"
#include "lcl/ensembles.hpp"
#include "lcl/limiting.hpp"

namespace lcl {

struct ComplexSpectrum {
  Index N = 0;
  /// Eigenvalues of X; no ordering contract.
  std::vector<Complex> mu;
};

/// All eigenvalues of X by LAPACK geev (real or complex, no balancing of results).
ComplexSpectrum nonhermitian_spectrum(const SampleMatrix& x);

struct SpectrumCheck {
  /// |sum mu - tr X| / max(1, |tr X|)
  double trace_residual = 0.0;
  /// sum |X_ij|^2 - sum |mu|^2, which is >= 0 up to round-off (Schur).
  double schur_slack = 0.0;
};

SpectrumCheck check_spectrum(const SampleMatrix& x, const ComplexSpectrum& s);

enum class TestFunctionKind { RadialBump, CustomGrid };

/// f and its rescaling f_{z0}(z) = N^{2a} f(N^a (z - z0)).
///   radial-bump: f(xi) = exp(-1 / (1 - |xi/R|^2)) for |xi| < R.
///   custom-grid: f sampled on a (n x n) grid over [-L, L]^2 (zero on the border),
///                bilinear interpolation, Laplacian by the five-point stencil on the grid.
struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::RadialBump;
  Complex z0{};
  double a = 0.25;
  /// Radius of supp f (before rescaling).
  double support_radius = 1.0;
  /// ||Delta f||_{L^1}; invariant under the rescaling.
  double laplacian_l1 = 0.0;
  // custom-grid data
  Eigen::MatrixXd grid_values;
  Eigen::MatrixXd grid_laplacian;
  double half_width = 0.0;

  static TestFunction radial_bump(Complex z0, double a, double radius = 1.0);
  /// values(i, j) = f(-L + 2L i/(n-1), -L + 2L j/(n-1)) (real, imaginary coordinate).
  static TestFunction custom_grid(Complex z0, double a, const Eigen::MatrixXd& values, double half_width);

  /// Throws std::invalid_argument unless a in [0, 1/2] and the shape data is consistent.
  void validate() const;

  double f(Complex xi) const;
  double laplacian(Complex xi) const;
  double scaled(Complex z, Index N) const;
  double scaled_laplacian(Complex z, Index N) const;
  /// Radius of supp f_{z0} around z0.
  double scaled_support_radius(Index N) const;
};

/// Radial bump b(r) = exp(-1/(1-r^2)) on r < 1 and its derivatives in closed form.
double bump(double r);
double bump_laplacian(double r);
/// 2 pi int_0^1 |Delta b(r)| r dr.
double bump_laplacian_l1();

/// N^{-1} sum_j f_{z0}(mu_j), summed in list order.
double local_stat(const ComplexSpectrum& s, const TestFunction& tf);

/// (1/pi) int_D f_{z0} dA over the unit disk D. Polar quadrature around z0 for the bump, cell-wise for grids.
double disk_integral(const TestFunction& tf, Index N);

/// E[local_stat] for complex Ginibre: N^{-1} int f_{z0}(zeta) K_N(zeta, zeta) dA.
double ginibre_expected_local_stat(const TestFunction& tf, Index N);

struct ScalingRow {
  Index N = 0;
  double a = 0.0;
  double median_err = 0.0;
  /// N^{-1+2a} ||Delta f||_{L^1}
  double envelope = 0.0;
  double slope = 0.0;
  double rhs = 0.0;
  double mean_local_stat = 0.0;
  double se_local_stat = 0.0;
  /// Determinantal expectation (complex Ginibre only, NaN otherwise).
  double ginibre_expected = 0.0;
  /// Fraction of seeds with err <= (log N)^4 * envelope.
  double within_polylog = 0.0;
  std::vector<double> errs;
};

struct ScalingReport {
  EnsembleKind kind = EnsembleKind::GinibreComplex;
  Complex z0{};
  std::vector<std::uint64_t> seeds;
  /// One row per (a, N), grouped by a.
  std::vector<ScalingRow> rows;
  /// Least-squares slope of log median err against log N, per a (same order as the a list).
  std::vector<double> slopes;
};

/// Local circular law errors for several scales a; spectra are computed once per (N, seed).
ScalingReport circular_law_scaling(EnsembleKind kind, Complex z0, const std::vector<double>& as,
                                   const std::vector<Index>& Ns, const std::vector<std::uint64_t>& seeds,
                                   int threads = 0, double radius = 1.0);

struct GirkoResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double h = 0.0;
  Index nodes = 0;
  /// Nodes moved by h/7 because lambda_1(z) underflowed.
  Index perturbed_nodes = 0;
};

/// (1/N) sum F(mu_j) against (1/(4 pi N)) sum_nodes h^2 Delta F(z) sum_j log lambda_j(z) on
/// the square grid z0 + h Z^2. Requires grid_h <= 0.05.
GirkoResult girko_check(const SampleMatrix& x, const TestFunction& F, double grid_h, int threads = 0);

struct GirkoRichardson {
  GirkoResult coarse;
  GirkoResult fine;
  /// coarse.residual / fine.residual (4 for a second-order rule).
  double ratio = 0.0;
  /// (4 fine - coarse) / 3 with signed residuals.
  double extrapolated = 0.0;
  /// |extrapolated| / |coarse.residual|
  double extrapolated_over_raw = 0.0;
};

GirkoRichardson girko_richardson(const SampleMatrix& x, const TestFunction& F, double grid_h, int threads = 0);

struct RigiditySeed {
  std::uint64_t seed = 0;
  double max_bulk_norm_dev = 0.0;
  double sandwich_fraction = 0.0;
  double median_bulk_dev = 0.0;
};

struct RigidityReport {
  EnsembleSpec spec;
  Complex z{};
  Index shift = 0;
  std::vector<RigiditySeed> seeds;
  double fraction_within_envelope = 0.0;
  double sandwich_fraction = 0.0;
  double median_bulk_dev = 0.0;
};

/// Envelope for |lambda_j - gamma_j| / gamma_j with (log N)^4 in place of C phi^C.
double rigidity_envelope(Index j, Index N, Complex z);

RigidityReport rigidity_check(const EnsembleSpec& spec, Complex z, const std::vector<std::uint64_t>& seeds,
                              int threads = 0);

struct RigidityScaling {
  std::vector<RigidityReport> reports;
  /// Slope of log median bulk deviation against log N.
  double slope = 0.0;
};

RigidityScaling rigidity_scaling(EnsembleKind kind, Complex z, const std::vector<Index>& Ns,
                                 const std::vector<std::uint64_t>& seeds, int threads = 0);

struct SmallestSVReport {
  EnsembleSpec spec;
  Complex z{};
  std::vector<std::uint64_t> seeds;
  std::vector<double> lambda1;
  std::vector<double> n2_lambda1;
  std::vector<double> log_ratio;  // |log lambda_1| / (log N)^2
  double median_n2_lambda1 = 0.0;
  double fraction_log_bounded = 0.0;
};

SmallestSVReport smallest_eigenvalue_stats(const EnsembleSpec& spec, Complex z,
                                           const std::vector<std::uint64_t>& seeds, int threads = 0);

}  // namespace lcl
