// Deterministic limiting objects of the Hermitized spectrum of X - z:
// the Stieltjes transform m_c(w, z), its density rho_c, edges, classical locations,
// the log-potential, and the complex Ginibre one-point intensity.
#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "lcl/dense.hpp"

namespace lcl {

struct ShiftContext {
  Complex z{};
  double zsq = 0.0;
  double alpha = 1.0;
  /// -infinity at z = 0, where the lower edge formula degenerates.
  double lambda_minus = -std::numeric_limits<double>::infinity();
  double lambda_plus = 4.0;
  bool inside_disk = true;

  /// Left end of the support of rho_c, max(0, lambda_minus).
  double lower_edge() const { return lambda_minus > 0.0 ? lambda_minus : 0.0; }
};

ShiftContext make_shift_context(Complex z);

struct SpectralPoint {
  double E = 0.0;
  double eta = 0.0;

  Complex w() const { return {E, eta}; }
};

enum class BranchNote { UpperHalf, RealAxisLimit };
std::string_view to_string(BranchNote b);

struct McValue {
  SpectralPoint w;
  Complex z{};
  Complex mc{};
  /// |P_{w,z}(mc)| with P(m) = w m (1+m)^2 + m (1 - |z|^2) + 1.
  double residual = 0.0;
  BranchNote branch_note = BranchNote::UpperHalf;
  /// w within 1e-12 of an edge, where the cubic has a (near) multiple root.
  bool ill_conditioned = false;
};

/// P_{w,z}(m).
Complex mc_polynomial(Complex w, double zsq, Complex m);

/// Root of the cubic selected for eta > 0. Throws std::invalid_argument for eta <= 0 and
/// NumericError if no admissible root meets the residual bound 1e-10 * max(1, |w|).
McValue mc_solve(const SpectralPoint& w, Complex z);

/// m_c at any w off the real axis; for Im w < 0 this is conj(m_c(conj w)).
Complex mc(Complex w, Complex z);

/// Boundary value m_c(E + i0, z) from the closed-form cube-root expression. E < 0 is
/// rejected; E = 0 is only defined for |z| > 1 (m_c diverges there otherwise).
McValue mc_explicit_real_axis(double E, Complex z);

/// Density of the limiting spectral measure of Y_z^* Y_z. Zero outside
/// [max(0, lambda_-), lambda_+]; +infinity at x = 0 when |z| <= 1.
double rho_c(double x, Complex z);
double rho_c(double x, const ShiftContext& ctx);

/// Integral of rho_c from the lower edge to x.
double rho_c_cdf(double x, Complex z);

struct DensityCurve {
  Complex z{};
  std::vector<double> xs;
  std::vector<double> rho;
};

/// rho_c on n equispaced points of [xmin, xmax].
DensityCurve density_curve(Complex z, double xmin, double xmax, int n);

/// Trapezoid integral of a curve.
double trapezoid(const DensityCurve& curve);

struct ClassicalLocations {
  Index N = 0;
  Complex z{};
  /// gamma[j - 1] = gamma_j, j = 1..N.
  std::vector<double> gamma;
};

/// gamma_j solving CDF(gamma_j) = j / N by bisection; gamma_N = lambda_plus.
ClassicalLocations classical_locations(Index N, Complex z);

enum class Regime { Outside, OutsideLeft, NearUpperEdge, NearLowerEdge, NearZero, Bulk, NearCritical };
std::string_view to_string(Regime r);

struct RegimeRatio {
  std::string name;
  double value = 0.0;
  /// value in [1/10, 10]
  bool within = false;
};

struct RegimeReport {
  SpectralPoint w;
  Complex z{};
  Regime regime = Regime::Bulk;
  double kappa = 0.0;
  Complex mc{};
  std::vector<RegimeRatio> ratios;
  /// Set when no classification is made (near-critical |z|).
  std::string message;

  bool all_within() const;
};

/// Distance from the unit circle required by the local-law and circular-law experiments.
inline constexpr double kHypothesisTau = 0.05;

/// Throws HypothesisError unless tau <= ||z| - 1|; `what` names the caller in the message.
void require_off_circle(Complex z, const char* what);

/// Cut-off separating the asymptotic cases.
inline constexpr double kRegimeTau = 0.1;

/// Classifies w and compares m_c with the order predicted in that case. Requires eta > 0
/// and |w| <= 10.
RegimeReport regime_check(const SpectralPoint& w, Complex z);

/// Integral of log(x) rho_c(x, z) dx; equals |z|^2 - 1 inside the disk and 2 log|z| outside.
/// Requires |z| <= 3.
double log_potential(Complex z);

/// Five-point finite-difference Laplacian of log_potential.
double log_potential_laplacian(Complex z, double h = 1e-2);

/// K_N(zeta, zeta) = (N / pi) e^{-N|zeta|^2} sum_{l<N} (N|zeta|^2)^l / l!.
double ginibre_intensity(Complex zeta, Index N);

/// Integral of ginibre_intensity over the plane by radial quadrature (should be N).
double ginibre_intensity_mass(Index N);

}  // namespace lcl
