#include "lcl/limiting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <Eigen/Eigenvalues>

#include "lcl/quadrature.hpp"

namespace lcl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double residual_tolerance(Complex w) { return 1e-10 * std::max(1.0, std::abs(w)); }

bool near_edge(Complex w, const ShiftContext& c) {
  return std::abs(w - c.lambda_plus) < 1e-12 ||
         (std::isfinite(c.lambda_minus) && std::abs(w - c.lambda_minus) < 1e-12);
}

// |z|^2 (E - lambda_-), rewritten so that it stays finite at z = 0 (where it is 1/4).
double lower_edge_term(double E, const ShiftContext& c) {
  const double am3 = c.alpha - 3.0;
  return c.zsq * E - am3 * am3 * am3 * (c.alpha + 1.0) / 64.0;
}

struct CubeRootTerms {
  double b = 0.0;     // 2E^{3/2} - 9E^{1/2}(1 + 2|z|^2)
  double prod = 0.0;  // (lambda_+ - E) |z|^2 (E - lambda_-), unclamped
};

CubeRootTerms cube_root_terms(double E, const ShiftContext& c) {
  const double se = std::sqrt(E);
  return {2.0 * E * se - 9.0 * se * (1.0 + 2.0 * c.zsq), (c.lambda_plus - E) * lower_edge_term(E, c)};
}

// Real cube roots (p, q) of A_+ and A_-. Each A has a triple zero inside the support, where
// B + s cancels; since A_+ A_- = 4 (E + 3|z|^2 - 3)^3 exactly, the smaller root is recovered as
// 4^{1/3} (E + 3|z|^2 - 3) divided by the larger one.
std::pair<double, double> real_cube_roots(double E, double ap, double am, const ShiftContext& c) {
  const double pq = std::cbrt(4.0) * (E + 3.0 * c.zsq - 3.0);
  if (std::abs(ap) >= std::abs(am)) {
    const double p = std::cbrt(ap);
    return {p, p == 0.0 ? 0.0 : pq / p};
  }
  const double q = std::cbrt(am);
  return {q == 0.0 ? 0.0 : pq / q, q};
}

// 2^{1/3} * 3 * sqrt(E)
double explicit_scale(double E) { return std::cbrt(2.0) * 3.0 * std::sqrt(E); }

// Admissible roots have Im m > 0 and Im(w m) > 0; near the real axis outside the support a
// second root can have small positive Im m, so the score uses both.
double root_score(Complex w, Complex m) { return std::min(m.imag(), (w * m).imag() / std::abs(w)); }

Complex newton_polish(Complex w, double zsq, Complex m) {
  for (int it = 0; it < 3; ++it) {
    const Complex p = mc_polynomial(w, zsq, m);
    const Complex dp = w * (1.0 + m) * (1.0 + 3.0 * m) + (1.0 - zsq);
    if (std::abs(dp) == 0.0) break;
    const Complex next = m - p / dp;
    if (!(std::abs(mc_polynomial(w, zsq, next)) < std::abs(p))) break;
    m = next;
  }
  return m;
}

std::vector<Complex> cubic_roots(Complex w, double zsq) {
  if (zsq == 0.0) {
    // (1 + m)(w m^2 + w m + 1); m = -1 never has positive imaginary part.
    const Complex disc = std::sqrt(w * w - 4.0 * w);
    const Complex q = -0.5 * (std::real(std::conj(w) * disc) >= 0.0 ? w + disc : w - disc);
    return {q / w, 1.0 / q, Complex(-1.0, 0.0)};
  }
  Eigen::Matrix3cd companion = Eigen::Matrix3cd::Zero();
  companion(0, 0) = -2.0;
  companion(0, 1) = -(w + 1.0 - zsq) / w;
  companion(0, 2) = -1.0 / w;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(companion, false);
  if (es.info() != Eigen::Success) throw NumericError("companion eigensolve failed");
  return {es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
}

// CDF of rho_c with x = lo + t^2 on the left half of the support and x = hi - t^2 on the right.
class DensityCdf {
 public:
  explicit DensityCdf(Complex z) : ctx_(make_shift_context(z)) {
    lo_ = ctx_.lower_edge();
    hi_ = ctx_.lambda_plus;
    mid_ = 0.5 * (lo_ + hi_);
    left_mass_ = left(mid_);
    right_mass_ = right(mid_);
    total_ = left_mass_ + right_mass_;
  }

  double operator()(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return total_;
    if (x <= mid_) return left(x);
    return left_mass_ + (right_mass_ - right(x));
  }

  double total() const { return total_; }
  const ShiftContext& context() const { return ctx_; }

 private:
  double left(double x) const {
    return integrate([this](double t) { return 2.0 * t * rho_c(lo_ + t * t, ctx_); }, 0.0,
                     std::sqrt(x - lo_))
        .value;
  }
  // Mass of [x, hi].
  double right(double x) const {
    return integrate([this](double t) { return 2.0 * t * rho_c(hi_ - t * t, ctx_); }, 0.0,
                     std::sqrt(hi_ - x))
        .value;
  }

  ShiftContext ctx_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double mid_ = 0.0;
  double left_mass_ = 0.0;
  double right_mass_ = 0.0;
  double total_ = 0.0;
};

}  // namespace

ShiftContext make_shift_context(Complex z) {
  ShiftContext c;
  c.z = z;
  c.zsq = std::norm(z);
  c.alpha = std::sqrt(1.0 + 8.0 * c.zsq);
  const double a = c.alpha;
  c.lambda_plus = (a + 3.0) * (a + 3.0) * (a + 3.0) / (8.0 * (a + 1.0));
  c.lambda_minus = a == 1.0 ? -kInf : (a - 3.0) * (a - 3.0) * (a - 3.0) / (8.0 * (a - 1.0));
  c.inside_disk = c.zsq < 1.0;
  return c;
}

std::string_view to_string(BranchNote b) {
  return b == BranchNote::UpperHalf ? "upper-half" : "real-axis-limit";
}

Complex mc_polynomial(Complex w, double zsq, Complex m) {
  return w * m * (1.0 + m) * (1.0 + m) + m * (1.0 - zsq) + 1.0;
}

McValue mc_solve(const SpectralPoint& sp, Complex z) {
  if (!(sp.eta > 0.0) || !std::isfinite(sp.E) || !std::isfinite(sp.eta))
    throw std::invalid_argument("mc_solve needs finite E and eta > 0");
  const Complex w = sp.w();
  const ShiftContext ctx = make_shift_context(z);
  const auto roots = cubic_roots(w, ctx.zsq);
  Complex best = roots[0];
  for (const Complex& r : roots)
    if (root_score(w, r) > root_score(w, best)) best = r;
  best = newton_polish(w, ctx.zsq, best);

  McValue out{sp, z, best, std::abs(mc_polynomial(w, ctx.zsq, best)), BranchNote::UpperHalf,
              near_edge(w, ctx)};
  if (!(best.imag() > 0.0) || !(out.residual <= residual_tolerance(w))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "mc_solve: no admissible root at w = " << w << ", z = " << z << " (best " << best
        << ", residual " << out.residual << ")";
    throw NumericError(msg.str());
  }
  return out;
}

Complex mc(Complex w, Complex z) {
  if (w.imag() > 0.0) return mc_solve({w.real(), w.imag()}, z).mc;
  if (w.imag() < 0.0) return std::conj(mc_solve({w.real(), -w.imag()}, z).mc);
  throw std::invalid_argument("mc: w must be off the real axis");
}

McValue mc_explicit_real_axis(double E, Complex z) {
  if (!(E >= 0.0) || !std::isfinite(E)) throw std::invalid_argument("mc_explicit_real_axis needs E >= 0");
  const ShiftContext c = make_shift_context(z);
  Complex m;
  if (E == 0.0) {
    if (c.zsq <= 1.0) throw std::invalid_argument("m_c(0, z) diverges for |z| <= 1");
    m = 1.0 / (c.zsq - 1.0);
  } else {
    const auto [b, prod] = cube_root_terms(E, c);
    const double k = explicit_scale(E);
    const bool in_support = E >= c.lower_edge() && E <= c.lambda_plus;
    const Complex e_m = std::polar(1.0, -std::numbers::pi / 3.0);
    const Complex e_p = std::polar(1.0, std::numbers::pi / 3.0);
    if (in_support) {
      // Round-off can push prod slightly negative at the edges.
      const double s = 6.0 * std::sqrt(3.0) * std::sqrt(std::max(prod, 0.0));
      const auto [p, q] = real_cube_roots(E, b + s, b - s, c);
      m = -2.0 / 3.0 - (e_m * p + e_p * q) / k;
    } else {
      // A_+ and A_- are complex conjugates here; the real root is picked out by the
      // principal cube root of A_+ rotated onto the matching branch.
      const Complex ap(b, 6.0 * std::sqrt(3.0) * std::sqrt(-prod));
      const Complex cr = std::pow(ap, 1.0 / 3.0);
      if (E > c.lambda_plus)
        m = -2.0 / 3.0 + 2.0 * cr.real() / k;
      else
        m = -2.0 / 3.0 - 2.0 * (e_p * cr).real() / k;
    }
  }
  return {{E, 0.0}, z, m, std::abs(mc_polynomial(Complex(E, 0.0), c.zsq, m)), BranchNote::RealAxisLimit,
          near_edge(Complex(E, 0.0), c)};
}

double rho_c(double x, const ShiftContext& c) {
  if (!(x >= c.lower_edge()) || x >= c.lambda_plus) return 0.0;
  if (x == 0.0) return kInf;
  const auto [b, prod] = cube_root_terms(x, c);
  const double s = 6.0 * std::sqrt(3.0) * std::sqrt(std::max(prod, 0.0));
  const double ap = b + s;
  const double am = b - s;
  const auto [p, q] = real_cube_roots(x, ap, am, c);
  // p - q loses all digits near the edges where A_+ ~ A_-; use (A_+ - A_-)/(p^2 + pq + q^2).
  const double diff = ap * am > 0.0 ? 2.0 * s / (p * p + p * q + q * q) : p - q;
  return diff / (std::cbrt(16.0) * std::sqrt(3.0) * std::numbers::pi * std::sqrt(x));
}

double rho_c(double x, Complex z) { return rho_c(x, make_shift_context(z)); }

double rho_c_cdf(double x, Complex z) { return DensityCdf(z)(x); }

DensityCurve density_curve(Complex z, double xmin, double xmax, int n) {
  if (n < 2 || !(xmax > xmin)) throw std::invalid_argument("density_curve needs n >= 2 and xmax > xmin");
  const ShiftContext c = make_shift_context(z);
  DensityCurve curve{z, std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    curve.xs[i] = i + 1 == n ? xmax : xmin + (xmax - xmin) * i / (n - 1);
    curve.rho[i] = rho_c(curve.xs[i], c);
  }
  return curve;
}

double trapezoid(const DensityCurve& curve) {
  double s = 0.0;
  for (std::size_t i = 1; i < curve.xs.size(); ++i)
    s += 0.5 * (curve.rho[i] + curve.rho[i - 1]) * (curve.xs[i] - curve.xs[i - 1]);
  return s;
}

ClassicalLocations classical_locations(Index N, Complex z) {
  if (N < 2) throw std::invalid_argument("classical_locations needs N >= 2");
  const DensityCdf cdf(z);
  const ShiftContext& c = cdf.context();
  if (std::abs(cdf.total() - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "rho_c mass " << cdf.total() << " misses 1 by more than 1e-8 at z = " << z;
    throw NumericError(msg.str());
  }
  ClassicalLocations out{N, z, std::vector<double>(N)};
  const double width = 1e-12 * c.lambda_plus;
  double lo = c.lower_edge();
  for (Index j = 1; j < N; ++j) {
    const double target = static_cast<double>(j) / static_cast<double>(N);
    double a = lo;
    double b = c.lambda_plus;
    while (b - a > width) {
      const double mid = 0.5 * (a + b);
      (cdf(mid) < target ? a : b) = mid;
    }
    out.gamma[j - 1] = 0.5 * (a + b);
    lo = a;
  }
  out.gamma[N - 1] = c.lambda_plus;
  return out;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Outside: return "outside";
    case Regime::OutsideLeft: return "outside-left";
    case Regime::NearUpperEdge: return "near-lambda-plus";
    case Regime::NearLowerEdge: return "near-lambda-minus";
    case Regime::NearZero: return "near-zero";
    case Regime::Bulk: return "bulk";
    case Regime::NearCritical: return "near-critical";
  }
  return "unknown";
}

bool RegimeReport::all_within() const {
  return std::all_of(ratios.begin(), ratios.end(), [](const RegimeRatio& r) { return r.within; });
}

RegimeReport regime_check(const SpectralPoint& sp, Complex z) {
  const Complex w = sp.w();
  if (!(sp.eta > 0.0) || std::abs(w) > 10.0) throw std::invalid_argument("regime_check needs eta > 0 and |w| <= 10");
  const ShiftContext c = make_shift_context(z);
  RegimeReport rep;
  rep.w = sp;
  rep.z = z;
  const double absz = std::sqrt(c.zsq);
  if (std::abs(absz - 1.0) < 1e-3) {
    rep.regime = Regime::NearCritical;
    rep.message = "near-critical, theory outside Theorem 2.2 hypotheses (||z|-1| < 1e-3)";
    return rep;
  }
  const double E = sp.E;
  const double eta = sp.eta;
  const double tau = kRegimeTau;
  const double dplus = std::abs(E - c.lambda_plus);
  const double dminus = c.inside_disk ? kInf : std::abs(E - c.lambda_minus);
  rep.kappa = std::min(dplus, dminus);
  rep.mc = mc_solve(sp, z).mc;
  const Complex m = rep.mc;

  if (c.inside_disk) {
    if (std::abs(w) <= tau)
      rep.regime = Regime::NearZero;
    else if (std::abs(w - c.lambda_plus) <= tau)
      rep.regime = Regime::NearUpperEdge;
    else if (E >= c.lambda_plus)
      rep.regime = Regime::Outside;
    else
      rep.regime = Regime::Bulk;
  } else {
    if (rep.kappa + eta <= tau)
      rep.regime = dplus <= dminus ? Regime::NearUpperEdge : Regime::NearLowerEdge;
    else if (E >= c.lambda_plus)
      rep.regime = Regime::Outside;
    else if (E <= c.lambda_minus)
      rep.regime = Regime::OutsideLeft;
    else
      rep.regime = Regime::Bulk;
  }

  auto add = [&rep](std::string name, double value) {
    rep.ratios.push_back({std::move(name), value, value >= 0.1 && value <= 10.0});
  };
  const bool in_support = E >= c.lower_edge() && E <= c.lambda_plus;
  switch (rep.regime) {
    case Regime::Outside:
    case Regime::OutsideLeft:
      add("Im mc / eta", m.imag() / eta);
      add("|Re mc|", std::abs(m.real()));
      break;
    case Regime::NearUpperEdge:
    case Regime::NearLowerEdge: {
      const double order = (!in_support && rep.kappa >= eta) ? eta / std::sqrt(rep.kappa) : std::sqrt(rep.kappa + eta);
      add("Im mc / edge order", m.imag() / order);
      break;
    }
    case Regime::NearZero:
      add("Im mc |w|^{1/2} / (1-|z|^2)", m.imag() * std::sqrt(std::abs(w)) / (1.0 - c.zsq));
      break;
    case Regime::Bulk:
      add("Im mc", m.imag());
      add("|mc|", std::abs(m));
      break;
    case Regime::NearCritical: break;
  }
  // |m_c + 1| ~ |m_c| ~ |w|^{-1/2}, where applicable (|z| > 1 only for E >= lambda_- / 5).
  if (c.inside_disk || E >= c.lambda_minus / 5.0) {
    add("|mc| |w|^{1/2}", std::abs(m) * std::sqrt(std::abs(w)));
    add("|mc + 1| / |mc|", std::abs(m + 1.0) / std::abs(m));
  }
  return rep;
}

double log_potential(Complex z) {
  if (!(std::abs(z) <= 3.0)) throw std::invalid_argument("log_potential needs |z| <= 3");
  const ShiftContext c = make_shift_context(z);
  const double lo = c.lower_edge();
  const double hi = c.lambda_plus;
  const double mid = 0.5 * (lo + hi);
  auto f = [&c](double x) { return x > 0.0 ? std::log(x) * rho_c(x, c) : 0.0; };
  // After x = lo + t^2 the integrand still has a log t singularity when lo = 0.
  const double left =
      integrate_singular([&](double t) { return 2.0 * t * f(lo + t * t); }, 0.0, std::sqrt(mid - lo), 1e-14, 1e-13)
          .value;
  const double right =
      integrate([&](double t) { return 2.0 * t * f(hi - t * t); }, 0.0, std::sqrt(hi - mid), 1e-14, 1e-13).value;
  return left + right;
}

double log_potential_laplacian(Complex z, double h) {
  const double centre = log_potential(z);
  const double sum = log_potential(z + h) + log_potential(z - h) + log_potential(z + Complex(0.0, h)) +
                     log_potential(z - Complex(0.0, h));
  return (sum - 4.0 * centre) / (h * h);
}

double ginibre_intensity(Complex zeta, Index N) {
  if (N < 1) throw std::invalid_argument("ginibre_intensity needs N >= 1");
  const double n = static_cast<double>(N);
  const double x = n * std::norm(zeta);
  const double front = n / std::numbers::pi;
  if (x == 0.0) return front;
  // log of e^{-x} x^l / l!, summed stably around its largest term.
  const double lx = std::log(x);
  auto term = [&](Index l) { return -x + static_cast<double>(l) * lx - std::lgamma(static_cast<double>(l) + 1.0); };
  const Index lmax = std::min<Index>(N - 1, static_cast<Index>(std::floor(x)));
  const double peak = term(lmax);
  double s = 0.0;
  for (Index l = 0; l < N; ++l) s += std::exp(term(l) - peak);
  return front * std::exp(peak) * s;
}

double ginibre_intensity_mass(Index N) {
  const double n = static_cast<double>(N);
  // Beyond |zeta| = 1 the intensity decays like exp(-N (|zeta|^2 - 1 - log|zeta|^2)); past
  // 1 + 12/sqrt(N) it is below e^{-100} of its peak.
  const double w = 12.0 / std::sqrt(n);
  const std::vector<double> cuts{0.0, std::max(0.0, 1.0 - w), 1.0, 1.0 + w};
  double total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i] <= cuts[i - 1]) continue;
    total += integrate([N](double r) { return 2.0 * std::numbers::pi * r * ginibre_intensity(r, N); },
                       cuts[i - 1], cuts[i], 1e-12 * n, 1e-12)
                 .value;
  }
  return total;
}

void require_off_circle(Complex z, const char* what) {
  const double gap = std::abs(std::abs(z) - 1.0);
  if (gap < kHypothesisTau) {
    std::ostringstream msg;
    msg << what << ": hypothesis τ ≤ ||z_0|−1| violated (τ = " << kHypothesisTau
        << ", ||z_0|−1| = " << gap << ")";
    throw HypothesisError(msg.str());
  }
}

}  // namespace lcl
