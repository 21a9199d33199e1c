#include "lcl/circlaw.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "lcl/parallel.hpp"
#include "lcl/quadrature.hpp"
#include "lcl/resolvent.hpp"
#include "lcl/stats.hpp"

extern "C" void openblas_set_num_threads(int num_threads);

namespace lcl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Parallelism lives in our own pool; a single BLAS thread per call also keeps geev output
// independent of BLAS scheduling.
void single_threaded_blas() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

// Angular measure of {theta : |z0 + r e^{i theta}| < 1}, d = |z0|.
double arc_inside_unit_disk(double r, double d) {
  if (r == 0.0) return d < 1.0 ? 2.0 * kPi : 0.0;
  if (d == 0.0) return r < 1.0 ? 2.0 * kPi : 0.0;
  const double c = (1.0 - d * d - r * r) / (2.0 * d * r);
  if (c >= 1.0) return 2.0 * kPi;
  if (c <= -1.0) return 0.0;
  return 2.0 * (kPi - std::acos(c));
}

double bilinear(const Eigen::MatrixXd& v, double half_width, Complex xi) {
  const Index n = v.rows();
  const double dx = 2.0 * half_width / static_cast<double>(n - 1);
  const double u = (xi.real() + half_width) / dx;
  const double t = (xi.imag() + half_width) / dx;
  if (!(u >= 0.0) || !(t >= 0.0) || u > n - 1 || t > n - 1) return 0.0;
  const Index i = std::min<Index>(static_cast<Index>(u), n - 2);
  const Index j = std::min<Index>(static_cast<Index>(t), n - 2);
  const double fu = u - i;
  const double ft = t - j;
  return (1 - fu) * (1 - ft) * v(i, j) + fu * (1 - ft) * v(i + 1, j) + (1 - fu) * ft * v(i, j + 1) +
         fu * ft * v(i + 1, j + 1);
}

// Periodic trapezoid rule in theta, doubled until it settles; spectrally accurate for smooth g.
template <typename G>
double periodic_mean(G&& g, double rel_tol = 1e-13) {
  int m = 16;
  auto rule = [&](int k) {
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += g(2.0 * kPi * i / k);
    return s / k;
  };
  double prev = rule(m);
  for (int it = 0; it < 12; ++it) {
    m *= 2;
    const double cur = rule(m);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + 1e-300) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

ComplexSpectrum nonhermitian_spectrum(const SampleMatrix& x) {
  if (!x.all_finite()) throw std::invalid_argument("nonhermitian_spectrum: matrix has non-finite entries");
  single_threaded_blas();
  const lapack_int n = static_cast<lapack_int>(x.N);
  ComplexSpectrum out{x.N, std::vector<Complex>(x.N)};
  lapack_int info = 0;
  if (x.is_real) {
    Eigen::MatrixXd a = x.real_entries();
    std::vector<double> wr(n), wi(n);
    info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(), wi.data(), nullptr, 1, nullptr, 1);
    for (lapack_int k = 0; k < n; ++k) out.mu[k] = {wr[k], wi[k]};
  } else {
    MatrixXc a = x.entries;
    info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, out.mu.data(), nullptr, 1, nullptr, 1);
  }
  if (info != 0) {
    std::ostringstream msg;
    msg << "nonhermitian_spectrum: geev failed (info " << info << ")";
    throw NumericError(msg.str());
  }
  return out;
}

SpectrumCheck check_spectrum(const SampleMatrix& x, const ComplexSpectrum& s) {
  Complex sum{};
  double sq = 0.0;
  for (const Complex& m : s.mu) {
    sum += m;
    sq += std::norm(m);
  }
  const Complex tr = x.entries.trace();
  return {std::abs(sum - tr) / std::max(1.0, std::abs(tr)), x.entries.squaredNorm() - sq};
}

double bump(double r) {
  if (!(r < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

double bump_laplacian(double r) {
  if (!(r < 1.0)) return 0.0;
  const double u = 1.0 - r * r;
  const double r2 = r * r;
  return bump(r) * (-4.0 / (u * u) + 4.0 * r2 / (u * u * u * u) - 8.0 * r2 / (u * u * u));
}

double bump_laplacian_l1() {
  static const double value = [] {
    // Delta b changes sign once, where u = 1 - r^2 solves u^2 - 3u + 1 = 0.
    const double r0 = std::sqrt((std::sqrt(5.0) - 1.0) / 2.0);
    auto g = [](double r) { return std::abs(bump_laplacian(r)) * r; };
    return 2.0 * kPi * (integrate(g, 0.0, r0).value + integrate(g, r0, 1.0).value);
  }();
  return value;
}

TestFunction TestFunction::radial_bump(Complex z0, double a, double radius) {
  TestFunction tf;
  tf.kind = TestFunctionKind::RadialBump;
  tf.z0 = z0;
  tf.a = a;
  tf.support_radius = radius;
  tf.laplacian_l1 = bump_laplacian_l1();
  tf.validate();
  return tf;
}

TestFunction TestFunction::custom_grid(Complex z0, double a, const Eigen::MatrixXd& values, double half_width) {
  TestFunction tf;
  tf.kind = TestFunctionKind::CustomGrid;
  tf.z0 = z0;
  tf.a = a;
  tf.grid_values = values;
  tf.half_width = half_width;
  tf.support_radius = half_width * std::numbers::sqrt2;
  tf.validate();
  const Index n = values.rows();
  const double dx = 2.0 * half_width / static_cast<double>(n - 1);
  tf.grid_laplacian = Eigen::MatrixXd::Zero(n, n);
  double l1 = 0.0;
  for (Index i = 1; i + 1 < n; ++i) {
    for (Index j = 1; j + 1 < n; ++j) {
      const double lap =
          (values(i + 1, j) + values(i - 1, j) + values(i, j + 1) + values(i, j - 1) - 4.0 * values(i, j)) / (dx * dx);
      tf.grid_laplacian(i, j) = lap;
      l1 += std::abs(lap) * dx * dx;
    }
  }
  tf.laplacian_l1 = l1;
  return tf;
}

void TestFunction::validate() const {
  if (!(a >= 0.0 && a <= 0.5)) throw std::invalid_argument("test function scale a must lie in [0, 1/2]");
  if (kind == TestFunctionKind::RadialBump) {
    if (!(support_radius > 0.0)) throw std::invalid_argument("radial bump needs a positive radius");
    return;
  }
  const Index n = grid_values.rows();
  if (n < 5 || grid_values.cols() != n) throw std::invalid_argument("custom grid must be square with n >= 5");
  if (!(half_width > 0.0)) throw std::invalid_argument("custom grid needs a positive half width");
  if (!grid_values.allFinite()) throw std::invalid_argument("custom grid values must be finite");
  const double border = std::max({grid_values.row(0).cwiseAbs().maxCoeff(), grid_values.row(n - 1).cwiseAbs().maxCoeff(),
                                  grid_values.col(0).cwiseAbs().maxCoeff(), grid_values.col(n - 1).cwiseAbs().maxCoeff()});
  if (border != 0.0) throw std::invalid_argument("custom grid values must vanish on the border (compact support)");
}

double TestFunction::f(Complex xi) const {
  if (kind == TestFunctionKind::RadialBump) return bump(std::abs(xi) / support_radius);
  return bilinear(grid_values, half_width, xi);
}

double TestFunction::laplacian(Complex xi) const {
  if (kind == TestFunctionKind::RadialBump)
    return bump_laplacian(std::abs(xi) / support_radius) / (support_radius * support_radius);
  return bilinear(grid_laplacian, half_width, xi);
}

double TestFunction::scaled(Complex z, Index N) const {
  const double s = std::pow(static_cast<double>(N), a);
  return s * s * f(s * (z - z0));
}

double TestFunction::scaled_laplacian(Complex z, Index N) const {
  const double s = std::pow(static_cast<double>(N), a);
  return s * s * s * s * laplacian(s * (z - z0));
}

double TestFunction::scaled_support_radius(Index N) const {
  return support_radius * std::pow(static_cast<double>(N), -a);
}

double local_stat(const ComplexSpectrum& s, const TestFunction& tf) {
  double sum = 0.0;
  for (const Complex& m : s.mu) sum += tf.scaled(m, s.N);
  return sum / static_cast<double>(s.N);
}

double disk_integral(const TestFunction& tf, Index N) {
  tf.validate();
  const double scale = std::pow(static_cast<double>(N), -tf.a);  // xi -> z distance factor
  const double d = std::abs(tf.z0);
  const double R = tf.support_radius;
  // The arc measure has square-root kinks where the circle |xi| = s touches the unit circle.
  std::vector<double> cuts{0.0};
  for (double k : {std::abs(1.0 - d) / scale, (1.0 + d) / scale})
    if (k > 0.0 && k < R) cuts.push_back(k);
  cuts.push_back(R);
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  if (tf.kind == TestFunctionKind::RadialBump) {
    auto g = [&](double s) { return bump(s / R) * arc_inside_unit_disk(s * scale, d) * s; };
    for (std::size_t i = 1; i < cuts.size(); ++i) total += integrate_singular(g, cuts[i - 1], cuts[i], 1e-14, 1e-12).value;
    return total / kPi;
  }
  // Custom grid: the bilinear interpolant integrates exactly on cells inside the disk (area times the corner
  // mean); cells cut by the unit circle use subdivided 3-point Gauss with the indicator.
  const Eigen::MatrixXd& v = tf.grid_values;
  const Index n = v.rows();
  const double L = tf.half_width;
  const double dx = 2.0 * L / static_cast<double>(n - 1);
  auto coord = [&](Index i) { return -L + dx * static_cast<double>(i); };
  auto to_z = [&](double x, double y) { return tf.z0 + scale * Complex(x, y); };
  constexpr int kSub = 16;
  const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  for (Index i = 0; i + 1 < n; ++i) {
    for (Index j = 0; j + 1 < n; ++j) {
      const double c00 = v(i, j), c10 = v(i + 1, j), c01 = v(i, j + 1), c11 = v(i + 1, j + 1);
      if (c00 == 0.0 && c10 == 0.0 && c01 == 0.0 && c11 == 0.0) continue;
      const Complex lo = to_z(coord(i), coord(j)), hi = to_z(coord(i + 1), coord(j + 1));
      const double nx = std::clamp(0.0, lo.real(), hi.real()), ny = std::clamp(0.0, lo.imag(), hi.imag());
      if (std::hypot(nx, ny) >= 1.0) continue;
      const double fx = std::max(std::abs(lo.real()), std::abs(hi.real()));
      const double fy = std::max(std::abs(lo.imag()), std::abs(hi.imag()));
      if (std::hypot(fx, fy) <= 1.0) {
        total += 0.25 * (c00 + c10 + c01 + c11) * dx * dx;
        continue;
      }
      const double sub = 1.0 / kSub;
      double cell = 0.0;
      for (int p = 0; p < kSub; ++p)
        for (int q = 0; q < kSub; ++q)
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
              const double u = (p + 0.5 * (1.0 + gx[a])) * sub, w = (q + 0.5 * (1.0 + gx[b])) * sub;
              if (std::abs(to_z(coord(i) + u * dx, coord(j) + w * dx)) >= 1.0) continue;
              const double val = (1 - u) * (1 - w) * c00 + u * (1 - w) * c10 + (1 - u) * w * c01 + u * w * c11;
              cell += gw[a] * gw[b] * 0.25 * sub * sub * val;
            }
      total += cell * dx * dx;
    }
  }
  return total / kPi;
}

double ginibre_expected_local_stat(const TestFunction& tf, Index N) {
  tf.validate();
  const double scale = std::pow(static_cast<double>(N), -tf.a);
  auto ring = [&](double s) {
    if (s == 0.0) return 0.0;
    return 2.0 * kPi * s *
           periodic_mean([&](double th) {
             const Complex xi = std::polar(s, th);
             return tf.f(xi) * ginibre_intensity(tf.z0 + scale * xi, N);
           });
  };
  const double R = tf.support_radius;
  return integrate(ring, 0.0, R, 1e-12, 1e-11).value / static_cast<double>(N);
}

ScalingReport circular_law_scaling(EnsembleKind kind, Complex z0, const std::vector<double>& as,
                                   const std::vector<Index>& Ns, const std::vector<std::uint64_t>& seeds, int threads,
                                   double radius) {
  require_off_circle(z0, "local circular law");
  if (as.empty() || Ns.empty() || seeds.empty()) throw std::invalid_argument("circular_law_scaling needs a, N and seed lists");
  std::vector<TestFunction> tfs;
  for (double a : as) tfs.push_back(TestFunction::radial_bump(z0, a, radius));

  ScalingReport rep;
  rep.kind = kind;
  rep.z0 = z0;
  rep.seeds = seeds;
  const std::size_t A = as.size();
  const std::size_t S = seeds.size();
  // stats[n][s * A + a]
  std::vector<std::vector<double>> stats(Ns.size(), std::vector<double>(S * A));
  for (std::size_t n = 0; n < Ns.size(); ++n) {
    parallel_for(static_cast<std::ptrdiff_t>(S), threads, [&](std::ptrdiff_t s) {
      const SampleMatrix x = sample_matrix({kind, Ns[n], seeds[s]});
      const ComplexSpectrum spec = nonhermitian_spectrum(x);
      for (std::size_t a = 0; a < A; ++a) stats[n][s * A + a] = local_stat(spec, tfs[a]);
    });
  }

  for (std::size_t a = 0; a < A; ++a) {
    std::vector<double> xs;
    std::vector<double> meds;
    const std::size_t first = rep.rows.size();
    for (std::size_t n = 0; n < Ns.size(); ++n) {
      const Index N = Ns[n];
      ScalingRow row;
      row.N = N;
      row.a = as[a];
      row.rhs = disk_integral(tfs[a], N);
      row.envelope = std::pow(static_cast<double>(N), -1.0 + 2.0 * as[a]) * tfs[a].laplacian_l1;
      std::vector<double> vals(S);
      const double logn4 = std::pow(std::log(static_cast<double>(N)), 4);
      std::size_t within = 0;
      for (std::size_t s = 0; s < S; ++s) {
        vals[s] = stats[n][s * A + a];
        row.errs.push_back(std::abs(vals[s] - row.rhs));
        if (row.errs.back() <= logn4 * row.envelope) ++within;
      }
      row.median_err = median(row.errs);
      row.mean_local_stat = mean(vals);
      row.se_local_stat = standard_error(vals);
      row.ginibre_expected = kind == EnsembleKind::GinibreComplex ? ginibre_expected_local_stat(tfs[a], N) : kNaN;
      row.within_polylog = static_cast<double>(within) / static_cast<double>(S);
      xs.push_back(static_cast<double>(N));
      meds.push_back(row.median_err);
      rep.rows.push_back(std::move(row));
    }
    const double slope = Ns.size() >= 2 ? loglog_slope(xs, meds) : kNaN;
    rep.slopes.push_back(slope);
    for (std::size_t i = first; i < rep.rows.size(); ++i) rep.rows[i].slope = slope;
  }
  return rep;
}

GirkoResult girko_check(const SampleMatrix& x, const TestFunction& F, double grid_h, int threads) {
  if (!(grid_h > 0.0) || grid_h > 0.05) throw std::invalid_argument("girko_check needs 0 < grid_h <= 0.05");
  F.validate();
  const Index N = x.N;
  const ComplexSpectrum spec = nonhermitian_spectrum(x);
  GirkoResult res;
  res.h = grid_h;
  res.lhs = local_stat(spec, F);

  const Index K = static_cast<Index>(std::ceil(F.scaled_support_radius(N) / grid_h));
  std::vector<Complex> nodes;
  for (Index i = -K; i <= K; ++i)
    for (Index j = -K; j <= K; ++j) {
      const Complex z = F.z0 + Complex(grid_h * static_cast<double>(i), grid_h * static_cast<double>(j));
      if (F.scaled_laplacian(z, N) != 0.0) nodes.push_back(z);
    }
  res.nodes = static_cast<Index>(nodes.size());

  std::vector<double> contrib(nodes.size());
  std::vector<char> moved(nodes.size(), 0);
  parallel_for(static_cast<std::ptrdiff_t>(nodes.size()), threads, [&](std::ptrdiff_t k) {
    Complex z = nodes[k];
    for (int attempt = 0; attempt < 8; ++attempt) {
      const Eigen::VectorXd lam = squared_singular_values(shifted(x.entries, z));
      if (lam(0) >= 1e-300) {
        contrib[k] = F.scaled_laplacian(z, N) * lam.array().log().sum();
        return;
      }
      z += grid_h / 7.0;
      moved[k] = 1;
    }
    throw NumericError("girko_check: log-determinant underflow persists after perturbing the node");
  });
  double sum = 0.0;
  for (double c : contrib) sum += c;
  for (char m : moved) res.perturbed_nodes += m;
  res.rhs = sum * grid_h * grid_h / (4.0 * kPi * static_cast<double>(N));
  res.residual = std::abs(res.lhs - res.rhs);
  return res;
}

GirkoRichardson girko_richardson(const SampleMatrix& x, const TestFunction& F, double grid_h, int threads) {
  GirkoRichardson r;
  r.coarse = girko_check(x, F, grid_h, threads);
  r.fine = girko_check(x, F, grid_h / 2.0, threads);
  const double ec = r.coarse.lhs - r.coarse.rhs;
  const double ef = r.fine.lhs - r.fine.rhs;
  r.ratio = std::abs(ec) / std::abs(ef);
  r.extrapolated = (4.0 * ef - ec) / 3.0;
  r.extrapolated_over_raw = std::abs(r.extrapolated) / std::abs(ec);
  return r;
}

double rigidity_envelope(Index j, Index N, Complex z) {
  const double n = static_cast<double>(N);
  const double frac = static_cast<double>(j) / n;
  const double polylog = std::pow(std::log(n), 4);
  if (std::abs(z) < 1.0) return polylog / (static_cast<double>(j) * std::cbrt(1.0 - frac));
  return polylog / (std::cbrt(std::min(frac, 1.0 - frac)) * n);
}

RigidityReport rigidity_check(const EnsembleSpec& spec, Complex z, const std::vector<std::uint64_t>& seeds, int threads) {
  spec.validate();
  require_off_circle(z, "rigidity estimate");
  if (seeds.empty()) throw std::invalid_argument("rigidity_check needs at least one seed");
  const Index N = spec.N;
  const ClassicalLocations cl = classical_locations(N, z);
  const double lower = make_shift_context(z).lower_edge();
  const double logn = std::log(static_cast<double>(N));

  RigidityReport rep;
  rep.spec = spec;
  rep.z = z;
  rep.shift = static_cast<Index>(std::floor(logn * logn));
  const Index jlo = static_cast<Index>(std::ceil(0.1 * static_cast<double>(N)));
  const Index jhi = static_cast<Index>(std::floor(0.9 * static_cast<double>(N)));
  auto gamma = [&](Index j) { return j < 1 ? lower : cl.gamma[std::min(j, N) - 1]; };

  rep.seeds.resize(seeds.size());
  std::vector<Index> inside(seeds.size());
  parallel_for(static_cast<std::ptrdiff_t>(seeds.size()), threads, [&](std::ptrdiff_t s) {
    EnsembleSpec one = spec;
    one.seed = seeds[s];
    const HermitizedSpectrum hs = hermitize(sample_matrix(one), z, false);
    RigiditySeed out;
    out.seed = seeds[s];
    std::vector<double> devs;
    Index ok = 0;
    for (Index j = jlo; j <= jhi; ++j) {
      const double lam = hs.eigenvalues(j - 1);
      const double g = gamma(j);
      const double dev = std::abs(lam - g) / g;
      devs.push_back(dev);
      out.max_bulk_norm_dev = std::max(out.max_bulk_norm_dev, dev / rigidity_envelope(j, N, z));
      if (gamma(j - rep.shift) <= lam && lam <= gamma(j + rep.shift)) ++ok;
    }
    out.median_bulk_dev = median(devs);
    out.sandwich_fraction = static_cast<double>(ok) / static_cast<double>(jhi - jlo + 1);
    inside[s] = ok;
    rep.seeds[s] = out;
  });

  std::size_t within = 0;
  Index ok_total = 0;
  std::vector<double> meds;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    if (rep.seeds[s].max_bulk_norm_dev <= 1.0) ++within;
    ok_total += inside[s];
    meds.push_back(rep.seeds[s].median_bulk_dev);
  }
  rep.fraction_within_envelope = static_cast<double>(within) / static_cast<double>(seeds.size());
  rep.sandwich_fraction =
      static_cast<double>(ok_total) / static_cast<double>((jhi - jlo + 1) * static_cast<Index>(seeds.size()));
  rep.median_bulk_dev = median(meds);
  return rep;
}

RigidityScaling rigidity_scaling(EnsembleKind kind, Complex z, const std::vector<Index>& Ns,
                                 const std::vector<std::uint64_t>& seeds, int threads) {
  RigidityScaling out;
  std::vector<double> xs;
  std::vector<double> ys;
  for (Index N : Ns) {
    out.reports.push_back(rigidity_check({kind, N, 0}, z, seeds, threads));
    xs.push_back(static_cast<double>(N));
    ys.push_back(out.reports.back().median_bulk_dev);
  }
  out.slope = Ns.size() >= 2 ? loglog_slope(xs, ys) : kNaN;
  return out;
}

SmallestSVReport smallest_eigenvalue_stats(const EnsembleSpec& spec, Complex z, const std::vector<std::uint64_t>& seeds,
                                           int threads) {
  spec.validate();
  if (seeds.empty()) throw std::invalid_argument("smallest_eigenvalue_stats needs at least one seed");
  SmallestSVReport rep;
  rep.spec = spec;
  rep.z = z;
  rep.seeds = seeds;
  const std::size_t S = seeds.size();
  rep.lambda1.resize(S);
  parallel_for(static_cast<std::ptrdiff_t>(S), threads, [&](std::ptrdiff_t s) {
    EnsembleSpec one = spec;
    one.seed = seeds[s];
    rep.lambda1[s] = hermitize(sample_matrix(one), z, false).eigenvalues(0);
  });
  const double n = static_cast<double>(spec.N);
  const double logn2 = std::log(n) * std::log(n);
  std::size_t bounded = 0;
  for (double l : rep.lambda1) {
    rep.n2_lambda1.push_back(n * n * l);
    const double ratio = std::abs(std::log(l)) / logn2;
    rep.log_ratio.push_back(ratio);
    if (ratio <= 1.0) ++bounded;
  }
  rep.median_n2_lambda1 = median(rep.n2_lambda1);
  rep.fraction_log_bounded = static_cast<double>(bounded) / static_cast<double>(S);
  return rep;
}

}  // namespace lcl
