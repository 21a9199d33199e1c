#include "lcl/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lcl/parallel.hpp"
#include "lcl/stats.hpp"

namespace lcl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<Index> complement(Index N, const std::vector<Index>& removed) {
  std::vector<bool> drop(N, false);
  for (Index r : removed) drop[r] = true;
  std::vector<Index> keep;
  keep.reserve(N - removed.size());
  for (Index i = 0; i < N; ++i)
    if (!drop[i]) keep.push_back(i);
  return keep;
}

// (B - w)^{-1} for a Hermitian positive semidefinite B and w off the real axis.
MatrixXc shifted_inverse(const MatrixXc& b, Complex w) {
  MatrixXc a = b;
  a.diagonal().array() -= w;
  return a.partialPivLu().inverse();
}

MatrixXc scatter(const MatrixXc& small, const std::vector<Index>& labels, Index N) {
  MatrixXc out = MatrixXc::Zero(N, N);
  for (std::size_t a = 0; a < labels.size(); ++a)
    for (std::size_t b = 0; b < labels.size(); ++b) out(labels[a], labels[b]) = small(a, b);
  return out;
}

double relative(double residual, double scale) { return residual / std::max(scale, 1e-300); }

}  // namespace

HermitizedSpectrum hermitize(const SampleMatrix& x, Complex z, bool want_vectors, HermitizeMethod method) {
  if (!x.all_finite()) throw std::invalid_argument("hermitize: matrix has non-finite entries");
  HermitizedSpectrum out;
  out.z = z;
  out.N = x.N;
  const Index n = x.N;
  const bool real_path = x.is_real && z.imag() == 0.0;

  if (method == HermitizeMethod::Svd) {
    const unsigned opts = want_vectors ? Eigen::ComputeThinV : 0;
    Eigen::VectorXd s;
    if (real_path) {
      Eigen::MatrixXd y = x.real_entries();
      y.diagonal().array() -= z.real();
      Eigen::BDCSVD<Eigen::MatrixXd> svd(y, opts);
      if (svd.info() != Eigen::Success) throw NumericError("hermitize: SVD did not converge");
      s = svd.singularValues();
      if (want_vectors) out.eigenvectors = svd.matrixV().rowwise().reverse().cast<Complex>();
    } else {
      const MatrixXc y = shifted(x.entries, z);
      Eigen::BDCSVD<MatrixXc> svd(y, opts);
      if (svd.info() != Eigen::Success) throw NumericError("hermitize: SVD did not converge");
      s = svd.singularValues();
      if (want_vectors) out.eigenvectors = svd.matrixV().rowwise().reverse();
    }
    out.eigenvalues = s.reverse().array().square();
    return out;
  }

  const MatrixXc y = shifted(x.entries, z);
  const MatrixXc h = y.adjoint() * y;
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("hermitize: Hermitian eigensolver did not converge");
  out.eigenvalues = es.eigenvalues();
  const double top = n > 0 ? std::max(1.0, out.eigenvalues(n - 1)) : 1.0;
  for (Index k = 0; k < n; ++k) {
    if (out.eigenvalues(k) < 0.0) {
      if (out.eigenvalues(k) < -1e-10 * top) {
        std::ostringstream msg;
        msg << "hermitize: eigenvalue " << out.eigenvalues(k) << " of Y^*Y is negative beyond round-off";
        throw NumericError(msg.str());
      }
      out.eigenvalues(k) = 0.0;
      ++out.clamped_count;
    }
  }
  if (want_vectors) out.eigenvectors = es.eigenvectors();
  return out;
}

Complex m_empirical(const HermitizedSpectrum& spec, const SpectralPoint& w) {
  if (!(w.eta > 0.0)) throw std::invalid_argument("m_empirical needs eta > 0");
  const Complex ww = w.w();
  Complex sum{};
  for (Index k = 0; k < spec.eigenvalues.size(); ++k) sum += 1.0 / (spec.eigenvalues(k) - ww);
  return sum / static_cast<double>(spec.eigenvalues.size());
}

void MinorSpec::validate(Index N) const {
  auto check = [N](const std::vector<Index>& labels, const char* name) {
    std::set<Index> seen;
    for (Index l : labels) {
      if (l < 0 || l >= N) throw std::invalid_argument(std::string("minor: label out of range in ") + name);
      if (!seen.insert(l).second) throw std::invalid_argument(std::string("minor: duplicate label in ") + name);
    }
  };
  check(T, "T");
  check(U, "U");
  if (static_cast<Index>(T.size() + U.size()) * 2 > N) throw std::invalid_argument("minor: |T| + |U| must be <= N/2");
}

GreenPair green_entries(const MatrixXc& y, const SpectralPoint& w, const MinorSpec& minor) {
  if (!(w.eta > 0.0)) throw std::invalid_argument("green_entries needs eta > 0");
  const Index n = y.rows();
  minor.validate(n);
  const auto cols = complement(n, minor.T);
  const auto rows = complement(n, minor.U);
  const MatrixXc a = y(rows, cols);
  const MatrixXc g = shifted_inverse(a.adjoint() * a, w.w());
  const MatrixXc gc = shifted_inverse(a * a.adjoint(), w.w());
  if (!g.allFinite() || !gc.allFinite()) throw NumericError("green_entries: singular solve");
  return {scatter(g, cols, n), scatter(gc, rows, n)};
}

GreenPair green_entries(const SampleMatrix& x, Complex z, const SpectralPoint& w, const MinorSpec& minor) {
  return green_entries(shifted(x.entries, z), w, minor);
}

double IdentityReport::max_identity_residual() const {
  return std::max({schur_G, schur_Gcal, rank_one_G, rank_one_Gcal, ygy, trace_relation});
}

double IdentityReport::min_inequality_slack() const { return std::min({minor_bound_slack, re_im_slack, g2_slack}); }

std::vector<MinorSpec> default_identity_minors(Index N) {
  if (N < 8) return {{{0}, {}}, {{}, {N - 1}}};
  return {{{0}, {}}, {{}, {N - 1}}, {{1, 2}, {3}}, {{0, N / 2}, {1, N / 2 + 1}}, {{}, {2, 5, 7}}};
}

IdentityReport identity_suite(const SampleMatrix& x, Complex z, const SpectralPoint& w,
                              const std::vector<MinorSpec>& minors_in) {
  if (!(w.eta > 0.0)) throw std::invalid_argument("identity_suite needs eta > 0");
  const Index n = x.N;
  if (n > 400) throw std::invalid_argument("identity_suite is limited to N <= 400");
  const auto minors = minors_in.empty() ? default_identity_minors(n) : minors_in;
  const Complex ww = w.w();
  const MatrixXc y = shifted(x.entries, z);
  const GreenPair full = green_entries(y, w);
  const MatrixXc& G = full.G;
  const MatrixXc& Gc = full.Gcal;
  const double gscale = max_abs(G);
  const double gcscale = max_abs(Gc);

  IdentityReport rep;
  rep.N = n;
  rep.z = z;
  rep.w = w;

  std::vector<Index> ks{0, n / 3, 2 * n / 3, n - 1};
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  for (Index k : ks) {
    // (a) removing column k is a principal minor of Y^*Y; removing row k one of YY^*.
    auto schur = [k, n](const MatrixXc& full_g, const MatrixXc& minor_g) {
      double r = 0.0;
      for (Index i = 0; i < n; ++i) {
        if (i == k) continue;
        for (Index j = 0; j < n; ++j) {
          if (j == k) continue;
          const Complex pred = full_g(i, j) - full_g(i, k) * full_g(k, j) / full_g(k, k);
          r = std::max(r, std::abs(minor_g(i, j) - pred));
        }
      }
      return r;
    };
    const MatrixXc gk = green_entries(y, w, {{k}, {}}).G;
    const MatrixXc gck = green_entries(y, w, {{}, {k}}).Gcal;
    rep.schur_G = std::max(rep.schur_G, relative(schur(G, gk), gscale));
    rep.schur_Gcal = std::max(rep.schur_Gcal, relative(schur(Gc, gck), gcscale));

    // (b) rank-one updates: Y^*Y loses row k's outer product, YY^* loses column k's.
    const Eigen::RowVectorXcd r = y.row(k);
    const MatrixXc g_row = green_entries(y, w, {{}, {k}}).G;
    {
      const VectorXc gr = G * r.adjoint();
      const Eigen::RowVectorXcd rg = r * G;
      const Complex denom = 1.0 - (r * G * r.adjoint())(0, 0);
      const MatrixXc fwd = G + gr * rg / denom;
      const VectorXc gr2 = g_row * r.adjoint();
      const Eigen::RowVectorXcd rg2 = r * g_row;
      const Complex denom2 = 1.0 + (r * g_row * r.adjoint())(0, 0);
      const MatrixXc back = g_row - gr2 * rg2 / denom2;
      const double scale = std::max(gscale, max_abs(g_row));
      rep.rank_one_G =
          std::max({rep.rank_one_G, relative(max_abs(fwd - g_row), scale), relative(max_abs(back - G), scale)});
    }
    const VectorXc c = y.col(k);
    const MatrixXc gc_col = green_entries(y, w, {{k}, {}}).Gcal;
    {
      const VectorXc gcv = Gc * c;
      const Eigen::RowVectorXcd cg = c.adjoint() * Gc;
      const Complex denom = 1.0 - (c.adjoint() * Gc * c)(0, 0);
      const MatrixXc fwd = Gc + gcv * cg / denom;
      const VectorXc gcv2 = gc_col * c;
      const Eigen::RowVectorXcd cg2 = c.adjoint() * gc_col;
      const Complex denom2 = 1.0 + (c.adjoint() * gc_col * c)(0, 0);
      const MatrixXc back = gc_col - gcv2 * cg2 / denom2;
      const double scale = std::max(gcscale, max_abs(gc_col));
      rep.rank_one_Gcal =
          std::max({rep.rank_one_Gcal, relative(max_abs(fwd - gc_col), scale), relative(max_abs(back - Gc), scale)});
    }
  }

  // (c) Y G Y^* = 1 + w Gcal
  {
    MatrixXc lhs = y * G * y.adjoint();
    MatrixXc rhs = ww * Gc;
    rhs.diagonal().array() += 1.0;
    rep.ygy = relative(max_abs(lhs - rhs), std::max(1.0, std::abs(ww) * gcscale));
  }

  const double nd = static_cast<double>(n);
  const Complex m = G.trace() / nd;
  rep.minor_bound_slack = std::numeric_limits<double>::infinity();
  for (const auto& minor : minors) {
    const GreenPair gp = green_entries(y, w, minor);
    const Complex mg = gp.G.trace() / nd;
    const Complex mgc = gp.Gcal.trace() / nd;
    const double dt = static_cast<double>(minor.T.size());
    const double du = static_cast<double>(minor.U.size());
    const Complex predicted = (dt - du) / (nd * ww);
    rep.trace_relation =
        std::max(rep.trace_relation, relative(std::abs(mg - mgc - predicted), std::max(1.0, std::abs(mg))));
    const double bound = (dt + du) / (nd * w.eta);
    rep.minor_bound_slack = std::min({rep.minor_bound_slack, bound - std::abs(m - mg), bound - std::abs(m - mgc)});
  }

  rep.re_im_slack = 2.0 * std::sqrt(m.imag() / w.eta) - std::abs(m.real());

  const MatrixXc g2 = G * G;
  double slack = std::numeric_limits<double>::infinity();
  double im_scale = 0.0;
  for (Index i = 0; i < n; ++i) {
    slack = std::min(slack, G(i, i).imag() - w.eta * std::abs(g2(i, i)));
    im_scale = std::max(im_scale, G(i, i).imag());
  }
  rep.g2_slack = relative(slack, im_scale);
  return rep;
}

double reference_phi(Index N) {
  const double l = std::log(static_cast<double>(N));
  return std::pow(l, std::log(l));
}

std::size_t SGrid::size() const {
  std::size_t s = 0;
  for (const auto& e : eta_points) s += e.size();
  return s;
}

SGrid build_sgrid(Complex z, Index N, double alpha_exponent, int nE, int nEta) {
  if (nE < 2 || nEta < 2) throw std::invalid_argument("build_sgrid needs nE, nEta >= 2");
  if (N < 2) throw std::invalid_argument("build_sgrid needs N >= 2");
  const ShiftContext c = make_shift_context(z);
  SGrid grid;
  grid.z = z;
  grid.N = N;
  grid.alpha_exponent = alpha_exponent;
  const double e0 = std::max(c.lambda_minus / 5.0, 0.0);
  const double e1 = 5.0 * c.lambda_plus;
  const double scale = std::pow(reference_phi(N), alpha_exponent) / static_cast<double>(N);
  for (int k = 0; k < nE; ++k) {
    const double E = k + 1 == nE ? e1 : e0 + (e1 - e0) * k / (nE - 1);
    // floor = scale / |m_c(E + i floor)|; the map is a contraction (|m_c| decreases in eta
    // no faster than eta^{-1/2}), so plain iteration converges.
    double floor = scale;
    for (int it = 0; it < 500 && floor <= 10.0; ++it) {
      const double next = scale / std::abs(mc(Complex(E, floor), z));
      const bool done = std::abs(next - floor) <= 1e-14 * floor;
      floor = next;
      if (done) break;
    }
    floor *= 1.0 + 1e-10;
    grid.E_points.push_back(E);
    grid.eta_floor.push_back(floor);
    std::vector<double> etas;
    if (floor <= 10.0) {
      const double l0 = std::log(floor);
      const double l1 = std::log(10.0);
      for (int j = 0; j < nEta; ++j) etas.push_back(j + 1 == nEta ? 10.0 : std::exp(l0 + (l1 - l0) * j / (nEta - 1)));
    }
    grid.eta_points.push_back(std::move(etas));
  }
  return grid;
}

bool in_sgrid(const SGrid& grid, double E, double eta) {
  const ShiftContext c = make_shift_context(grid.z);
  const double e0 = std::max(c.lambda_minus / 5.0, 0.0);
  const double e1 = 5.0 * c.lambda_plus;
  if (E < e0 - 1e-12 * e1 || E > e1 * (1.0 + 1e-12)) return false;
  if (!(eta > 0.0) || eta > 10.0) return false;
  const double scale = std::pow(reference_phi(grid.N), grid.alpha_exponent) / static_cast<double>(grid.N);
  return eta >= scale / std::abs(mc(Complex(E, eta), grid.z));
}

bool is_bulk_energy(double E, const ShiftContext& c) {
  return E >= c.lower_edge() + kRegimeTau && E <= c.lambda_plus - kRegimeTau;
}

LocalLawReport local_law_sweep(const EnsembleSpec& spec, Complex z, const SGrid& grid,
                               const std::vector<std::uint64_t>& seeds, int threads, std::size_t max_entry_points) {
  spec.validate();
  require_off_circle(z, "local law");
  if (seeds.empty()) throw std::invalid_argument("local_law_sweep needs at least one seed");
  if (grid.N != spec.N) throw std::invalid_argument("local_law_sweep: grid built for a different N");

  const ShiftContext c = make_shift_context(z);
  const double nd = static_cast<double>(spec.N);

  struct Flat {
    std::size_t e_index;
    double E;
    double eta;
    Complex mc;
  };
  std::vector<Flat> pts;
  for (std::size_t k = 0; k < grid.E_points.size(); ++k)
    for (double eta : grid.eta_points[k]) pts.push_back({k, grid.E_points[k], eta, {}});
  for (auto& p : pts) p.mc = mc_solve({p.E, p.eta}, z).mc;
  const std::size_t P = pts.size();

  LocalLawReport rep;
  rep.spec = spec;
  rep.z = z;
  rep.seeds = seeds;
  if (max_entry_points > 0) {
    const std::size_t m = std::min(max_entry_points, P);
    for (std::size_t i = 0; i < m; ++i) rep.entry_points.push_back((2 * i + 1) * P / (2 * m));
  }

  const std::size_t S = seeds.size();
  const std::size_t Q = rep.entry_points.size();
  std::vector<double> lambda(S * P);
  std::vector<double> ratio(S * Q);
  std::vector<Index> clamped(S);
  parallel_for(static_cast<std::ptrdiff_t>(S), threads, [&](std::ptrdiff_t s) {
    EnsembleSpec one = spec;
    one.seed = seeds[s];
    const SampleMatrix x = sample_matrix(one);
    const HermitizedSpectrum hs = hermitize(x, z, Q > 0);
    clamped[s] = hs.clamped_count;
    for (std::size_t p = 0; p < P; ++p) lambda[s * P + p] = std::abs(m_empirical(hs, {pts[p].E, pts[p].eta}) - pts[p].mc);
    for (std::size_t q = 0; q < Q; ++q) {
      const Flat& p = pts[rep.entry_points[q]];
      const Complex w(p.E, p.eta);
      const VectorXc d = (hs.eigenvalues.cast<Complex>().array() - w).inverse();
      const MatrixXc& v = *hs.eigenvectors;
      MatrixXc g = (v.array().rowwise() * d.transpose().array()).matrix() * v.adjoint();
      g.diagonal().array() -= p.mc;
      const double bound = std::sqrt(p.mc.imag() / (nd * p.eta)) + 1.0 / (nd * p.eta);
      ratio[s * Q + q] = max_abs(g) / bound;
    }
  });
  for (Index v : clamped) rep.clamped_total += v;

  std::vector<double> col(S);
  rep.points.resize(P);
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t s = 0; s < S; ++s) col[s] = lambda[s * P + p];
    LocalLawPoint& out = rep.points[p];
    out.E = pts[p].E;
    out.eta = pts[p].eta;
    out.median_Lambda = median(col);
    out.median_NetaLambda = nd * out.eta * out.median_Lambda;
    out.max_NetaLambda = nd * out.eta * max_finite(col);
    out.entry_ratio_median = kNaN;
    out.entry_ratio_max = kNaN;
    out.bulk = is_bulk_energy(out.E, c);
  }
  for (std::size_t q = 0; q < Q; ++q) {
    for (std::size_t s = 0; s < S; ++s) col[s] = ratio[s * Q + q];
    rep.points[rep.entry_points[q]].entry_ratio_median = median(col);
    rep.points[rep.entry_points[q]].entry_ratio_max = max_finite(col);
  }

  const double lo = std::pow(nd, -0.9);
  const double hi = std::pow(nd, -0.2);
  std::size_t p = 0;
  for (std::size_t k = 0; k < grid.E_points.size(); ++k) {
    std::vector<double> etas;
    std::vector<double> lams;
    const std::size_t first = p;
    for (double eta : grid.eta_points[k]) {
      if (eta >= lo && eta <= hi) {
        etas.push_back(eta);
        lams.push_back(rep.points[p].median_Lambda);
      }
      ++p;
    }
    LocalLawSlope sl{grid.E_points[k], etas.size() >= 3 ? loglog_slope(etas, lams) : kNaN,
                     is_bulk_energy(grid.E_points[k], c)};
    rep.slopes.push_back(sl);
    const bool flag = std::isfinite(sl.slope) && std::abs(sl.slope + 1.0) <= 0.3;
    for (std::size_t i = first; i < p; ++i) rep.points[i].slope_flag = flag;
  }
  return rep;
}

McErrorReport conditional_expectation_check(const SampleMatrix& x, EnsembleKind kind, Complex z,
                                            const SpectralPoint& w, Index i, Index j, std::int64_t resamples,
                                            std::uint64_t seed) {
  const Index n = x.N;
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) throw std::invalid_argument("conditional_expectation_check needs distinct i, j in range");
  if (!(w.eta > 0.0)) throw std::invalid_argument("conditional_expectation_check needs eta > 0");
  if (resamples < 1000) throw std::invalid_argument("conditional_expectation_check needs at least 10^3 resamples");

  // Rows i and j are removed, so the minor does not depend on them.
  const MatrixXc g = green_entries(x, z, w, {{}, {i, j}}).G;
  McErrorReport rep;
  rep.i = i;
  rep.j = j;
  rep.resamples = resamples;
  rep.target = std::norm(z) * g(i, j);

  Xoshiro256pp rng(seed);
  Complex mean{};
  double m2 = 0.0;
  for (std::int64_t r = 0; r < resamples; ++r) {
    VectorXc yi = sample_row(kind, n, rng);
    VectorXc yj = sample_row(kind, n, rng);
    yi(i) -= z;
    yj(j) -= z;
    const VectorXc gy = g * yj.conjugate();
    const Complex q = (yi.array() * gy.array()).sum();
    // Welford update on complex values with |.|^2 as the variance.
    const Complex delta = q - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += std::real(std::conj(delta) * (q - mean));
  }
  rep.average = mean;
  rep.deviation = std::abs(mean - rep.target);
  const double nr = static_cast<double>(resamples);
  rep.standard_error = std::sqrt(m2 / (nr - 1.0) / nr);
  rep.statistical_scale = 1.0 / std::sqrt(nr);
  return rep;
}

}  // namespace lcl
