// Acceptance checks, one per criterion. `lcl_acceptance K` runs criterion K, no argument runs
// all of them. Each prints a single line "criterion K PASS|FAIL (seconds) details" and the
// exit status is nonzero if any selected criterion failed.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lcl/circlaw.hpp"
#include "lcl/cli.hpp"
#include "lcl/limiting.hpp"
#include "lcl/report.hpp"
#include "lcl/resolvent.hpp"
#include "lcl/stats.hpp"

using namespace lcl;
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string details;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

std::vector<std::uint64_t> seeds_from(std::uint64_t seed0, int count) {
  std::vector<std::uint64_t> s;
  for (int k = 0; k < count; ++k) s.push_back(seed0 + k);
  return s;
}

double fraction(std::size_t ok, std::size_t n) { return n ? static_cast<double>(ok) / static_cast<double>(n) : 0.0; }

Outcome self_consistency() {
  // eta |m_c| <= 1 always, so S(2) = {eta |m_c| >= phi^2/N} is empty until phi^2 < N, i.e. N above about 1e6.
  // The check only exercises the cubic solver, so the grid is built at N = 2^30 (phi^2/N ~ 0.09).
  const Index N = Index{1} << 30;
  double worst = 0.0;
  bool im_positive = true;
  std::size_t count = 0, empty = 0;
  for (double r : linspace(0.0, 2.0, 100)) {
    const Complex z{r, 0.0};
    const SGrid g = build_sgrid(z, N, 2.0, 10, 10);
    for (std::size_t k = 0; k < g.E_points.size(); ++k) {
      if (g.eta_points[k].empty()) ++empty;
      for (double eta : g.eta_points[k]) {
        const McValue v = mc_solve({g.E_points[k], eta}, z);
        worst = std::max(worst, v.residual / std::max(1.0, std::abs(v.w.w())));
        im_positive = im_positive && v.mc.imag() > 0;
        ++count;
      }
    }
  }
  return {worst <= 1e-10 && im_positive && count == 10000,
          "N=2^30 points=" + std::to_string(count) + " empty_E=" + std::to_string(empty) +
              " max_rel_residual=" + fmt("%.3g", worst) + " Im_mc>0=" + (im_positive ? "yes" : "no")};
}

Outcome explicit_formula() {
  double worst = 0.0;
  for (double r : {0.3, 0.5, 0.9, 1.2, 1.8}) {
    const ShiftContext c = make_shift_context(r);
    for (double E : linspace(0.25, 1.5 * c.lambda_plus, 100)) {
      const Complex ex = mc_explicit_real_axis(E, r).mc;
      const Complex so = mc_solve({E, 1e-9}, r).mc;
      worst = std::max(worst, std::abs(ex - so));
    }
  }
  return {worst <= 1e-8, "E in [0.25, 1.5 lambda_+], max |explicit - solve| = " + fmt("%.3g", worst)};
}

Outcome marchenko_pastur() {
  double sup = 0.0;
  for (double x : linspace(0.05, 3.95, 2001))
    sup = std::max(sup, std::abs(rho_c(x, 0.0) - std::sqrt((4.0 - x) / x) / (2.0 * kPi)));
  boost::math::quadrature::tanh_sinh<double> ts;
  double worst_mass = 0.0;
  std::string masses;
  for (double r : {0.0, 0.3, 0.7, 0.95, 1.05, 1.5, 2.0}) {
    const ShiftContext c = make_shift_context(r);
    const double mass = ts.integrate([&](double x) { return rho_c(x, c); }, c.lower_edge(), c.lambda_plus);
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
  }
  return {sup <= 1e-10 && worst_mass <= 1e-6,
          "sup|rho - MP| = " + fmt("%.3g", sup) + ", max |mass - 1| = " + fmt("%.3g", worst_mass) + " over 7 |z|"};
}

Outcome edge_exponents() {
  std::vector<double> ts, up, zero;
  for (int k = 0; k <= 20; ++k) ts.push_back(std::pow(10.0, -4.0 + 2.0 * k / 20.0));
  const ShiftContext c = make_shift_context(0.5);
  double worst_up = 0.0;
  std::string up_slopes;
  for (double r : {0.0, 0.5, 1.5}) {
    const ShiftContext cr = make_shift_context(r);
    std::vector<double> ys;
    for (double t : ts) ys.push_back(rho_c(cr.lambda_plus - t, cr));
    const double s = loglog_slope(ts, ys);
    worst_up = std::max(worst_up, std::abs(s - 0.5));
    up_slopes += fmt(" %.4f", s);
  }
  for (double t : ts) zero.push_back(rho_c(t, c));
  const double s0 = loglog_slope(ts, zero);
  return {worst_up <= 0.05 && std::abs(s0 + 0.5) <= 0.05,
          "slopes at lambda_+ (|z|=0,0.5,1.5):" + up_slopes + ", at 0 (|z|=0.5): " + fmt("%.4f", s0)};
}

Outcome log_potential_check() {
  double worst_in = 0.0, worst_out = 0.0, worst_val = 0.0;
  const double golden = 2.0 * kPi * 0.6180339887498949;
  for (int k = 0; k < 20; ++k) {
    const double r = 0.05 + 0.8 * k / 19.0;  // up to 0.85
    const Complex z = std::polar(r, golden * k);
    worst_in = std::max(worst_in, std::abs(log_potential_laplacian(z) - 4.0));
    worst_val = std::max(worst_val, std::abs(log_potential(z) - (r * r - 1.0)));
  }
  for (int k = 0; k < 20; ++k) {
    const double r = 1.15 + 1.8 * k / 19.0;  // 1.15 .. 2.95
    const Complex z = std::polar(r, golden * k + 0.3);
    worst_out = std::max(worst_out, std::abs(log_potential_laplacian(z)));
    worst_val = std::max(worst_val, std::abs(log_potential(z) - 2.0 * std::log(r)));
  }
  return {worst_in <= 0.01 && worst_out <= 0.01 && worst_val <= 1e-6,
          "max |Lap - 4| inside = " + fmt("%.3g", worst_in) + ", max |Lap| outside = " + fmt("%.3g", worst_out) +
              ", max value error = " + fmt("%.3g", worst_val)};
}

Outcome identity_instances() {
  const EnsembleKind kinds[] = {EnsembleKind::GinibreReal, EnsembleKind::GinibreComplex, EnsembleKind::Rademacher,
                                EnsembleKind::Uniform, EnsembleKind::Laplace};
  const Index Ns[] = {20, 50, 100};
  const double zs[] = {0.0, 0.5, 1.5};
  Xoshiro256pp rng(20240601);
  double worst_res = 0.0, worst_slack = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100; ++k) {
    const EnsembleKind kind = kinds[k % 5];
    const Index N = Ns[k % 3];
    const double r = zs[(k / 3) % 3];
    const Complex z = std::polar(r, 2.0 * kPi * rng.uniform());
    const SpectralPoint w{0.05 + 5.0 * rng.uniform(), std::pow(10.0, -3.0 + 3.0 * rng.uniform())};
    const IdentityReport rep = identity_suite(sample_matrix({kind, N, 1000 + static_cast<std::uint64_t>(k)}), z, w);
    worst_res = std::max(worst_res, rep.max_identity_residual());
    worst_slack = std::min(worst_slack, rep.min_inequality_slack());
  }
  return {worst_res <= 1e-10 && worst_slack >= -1e-12,
          "100 instances, max identity residual = " + fmt("%.3g", worst_res) +
              ", min inequality slack = " + fmt("%.3g", worst_slack)};
}

Outcome local_law() {
  const Index N = 1024;
  const Complex z{0.5, 0.0};
  const SGrid grid = build_sgrid(z, N, 0.0, 40, 40);
  const LocalLawReport rep =
      local_law_sweep({EnsembleKind::GinibreComplex, N, 0}, z, grid, seeds_from(1, 20), 0, 32);
  const double logn = std::log(static_cast<double>(N));
  std::vector<double> slopes;
  for (const auto& s : rep.slopes)
    if (s.bulk && std::isfinite(s.slope)) slopes.push_back(s.slope);
  const double slope = slopes.empty() ? std::nan("") : median(slopes);
  std::size_t bulk = 0, bulk_ok = 0, entries = 0, entries_ok = 0;
  for (const auto& p : rep.points)
    if (p.bulk) {
      ++bulk;
      bulk_ok += p.median_NetaLambda / std::pow(logn, 4) <= 1.0;
    }
  for (std::size_t i : rep.entry_points) {
    ++entries;
    entries_ok += rep.points[i].entry_ratio_median <= logn * logn;
  }
  const double fb = fraction(bulk_ok, bulk), fe = fraction(entries_ok, entries);
  return {std::abs(slope + 1.0) <= 0.3 && fb >= 0.95 && fe >= 0.95,
          "median bulk slope = " + fmt("%.3f", slope) + " over " + std::to_string(slopes.size()) +
              " energies, N eta Lambda within (log N)^4 at " + fmt("%.3f", fb) + " of " + std::to_string(bulk) +
              " bulk points, entry ratio within (log N)^2 at " + fmt("%.3f", fe) + " of " + std::to_string(entries)};
}

Outcome rigidity() {
  const RigidityScaling rs =
      rigidity_scaling(EnsembleKind::GinibreComplex, 0.5, {256, 512, 1024}, seeds_from(1, 20), 0);
  const RigidityReport& top = rs.reports.back();
  return {top.fraction_within_envelope >= 0.9 && top.sandwich_fraction >= 0.99 && std::abs(rs.slope + 1.0) <= 0.3,
          "N=1024: seeds within envelope " + fmt("%.2f", top.fraction_within_envelope) + ", sandwich " +
              fmt("%.4f", top.sandwich_fraction) + "; slope over N = " + fmt("%.3f", rs.slope)};
}

Outcome circular_law() {
  const std::vector<Index> Ns{256, 512, 1024};
  const ScalingReport rep =
      circular_law_scaling(EnsembleKind::GinibreComplex, {0.3, 0.2}, {0.25, 0.5}, Ns, seeds_from(1, 20), 0);
  bool oracle_ok = true, polylog_ok = true;
  std::string zs;
  for (const auto& row : rep.rows) {
    if (row.a == 0.25) {
      const double zscore = (row.mean_local_stat - row.ginibre_expected) / row.se_local_stat;
      oracle_ok = oracle_ok && std::abs(zscore) <= 3.0;
      zs += fmt(" %.2f", zscore);
    } else {
      polylog_ok = polylog_ok && row.within_polylog >= 0.9;
    }
  }
  const double slope = rep.slopes[0];
  return {slope <= -0.25 && oracle_ok && polylog_ok,
          "a=0.25 slope = " + fmt("%.3f", slope) + ", Ginibre z-scores:" + zs +
              ", a=0.5 within polylog envelope: " + (polylog_ok ? "yes" : "no")};
}

Outcome girko() {
  const SampleMatrix x = sample_matrix({EnsembleKind::GinibreReal, 64, 1});
  const TestFunction F = TestFunction::radial_bump(0.0, 0.0, 0.4);
  const GirkoRichardson r = girko_richardson(x, F, 0.02, 0);
  const bool res_ok = r.coarse.residual <= 1e-3;
  const bool ratio_ok = std::abs(r.ratio - 4.0) <= 1.0;
  return {res_ok && ratio_ok, "|LHS-RHS| = " + fmt("%.3g", r.coarse.residual) + " (h=0.02), " +
                                  fmt("%.3g", r.fine.residual) + " (h=0.01), Richardson ratio = " +
                                  fmt("%.3g", r.ratio)};
}

Outcome smallest() {
  const SmallestSVReport r =
      smallest_eigenvalue_stats({EnsembleKind::GinibreComplex, 512, 0}, 0.5, seeds_from(1, 200), 0);
  return {r.median_n2_lambda1 >= 1e-2 && r.median_n2_lambda1 <= 1e2 && r.fraction_log_bounded >= 0.99,
          "median N^2 lambda_1 = " + fmt("%.3g", r.median_n2_lambda1) + ", |log lambda_1| <= (log N)^2 for " +
              fmt("%.3f", r.fraction_log_bounded) + " of 200 seeds"};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome reproducibility() {
  const std::vector<std::pair<std::string, ojson>> runs = {
      {"density", {{"z", "0.7"}, {"points", 101}, {"N", 128}}},
      {"mc", {{"z", "1.3"}, {"w", "0.8+0.01i"}}},
      {"grid-sweep", {{"N", 96}, {"nE", 6}, {"neta", 6}, {"seeds", 3}, {"entry_points", 4}}},
      {"circular", {{"ensemble", "rademacher"}, {"Ns", {48, 96}}, {"a", {0.25, 0.5}}, {"seeds", 4}}},
      {"girko", {{"N", 16}, {"grid_h", 0.05}}},
      {"rigidity", {{"Ns", {64, 128}}, {"seeds", 3}}},
      {"minors", {{"N", 30}, {"format", "json"}}},
      {"ginibre-oracle", {{"N", 64}, {"seeds", 4}}},
      {"smallest", {{"N", 64}, {"seeds", 6}, {"format", "json"}}},
  };
  const fs::path root = fs::current_path() / "acceptance_repro";
  fs::remove_all(root);
  std::size_t files = 0;
  std::string mismatch;
  for (const auto& [command, overrides] : runs) {
    std::vector<ojson> manifests;
    for (const char* tag : {"a", "b"}) {
      ojson o = overrides;
      o["threads"] = 2;
      o["out"] = (root / (command + "_" + tag)).string();
      std::ostringstream err;
      if (run(resolve_config(command, {}, o), err) != kExitOk) return {false, command + " failed: " + err.str()};
      manifests.push_back(ojson::parse(slurp(fs::path(o["out"].get<std::string>()) / "manifest.json")));
    }
    for (const auto& [name, meta] : manifests[0]["files"].items()) {
      ++files;
      const std::string a = slurp(root / (command + "_a") / name);
      const std::string b = slurp(root / (command + "_b") / name);
      if (a != b || manifests[1]["files"][name] != meta) mismatch += " " + command + "/" + name;
    }
  }
  return {mismatch.empty() && files > 0,
          std::to_string(files) + " report files compared over 9 commands" +
              (mismatch.empty() ? ", all byte-identical" : ", differing:" + mismatch)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {
      self_consistency, explicit_formula, marchenko_pastur, edge_exponents, log_potential_check, identity_instances,
      local_law,        rigidity,         circular_law,     girko,          smallest,            reproducibility};
  std::vector<int> selected;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  } else {
    for (int k = 1; k <= 12; ++k) selected.push_back(k);
  }
  int failed = 0;
  for (int k : selected) {
    if (k < 1 || k > 12) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s (%.1f s) %s\n", k, o.pass ? "PASS" : "FAIL", s, o.details.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
