#include "lcl/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <stdexcept>
#include <string>

namespace lcl {

using ojson = nlohmann::ordered_json;

namespace {

ojson num(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

ojson cnum(Complex z) { return ojson::array({num(z.real()), num(z.imag())}); }

ojson num_array(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string idx(Index i) { return std::to_string(i); }

ojson ensemble_json(const EnsembleSpec& s) {
  return {{"kind", std::string(to_string(s.kind))}, {"N", s.N}, {"seed", s.seed}};
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(Complex z) {
  std::string im = format_number(z.imag());
  if (im.front() != '-') im = "+" + im;
  return format_number(z.real()) + im + "i";
}

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  static const std::regex num_re(R"(^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$)");
  static const std::regex full_re(R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([+-](?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)[ij]$)");
  static const std::regex imag_re(R"(^([+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)[ij]$)");
  std::smatch m;
  auto coef = [](const std::string& c) {
    if (c.empty() || c == "+") return 1.0;
    if (c == "-") return -1.0;
    return std::stod(c);
  };
  if (std::regex_match(s, num_re)) return {std::stod(s), 0.0};
  if (std::regex_match(s, m, full_re)) return {std::stod(m[1].str()), coef(m[2].str())};
  if (std::regex_match(s, m, imag_re)) return {0.0, coef(m[1].str())};
  throw std::invalid_argument("cannot parse complex number '" + std::string(text) + "'");
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_field(cells[i]);
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

CsvTable density_csv(const DensityCurve& c) {
  CsvTable t{{"x", "rho"}, {}};
  for (std::size_t i = 0; i < c.xs.size(); ++i) t.rows.push_back({format_number(c.xs[i]), format_number(c.rho[i])});
  return t;
}

CsvTable gamma_csv(const ClassicalLocations& g) {
  CsvTable t{{"j", "gamma_j"}, {}};
  for (std::size_t i = 0; i < g.gamma.size(); ++i) t.rows.push_back({std::to_string(i + 1), format_number(g.gamma[i])});
  return t;
}

CsvTable local_law_csv(const LocalLawReport& r) {
  CsvTable t{{"E", "eta", "median_NetaLambda", "max_NetaLambda", "entry_ratio_median", "slope_flag"}, {}};
  for (const auto& p : r.points)
    t.rows.push_back({format_number(p.E), format_number(p.eta), format_number(p.median_NetaLambda),
                      format_number(p.max_NetaLambda), format_number(p.entry_ratio_median), p.slope_flag ? "1" : "0"});
  return t;
}

CsvTable local_law_slopes_csv(const LocalLawReport& r) {
  CsvTable t{{"E", "slope", "bulk"}, {}};
  for (const auto& s : r.slopes) t.rows.push_back({format_number(s.E), format_number(s.slope), s.bulk ? "1" : "0"});
  return t;
}

CsvTable scaling_csv(const ScalingReport& r) {
  CsvTable t{{"N", "a", "median_err", "envelope", "slope"}, {}};
  for (const auto& row : r.rows)
    t.rows.push_back({idx(row.N), format_number(row.a), format_number(row.median_err), format_number(row.envelope),
                      format_number(row.slope)});
  return t;
}

CsvTable rigidity_csv(const RigidityReport& r) {
  CsvTable t{{"seed", "max_bulk_norm_dev", "sandwich_fraction"}, {}};
  for (const auto& s : r.seeds)
    t.rows.push_back({std::to_string(s.seed), format_number(s.max_bulk_norm_dev), format_number(s.sandwich_fraction)});
  return t;
}

CsvTable rigidity_scaling_csv(const RigidityScaling& r) {
  CsvTable t{{"N", "median_bulk_dev", "fraction_within_envelope", "sandwich_fraction", "slope"}, {}};
  for (const auto& rep : r.reports)
    t.rows.push_back({idx(rep.spec.N), format_number(rep.median_bulk_dev), format_number(rep.fraction_within_envelope),
                      format_number(rep.sandwich_fraction), format_number(r.slope)});
  return t;
}

CsvTable smallest_csv(const SmallestSVReport& r) {
  CsvTable t{{"seed", "lambda1", "n2_lambda1", "log_ratio"}, {}};
  for (std::size_t i = 0; i < r.seeds.size(); ++i)
    t.rows.push_back({std::to_string(r.seeds[i]), format_number(r.lambda1[i]), format_number(r.n2_lambda1[i]),
                      format_number(r.log_ratio[i])});
  return t;
}

CsvTable key_value_csv(const ojson& flat) {
  CsvTable t{{"name", "value"}, {}};
  for (const auto& [k, v] : flat.items()) {
    std::string s;
    if (v.is_string()) s = v.get<std::string>();
    else if (v.is_number_float()) s = format_number(v.get<double>());
    else s = v.dump();
    t.rows.push_back({k, s});
  }
  return t;
}

ojson to_json(const DensityCurve& c) {
  return {{"z", cnum(c.z)}, {"x", num_array(c.xs)}, {"rho", num_array(c.rho)}};
}

ojson to_json(const ClassicalLocations& g) {
  return {{"N", g.N}, {"z", cnum(g.z)}, {"gamma", num_array(g.gamma)}};
}

ojson to_json(const McValue& v) {
  return {{"E", num(v.w.E)},
          {"eta", num(v.w.eta)},
          {"z", cnum(v.z)},
          {"mc", cnum(v.mc)},
          {"residual", num(v.residual)},
          {"branch_note", std::string(to_string(v.branch_note))},
          {"ill_conditioned", v.ill_conditioned}};
}

ojson to_json(const RegimeReport& r) {
  ojson ratios = ojson::array();
  for (const auto& q : r.ratios) ratios.push_back({{"name", q.name}, {"value", num(q.value)}, {"within", q.within}});
  ojson j = {{"E", num(r.w.E)},   {"eta", num(r.w.eta)}, {"z", cnum(r.z)},     {"regime", std::string(to_string(r.regime))},
             {"kappa", num(r.kappa)}, {"mc", cnum(r.mc)},   {"ratios", ratios}, {"all_within", r.all_within()}};
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

ojson to_json(const IdentityReport& r) {
  return {{"N", r.N},
          {"z", cnum(r.z)},
          {"E", num(r.w.E)},
          {"eta", num(r.w.eta)},
          {"schur_G", num(r.schur_G)},
          {"schur_Gcal", num(r.schur_Gcal)},
          {"rank_one_G", num(r.rank_one_G)},
          {"rank_one_Gcal", num(r.rank_one_Gcal)},
          {"ygy", num(r.ygy)},
          {"trace_relation", num(r.trace_relation)},
          {"minor_bound_slack", num(r.minor_bound_slack)},
          {"re_im_slack", num(r.re_im_slack)},
          {"g2_slack", num(r.g2_slack)},
          {"max_identity_residual", num(r.max_identity_residual())},
          {"min_inequality_slack", num(r.min_inequality_slack())}};
}

ojson to_json(const LocalLawReport& r) {
  ojson pts = ojson::array();
  for (const auto& p : r.points)
    pts.push_back({{"E", num(p.E)},
                   {"eta", num(p.eta)},
                   {"median_NetaLambda", num(p.median_NetaLambda)},
                   {"max_NetaLambda", num(p.max_NetaLambda)},
                   {"entry_ratio_median", num(p.entry_ratio_median)},
                   {"entry_ratio_max", num(p.entry_ratio_max)},
                   {"median_Lambda", num(p.median_Lambda)},
                   {"bulk", p.bulk},
                   {"slope_flag", p.slope_flag}});
  ojson slopes = ojson::array();
  for (const auto& s : r.slopes) slopes.push_back({{"E", num(s.E)}, {"slope", num(s.slope)}, {"bulk", s.bulk}});
  return {{"ensemble", ensemble_json(r.spec)}, {"z", cnum(r.z)},           {"seeds", r.seeds},
          {"clamped_total", r.clamped_total},  {"entry_points", r.entry_points}, {"slopes", slopes},
          {"points", pts}};
}

ojson to_json(const ScalingReport& r) {
  ojson rows = ojson::array();
  for (const auto& row : r.rows)
    rows.push_back({{"N", row.N},
                    {"a", num(row.a)},
                    {"median_err", num(row.median_err)},
                    {"envelope", num(row.envelope)},
                    {"slope", num(row.slope)},
                    {"rhs", num(row.rhs)},
                    {"mean_local_stat", num(row.mean_local_stat)},
                    {"se_local_stat", num(row.se_local_stat)},
                    {"ginibre_expected", num(row.ginibre_expected)},
                    {"within_polylog", num(row.within_polylog)},
                    {"errs", num_array(row.errs)}});
  return {{"kind", std::string(to_string(r.kind))},
          {"z0", cnum(r.z0)},
          {"seeds", r.seeds},
          {"slopes", num_array(r.slopes)},
          {"rows", rows}};
}

ojson to_json(const GirkoRichardson& r) {
  auto one = [](const GirkoResult& g) {
    return ojson{{"h", num(g.h)},         {"lhs", num(g.lhs)},     {"rhs", num(g.rhs)},
                 {"residual", num(g.residual)}, {"nodes", g.nodes}, {"perturbed_nodes", g.perturbed_nodes}};
  };
  return {{"coarse", one(r.coarse)},
          {"fine", one(r.fine)},
          {"ratio", num(r.ratio)},
          {"extrapolated", num(r.extrapolated)},
          {"extrapolated_over_raw", num(r.extrapolated_over_raw)}};
}

ojson to_json(const RigidityReport& r) {
  ojson seeds = ojson::array();
  for (const auto& s : r.seeds)
    seeds.push_back({{"seed", s.seed},
                     {"max_bulk_norm_dev", num(s.max_bulk_norm_dev)},
                     {"sandwich_fraction", num(s.sandwich_fraction)},
                     {"median_bulk_dev", num(s.median_bulk_dev)}});
  return {{"ensemble", ensemble_json(r.spec)},
          {"z", cnum(r.z)},
          {"shift", r.shift},
          {"fraction_within_envelope", num(r.fraction_within_envelope)},
          {"sandwich_fraction", num(r.sandwich_fraction)},
          {"median_bulk_dev", num(r.median_bulk_dev)},
          {"seeds", seeds}};
}

ojson to_json(const RigidityScaling& r) {
  ojson reps = ojson::array();
  for (const auto& rep : r.reports) reps.push_back(to_json(rep));
  return {{"slope", num(r.slope)}, {"reports", reps}};
}

ojson to_json(const SmallestSVReport& r) {
  return {{"ensemble", ensemble_json(r.spec)},
          {"z", cnum(r.z)},
          {"median_n2_lambda1", num(r.median_n2_lambda1)},
          {"fraction_log_bounded", num(r.fraction_log_bounded)},
          {"seeds", r.seeds},
          {"lambda1", num_array(r.lambda1)},
          {"n2_lambda1", num_array(r.n2_lambda1)},
          {"log_ratio", num_array(r.log_ratio)}};
}

ojson json_document(std::string_view report, const ojson& body) {
  ojson doc = {{"schema_version", kSchemaVersion}, {"report", std::string(report)}};
  for (const auto& [k, v] : body.items()) doc[k] = v;
  return doc;
}

std::string dump_json(const ojson& j) { return j.dump(2) + "\n"; }

std::string Curve::str() const {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  for (const auto& [x, y] : points) out += format_number(x) + " " + format_number(y) + "\n";
  return out;
}

Curve density_curve_dat(const DensityCurve& c) {
  Curve out;
  out.comments = {"limiting density rho_c(x, z), z = " + format_complex(c.z), "x rho"};
  for (std::size_t i = 0; i < c.xs.size(); ++i) out.points.emplace_back(c.xs[i], c.rho[i]);
  return out;
}

std::vector<Curve> scaling_curves(const ScalingReport& r) {
  std::vector<Curve> out;
  if (r.slopes.empty()) return out;
  const std::size_t per_a = r.rows.size() / r.slopes.size();
  for (std::size_t k = 0; k < r.slopes.size(); ++k) {
    Curve c;
    for (std::size_t i = k * per_a; i < (k + 1) * per_a; ++i)
      c.points.emplace_back(std::log(static_cast<double>(r.rows[i].N)), std::log(r.rows[i].median_err));
    const double a = per_a ? r.rows[k * per_a].a : 0.0;
    c.comments = {"local circular law, z0 = " + format_complex(r.z0) + ", a = " + format_number(a),
                  "fitted slope " + format_number(r.slopes[k]), "log(N) log(median_err)"};
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Curve> sweep_curves(const LocalLawReport& r) {
  std::vector<Curve> out;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    if (i == 0 || r.points[i].E != r.points[i - 1].E) {
      Curve c;
      c.comments = {"local law sweep, z = " + format_complex(r.z) + ", E = " + format_number(r.points[i].E),
                    "eta median_NetaLambda"};
      out.push_back(std::move(c));
    }
    out.back().points.emplace_back(r.points[i].eta, r.points[i].median_NetaLambda);
  }
  return out;
}

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace lcl
