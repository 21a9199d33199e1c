#include "lcl/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "lcl/circlaw.hpp"
#include "lcl/limiting.hpp"
#include "lcl/parallel.hpp"
#include "lcl/report.hpp"
#include "lcl/resolvent.hpp"
#include "lcl/rng.hpp"
#include "lcl/stats.hpp"

#ifndef LCL_VERSION
#define LCL_VERSION "0.0.0"
#endif

namespace lcl {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

const char* const kDefaultZ0 = "0.3+0.2i";

ojson with_tail(ojson body) {
  body["threads"] = 0;
  body["format"] = "csv";
  body["out"] = "lcl-out";
  return body;
}

// --- typed access to a resolved config -------------------------------------------------

Complex cplx(const ojson& cfg, const char* key) {
  const ojson& v = cfg.at(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  return parse_complex(v.get<std::string>());
}

double real(const ojson& cfg, const char* key) { return cfg.at(key).get<double>(); }

Index integer(const ojson& cfg, const char* key) { return cfg.at(key).get<Index>(); }

std::vector<std::uint64_t> seed_list(const ojson& cfg) {
  const ojson& s = cfg.at("seeds");
  if (s.is_array()) return s.get<std::vector<std::uint64_t>>();
  const auto seed0 = cfg.at("seed0").get<std::uint64_t>();
  const auto count = s.get<std::int64_t>();
  std::vector<std::uint64_t> out;
  for (std::int64_t k = 0; k < count; ++k) out.push_back(seed0 + static_cast<std::uint64_t>(k));
  return out;
}

std::vector<Index> index_list(const ojson& cfg, const char* key) { return cfg.at(key).get<std::vector<Index>>(); }

std::vector<double> real_list(const ojson& cfg, const char* key) { return cfg.at(key).get<std::vector<double>>(); }

EnsembleKind kind_of(const ojson& cfg) { return parse_ensemble_kind(cfg.at("ensemble").get<std::string>()); }

// --- output bookkeeping ----------------------------------------------------------------

struct Outputs {
  fs::path dir;
  bool json = false;
  ojson files = ojson::object();
  ojson stages = ojson::array();

  void put(const std::string& name, const std::string& content) {
    write_atomic(dir / name, content);
    files[name] = {{"bytes", content.size()}, {"fnv1a64", fnv1a64(content)}};
  }
  void table(const std::string& stem, const CsvTable& t) { put(stem + ".csv", t.str()); }
  void document(const std::string& stem, std::string_view report, const ojson& body) {
    put(stem + ".json", dump_json(json_document(report, body)));
  }
  void curve(const std::string& name, const Curve& c) { put(name, c.str()); }
};

class Stage {
 public:
  Stage(Outputs& out, std::string name) : out_(out), name_(std::move(name)), t0_(std::chrono::steady_clock::now()) {}
  ~Stage() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    out_.stages.push_back({{"name", name_}, {"seconds", s}});
  }

 private:
  Outputs& out_;
  std::string name_;
  std::chrono::steady_clock::time_point t0_;
};

std::string padded(std::size_t k, int width = 3) {
  std::string s = std::to_string(k);
  while (static_cast<int>(s.size()) < width) s = "0" + s;
  return s;
}

// --- commands --------------------------------------------------------------------------

void cmd_density(const ojson& cfg, Outputs& out) {
  const Complex z = cplx(cfg, "z");
  DensityCurve curve;
  ClassicalLocations gamma;
  {
    Stage s(out, "compute");
    curve = density_curve(z, real(cfg, "xmin"), real(cfg, "xmax"), static_cast<int>(integer(cfg, "points")));
    gamma = classical_locations(integer(cfg, "N"), z);
  }
  Stage s(out, "write");
  if (out.json) {
    out.document("density", "density", to_json(curve));
    out.document("gamma", "classical_locations", to_json(gamma));
  } else {
    out.table("density", density_csv(curve));
    out.table("gamma", gamma_csv(gamma));
  }
  out.curve("density.dat", density_curve_dat(curve));
}

void cmd_mc(const ojson& cfg, Outputs& out) {
  const Complex z = cplx(cfg, "z");
  const Complex w = cplx(cfg, "w");
  McValue v;
  std::optional<RegimeReport> regime;
  {
    Stage s(out, "compute");
    if (w.imag() == 0.0) {
      v = mc_explicit_real_axis(w.real(), z);
    } else {
      v = mc_solve({w.real(), std::abs(w.imag())}, z);
      if (w.imag() < 0.0) {
        v.mc = std::conj(v.mc);
        v.w.eta = w.imag();
      } else if (std::abs(w) <= 10.0) {
        regime = regime_check(v.w, z);
      }
    }
  }
  Stage s(out, "write");
  if (out.json) {
    ojson body = {{"mc", to_json(v)}};
    if (regime) body["regime"] = to_json(*regime);
    out.document("mc", "mc", body);
    return;
  }
  ojson flat = {{"E", v.w.E},
                {"eta", v.w.eta},
                {"z", format_complex(z)},
                {"mc_re", v.mc.real()},
                {"mc_im", v.mc.imag()},
                {"residual", v.residual},
                {"branch_note", std::string(to_string(v.branch_note))},
                {"ill_conditioned", v.ill_conditioned}};
  if (regime) {
    flat["regime"] = std::string(to_string(regime->regime));
    flat["kappa"] = regime->kappa;
    for (const auto& r : regime->ratios) flat["ratio_" + r.name] = r.value;
    if (!regime->message.empty()) flat["message"] = regime->message;
  }
  out.table("mc", key_value_csv(flat));
}

ojson local_law_summary(const LocalLawReport& rep, Index N) {
  const double logn = std::log(static_cast<double>(N));
  std::size_t bulk = 0, bulk_ok = 0, entries = 0, entries_ok = 0;
  for (const auto& p : rep.points) {
    if (!p.bulk) continue;
    ++bulk;
    if (p.median_NetaLambda / std::pow(logn, 4) <= 1.0) ++bulk_ok;
  }
  for (std::size_t i : rep.entry_points) {
    ++entries;
    if (rep.points[i].entry_ratio_median <= logn * logn) ++entries_ok;
  }
  std::vector<double> slopes;
  for (const auto& s : rep.slopes)
    if (s.bulk && std::isfinite(s.slope)) slopes.push_back(s.slope);
  return {{"grid_points", rep.points.size()},
          {"bulk_points", bulk},
          {"fraction_bulk_NetaLambda_within_polylog", bulk ? double(bulk_ok) / double(bulk) : 0.0},
          {"entry_points", entries},
          {"fraction_entry_ratio_within_log2", entries ? double(entries_ok) / double(entries) : 0.0},
          {"median_bulk_slope", slopes.empty() ? std::numeric_limits<double>::quiet_NaN() : median(slopes)},
          {"clamped_total", rep.clamped_total}};
}

void cmd_grid_sweep(const ojson& cfg, Outputs& out, int threads) {
  const Complex z = cplx(cfg, "z");
  const Index N = integer(cfg, "N");
  LocalLawReport rep;
  {
    Stage s(out, "compute");
    require_off_circle(z, "grid-sweep");
    const SGrid grid = build_sgrid(z, N, real(cfg, "alpha"), static_cast<int>(integer(cfg, "nE")),
                                   static_cast<int>(integer(cfg, "neta")));
    rep = local_law_sweep({kind_of(cfg), N, 0}, z, grid, seed_list(cfg), threads,
                          static_cast<std::size_t>(integer(cfg, "entry_points")));
  }
  Stage s(out, "write");
  ojson summary = local_law_summary(rep, N);
  for (auto it = summary.begin(); it != summary.end(); ++it)
    if (it->is_number_float() && !std::isfinite(it->get<double>())) *it = format_number(it->get<double>());
  if (out.json) {
    ojson body = to_json(rep);
    body["summary"] = summary;
    out.document("local_law", "local_law", body);
  } else {
    out.table("local_law", local_law_csv(rep));
    out.table("local_law_slopes", local_law_slopes_csv(rep));
    out.table("local_law_summary", key_value_csv(summary));
  }
  const auto curves = sweep_curves(rep);
  for (std::size_t k = 0; k < curves.size(); ++k) out.curve("sweep_E" + padded(k) + ".dat", curves[k]);
}

void cmd_circular(const ojson& cfg, Outputs& out, int threads) {
  ScalingReport rep;
  {
    Stage s(out, "compute");
    rep = circular_law_scaling(kind_of(cfg), cplx(cfg, "z0"), real_list(cfg, "a"), index_list(cfg, "Ns"),
                               seed_list(cfg), threads, real(cfg, "radius"));
  }
  Stage s(out, "write");
  if (out.json) out.document("scaling", "circular_law_scaling", to_json(rep));
  else out.table("scaling", scaling_csv(rep));
  const auto curves = scaling_curves(rep);
  for (std::size_t k = 0; k < curves.size(); ++k) out.curve("scaling_a" + padded(k, 2) + ".dat", curves[k]);
}

void cmd_girko(const ojson& cfg, Outputs& out, int threads) {
  const auto seeds = seed_list(cfg);
  const TestFunction F = TestFunction::radial_bump(cplx(cfg, "z0"), real(cfg, "a"), real(cfg, "radius"));
  std::vector<GirkoRichardson> results;
  {
    Stage s(out, "compute");
    for (std::uint64_t seed : seeds)
      results.push_back(girko_richardson(sample_matrix({kind_of(cfg), integer(cfg, "N"), seed}), F,
                                         real(cfg, "grid_h"), threads));
  }
  Stage s(out, "write");
  if (out.json) {
    ojson list = ojson::array();
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      ojson r = to_json(results[k]);
      r["seed"] = seeds[k];
      list.push_back(r);
    }
    out.document("girko", "girko", {{"results", list}});
    return;
  }
  CsvTable t{{"seed", "h", "lhs", "rhs", "residual", "fine_residual", "ratio", "extrapolated_over_raw", "nodes",
              "perturbed_nodes"},
             {}};
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const auto& r = results[k];
    t.rows.push_back({std::to_string(seeds[k]), format_number(r.coarse.h), format_number(r.coarse.lhs),
                      format_number(r.coarse.rhs), format_number(r.coarse.residual), format_number(r.fine.residual),
                      format_number(r.ratio), format_number(r.extrapolated_over_raw), std::to_string(r.coarse.nodes),
                      std::to_string(r.coarse.perturbed_nodes + r.fine.perturbed_nodes)});
  }
  out.table("girko", t);
}

void cmd_rigidity(const ojson& cfg, Outputs& out, int threads) {
  RigidityScaling rs;
  {
    Stage s(out, "compute");
    rs = rigidity_scaling(kind_of(cfg), cplx(cfg, "z"), index_list(cfg, "Ns"), seed_list(cfg), threads);
  }
  Stage s(out, "write");
  if (out.json) {
    out.document("rigidity", "rigidity", to_json(rs));
    return;
  }
  for (const auto& rep : rs.reports) out.table("rigidity_N" + std::to_string(rep.spec.N), rigidity_csv(rep));
  out.table("rigidity_scaling", rigidity_scaling_csv(rs));
}

void cmd_minors(const ojson& cfg, Outputs& out) {
  const Complex w = cplx(cfg, "w");
  IdentityReport rep;
  {
    Stage s(out, "compute");
    const SampleMatrix x = sample_matrix({kind_of(cfg), integer(cfg, "N"), cfg.at("seed").get<std::uint64_t>()});
    rep = identity_suite(x, cplx(cfg, "z"), {w.real(), w.imag()});
  }
  Stage s(out, "write");
  const ojson body = to_json(rep);
  out.document("minors", "identity_suite", body);
  if (!out.json) {
    ojson flat = body;
    flat["z"] = format_complex(rep.z);
    out.table("minors", key_value_csv(flat));
  }
}

void cmd_ginibre_oracle(const ojson& cfg, Outputs& out, int threads) {
  const Index N = integer(cfg, "N");
  const TestFunction tf = TestFunction::radial_bump(cplx(cfg, "z0"), real(cfg, "a"), real(cfg, "radius"));
  const auto seeds = seed_list(cfg);
  ojson flat;
  {
    Stage s(out, "compute");
    std::vector<double> stats(seeds.size());
    parallel_for(static_cast<std::ptrdiff_t>(seeds.size()), threads, [&](std::ptrdiff_t k) {
      stats[k] = local_stat(nonhermitian_spectrum(sample_matrix({EnsembleKind::GinibreComplex, N, seeds[k]})), tf);
    });
    const double expected = ginibre_expected_local_stat(tf, N);
    const double m = mean(stats);
    const double se = stats.size() > 1 ? standard_error(stats) : std::numeric_limits<double>::quiet_NaN();
    flat = {{"N", N},
            {"z0", cfg.at("z0")},
            {"a", tf.a},
            {"seeds", seeds.size()},
            {"expected_local_stat", expected},
            {"disk_integral", disk_integral(tf, N)},
            {"intensity_mass_over_N", ginibre_intensity_mass(N) / static_cast<double>(N)},
            {"mean_local_stat", m},
            {"se_local_stat", se},
            {"z_score", (m - expected) / se}};
  }
  Stage s(out, "write");
  if (out.json) out.document("ginibre_oracle", "ginibre_oracle", flat);
  else out.table("ginibre_oracle", key_value_csv(flat));
}

void cmd_smallest(const ojson& cfg, Outputs& out, int threads) {
  SmallestSVReport rep;
  {
    Stage s(out, "compute");
    rep = smallest_eigenvalue_stats({kind_of(cfg), integer(cfg, "N"), 0}, cplx(cfg, "z"), seed_list(cfg), threads);
  }
  Stage s(out, "write");
  if (out.json) {
    out.document("smallest", "smallest_eigenvalue", to_json(rep));
    return;
  }
  out.table("smallest", smallest_csv(rep));
  out.table("smallest_summary", key_value_csv({{"N", rep.spec.N},
                                               {"z", format_complex(rep.z)},
                                               {"median_n2_lambda1", rep.median_n2_lambda1},
                                               {"fraction_log_bounded", rep.fraction_log_bounded}}));
}

// --- flags -----------------------------------------------------------------------------

std::string flag_of(const std::string& key) {
  std::string f = key;
  for (char& c : f)
    if (c == '_') c = '-';
  return "--" + f;
}

ojson parse_flag_value(const std::string& key, const ojson& def, const std::vector<std::string>& raw) {
  auto one = [&](const std::string& s) -> ojson {
    if (def.is_number_integer() || (def.is_array() && !def.empty() && def[0].is_number_integer()))
      return std::stoll(s);
    if (def.is_number() || def.is_null() || def.is_array()) return std::stod(s);
    return s;
  };
  if (key == "seeds") {
    if (raw.size() == 1) return std::stoll(raw[0]);
    ojson list = ojson::array();
    for (const auto& s : raw) list.push_back(std::stoull(s));
    return list;
  }
  if (def.is_array()) {
    ojson list = ojson::array();
    for (const auto& s : raw) list.push_back(one(s));
    return list;
  }
  if (raw.size() != 1) throw std::invalid_argument(flag_of(key) + " takes a single value");
  return one(raw[0]);
}

ojson read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot read config file " + path);
  try {
    return ojson::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config file " + path + " is not valid JSON: " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"density", "mc",    "grid-sweep",     "circular", "girko",
                                              "rigidity", "minors", "ginibre-oracle", "smallest"};
  return names;
}

ojson default_config(std::string_view command) {
  if (command == "density")
    return with_tail({{"z", "0"}, {"xmin", 0.0}, {"xmax", nullptr}, {"points", 401}, {"N", 512}});
  if (command == "mc") return with_tail({{"z", "0.5"}, {"w", "1+0.1i"}});
  if (command == "grid-sweep")
    return with_tail({{"ensemble", "ginibre-complex"},
                      {"N", 1024},
                      {"z", "0.5"},
                      {"alpha", 0.0},
                      {"nE", 40},
                      {"neta", 40},
                      {"entry_points", 32},
                      {"seed0", 1},
                      {"seeds", 20}});
  if (command == "circular")
    return with_tail({{"ensemble", "ginibre-complex"},
                      {"z0", kDefaultZ0},
                      {"a", {0.25}},
                      {"Ns", {256, 512, 1024}},
                      {"radius", 1.0},
                      {"seed0", 1},
                      {"seeds", 20}});
  if (command == "girko")
    return with_tail({{"ensemble", "ginibre-real"},
                      {"N", 64},
                      {"z0", "0"},
                      {"a", 0.0},
                      {"radius", 0.4},
                      {"grid_h", 0.02},
                      {"seed0", 1},
                      {"seeds", 1}});
  if (command == "rigidity")
    return with_tail({{"ensemble", "ginibre-complex"}, {"z", "0.5"}, {"Ns", {256, 512, 1024}}, {"seed0", 1}, {"seeds", 20}});
  if (command == "minors")
    return with_tail({{"ensemble", "ginibre-complex"}, {"N", 50}, {"seed", 1}, {"z", "0.5"}, {"w", "1+0.1i"}});
  if (command == "ginibre-oracle")
    return with_tail({{"N", 512}, {"z0", kDefaultZ0}, {"a", 0.25}, {"radius", 1.0}, {"seed0", 1}, {"seeds", 20}});
  if (command == "smallest")
    return with_tail({{"ensemble", "ginibre-complex"}, {"N", 512}, {"z", "0.5"}, {"seed0", 1}, {"seeds", 200}});
  throw std::invalid_argument("unknown command '" + std::string(command) + "'");
}

ojson resolve_config(std::string_view command, const ojson& file, const ojson& overrides) {
  ojson cfg = default_config(command);
  auto merge = [&](const ojson& src, const char* origin) {
    if (src.is_null()) return;
    if (!src.is_object()) throw std::invalid_argument(std::string(origin) + " must be a JSON object");
    for (const auto& [k, v] : src.items()) {
      if (k == "command") {
        if (v != std::string(command))
          throw std::invalid_argument(std::string(origin) + " is for command '" + v.dump() + "', not '" +
                                      std::string(command) + "'");
        continue;
      }
      if (!cfg.contains(k))
        throw std::invalid_argument("unknown key '" + k + "' for command " + std::string(command));
      cfg[k] = v;
    }
  };
  merge(file, "config file");
  merge(overrides, "flags");

  // Keys whose default is a list also accept a scalar.
  const ojson defaults = default_config(command);
  for (const char* key : {"a", "Ns"})
    if (cfg.contains(key) && defaults[key].is_array() && !cfg[key].is_array()) cfg[key] = ojson::array({cfg[key]});
  for (const char* key : {"z", "z0", "w"})
    if (cfg.contains(key)) (void)cplx(cfg, key);
  if (cfg.contains("ensemble")) (void)parse_ensemble_kind(cfg["ensemble"].get<std::string>());
  const std::string format = cfg.at("format").get<std::string>();
  if (format != "csv" && format != "json") throw std::invalid_argument("format must be csv or json");
  if (cfg.contains("seeds") && seed_list(cfg).empty()) throw std::invalid_argument("at least one seed is required");
  if (command == "density" && cfg["xmax"].is_null()) cfg["xmax"] = make_shift_context(cplx(cfg, "z")).lambda_plus;

  ojson out = {{"command", std::string(command)}};
  for (const auto& [k, v] : cfg.items()) out[k] = v;
  return out;
}

int run(const ojson& cfg, std::ostream& err) {
  const std::string command = cfg.at("command").get<std::string>();
  const int threads = resolve_threads(cfg.at("threads").get<int>());
  Outputs out;
  out.dir = cfg.at("out").get<std::string>();
  out.json = cfg.at("format") == "json";
  fs::create_directories(out.dir);

  ojson manifest = {{"schema_version", kSchemaVersion},
                    {"tool", "lcl"},
                    {"version", LCL_VERSION},
                    {"status", "running"},
                    {"rng", std::string(kRngAlgorithm)},
                    {"threads", threads},
                    {"config", cfg},
                    {"stages", ojson::array()},
                    {"files", ojson::object()}};
  write_atomic(out.dir / "config.json", dump_json(cfg));
  write_atomic(out.dir / "manifest.json", dump_json(manifest));

  int code = kExitOk;
  try {
    if (command == "density") cmd_density(cfg, out);
    else if (command == "mc") cmd_mc(cfg, out);
    else if (command == "grid-sweep") cmd_grid_sweep(cfg, out, threads);
    else if (command == "circular") cmd_circular(cfg, out, threads);
    else if (command == "girko") cmd_girko(cfg, out, threads);
    else if (command == "rigidity") cmd_rigidity(cfg, out, threads);
    else if (command == "minors") cmd_minors(cfg, out);
    else if (command == "ginibre-oracle") cmd_ginibre_oracle(cfg, out, threads);
    else if (command == "smallest") cmd_smallest(cfg, out, threads);
    else throw std::invalid_argument("unknown command '" + command + "'");
  } catch (const HypothesisError& e) {
    err << "lcl " << command << ": " << e.what() << "\n";
    manifest["error"] = e.what();
    code = kExitHypothesis;
  } catch (const NumericError& e) {
    err << "lcl " << command << ": numeric failure: " << e.what() << "\n";
    manifest["error"] = e.what();
    code = kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "lcl " << command << ": " << e.what() << "\n";
    manifest["error"] = e.what();
    code = kExitUsage;
  } catch (const std::exception& e) {
    err << "lcl " << command << ": " << e.what() << "\n";
    manifest["error"] = e.what();
    code = kExitNumeric;
  }
  manifest["status"] = code == kExitOk ? "complete" : "failed";
  manifest["stages"] = out.stages;
  manifest["files"] = out.files;
  write_atomic(out.dir / "manifest.json", dump_json(manifest));
  return code;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Local circular law experiments: limiting objects, local-law sweeps and circular-law checks."};
  app.set_version_flag("--version", std::string(LCL_VERSION));
  app.require_subcommand(0, 1);
  std::string top_config;
  app.add_option("--config", top_config, "JSON config file (must name its command)");

  std::map<std::string, std::string> config_paths;
  std::map<std::string, std::map<std::string, std::vector<std::string>>> raw;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_paths[name], "JSON config file; flags override its values");
    const ojson defaults = default_config(name);
    for (const auto& [key, def] : defaults.items()) {
      auto* opt = sub->add_option(flag_of(key), raw[name][key], "default: " + def.dump());
      opt->delimiter(',');
      if (key == "seed") opt->description("single seed for the sampled matrix");
    }
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    std::string command;
    std::string config_path = top_config;
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) {
        command = name;
        if (!config_paths[name].empty()) config_path = config_paths[name];
      }
    ojson file;
    if (!config_path.empty()) file = read_config_file(config_path);
    if (command.empty()) {
      if (!file.is_object() || !file.contains("command"))
        throw std::invalid_argument("no command given (pass a subcommand or a config with \"command\")");
      command = file["command"].get<std::string>();
      if (!subs.count(command)) throw std::invalid_argument("unknown command '" + command + "'");
    }
    ojson overrides = ojson::object();
    const ojson defaults = default_config(command);
    for (const auto& [key, values] : raw[command])
      if (subs[command]->count(flag_of(key)) > 0) overrides[key] = parse_flag_value(key, defaults.at(key), values);
    return run(resolve_config(command, file, overrides), std::cerr);
  } catch (const std::invalid_argument& e) {
    std::cerr << "lcl: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "lcl: bad value: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "lcl: bad config value: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace lcl
