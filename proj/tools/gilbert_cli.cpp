// Command-line driver. Every subcommand is parsed into a JSON run config,
// executed through the C interface, and recorded in a manifest that
// `gilbert replay` executes again.

#include "gilbert/gilbert.h"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCheck = 3;

constexpr double kKsLevel = 0.01;

struct CliError {
  gilbert_status status;
  std::string message;
};

void check(gilbert_status s) {
  if (s != GILBERT_OK) throw CliError{s, gilbert_last_error()};
}

struct CString {
  char* p = nullptr;
  ~CString() { gilbert_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Free(p); }
};
using ConfigHandle = Handle<gilbert_config, gilbert_config_free>;
using TessHandle = Handle<gilbert_tessellation, gilbert_tessellation_free>;
using TableHandle = Handle<gilbert_table, gilbert_table_free>;

std::string read_text(const std::string& path) {
  CString s;
  check(gilbert_read_file(path.c_str(), &s.p));
  return s.str();
}

void write_text(const std::string& path, const std::string& content) {
  check(gilbert_write_file(path.c_str(), content.c_str()));
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

gilbert_process process_of(const json& cfg) {
  return {cfg.value("tau", 1.0), cfg.at("seed").get<std::uint64_t>(), cfg.value("stream", std::uint64_t{0})};
}

std::string output_path(const json& cfg, const std::string& suffix) {
  const std::filesystem::path dir = cfg.at("out_dir").get<std::string>();
  return (dir / (cfg.at("prefix").get<std::string>() + suffix)).string();
}

json table_json(const gilbert_table* table) {
  json rows = json::array();
  for (size_t i = 0; i < gilbert_table_size(table); ++i) {
    gilbert_table_row r;
    check(gilbert_table_row_at(table, i, &r));
    rows.push_back({{"lambda", r.lambda},
                    {"estimate", r.estimate},
                    {"std_error", r.std_error},
                    {"target", r.target},
                    {"n_rep", r.n_rep},
                    {"certified_fraction", r.certified_fraction},
                    {"master_seed", r.master_seed}});
  }
  return rows;
}

std::string table_csv(const gilbert_table* table) {
  CString s;
  check(gilbert_table_csv(table, &s.p));
  return s.str();
}

// ---- commands: each takes the run config, writes its outputs and returns
// whether the optional acceptance check passed.

struct Outcome {
  json report;
  bool check_passed = true;
};

Outcome run_simulate(const json& cfg) {
  ConfigHandle config;
  if (cfg.contains("seeds_file")) {
    check(gilbert_config_from_json(read_text(cfg["seeds_file"].get<std::string>()).c_str(), &config.p));
  } else {
    const auto w = cfg.at("window").get<std::vector<double>>();
    check(gilbert_config_sample(w[0], w[1], w[2], w[3], process_of(cfg), &config.p));
  }
  TessHandle tess;
  check(gilbert_build(config.p, cfg.value("lexicographic_ties", false) ? 1 : 0, &tess.p));
  CString text;
  check(gilbert_tessellation_json(tess.p, &text.p));
  write_text(output_path(cfg, ".json"), text.str());
  if (cfg.value("svg", false)) {
    double x0 = 0, y0 = 0, w = 0, h = 0;
    if (cfg.contains("window")) {
      const auto win = cfg["window"].get<std::vector<double>>();
      x0 = win[0], y0 = win[1], w = win[2], h = win[3];
    }
    CString svg;
    check(gilbert_tessellation_svg(tess.p, x0, y0, w, h, &svg.p));
    write_text(output_path(cfg, ".svg"), svg.str());
  }
  return {{{"seeds", gilbert_tessellation_seed_count(tess.p)}, {"events", gilbert_event_count(tess.p)}}, true};
}

Outcome run_measure(const json& cfg) {
  const std::string phi = cfg.at("phi"), f = cfg.at("f");
  gilbert_measure_info info;
  check(gilbert_measure(process_of(cfg), phi.c_str(), f.c_str(), cfg.at("lambda"), cfg.value("padding", -1.0), &info));
  json report = {{"lambda", info.lambda},
                 {"atoms", info.atoms},
                 {"certified_fraction", info.certified_fraction},
                 {"excluded", info.excluded},
                 {"value", info.value},
                 {"certified_value", info.certified_value}};
  write_text(output_path(cfg, ".csv"),
             "lambda,atoms,certified_fraction,excluded,value,certified_value\n" + fmt(info.lambda) + "," +
                 std::to_string(info.atoms) + "," + fmt(info.certified_fraction) + "," +
                 std::to_string(info.excluded) + "," + fmt(info.value) + "," + fmt(info.certified_value) + "\n");
  return {report, true};
}

Outcome run_estimate_e(const json& cfg) {
  const std::string phi = cfg.at("phi");
  const gilbert_process proc = process_of(cfg);
  gilbert_estimate e;
  check(gilbert_estimate_e(proc, phi.c_str(), cfg.at("n_rep"), cfg.value("m_max", 64), &e));
  write_text(output_path(cfg, ".csv"), "intensity,estimate,std_error,n_rep,certified_fraction,excluded,master_seed\n" +
                                           fmt(proc.intensity) + "," + fmt(e.estimate) + "," + fmt(e.std_error) + "," +
                                           std::to_string(e.n_rep) + "," + fmt(e.certified_fraction) + "," +
                                           std::to_string(e.excluded) + "," + std::to_string(proc.master_seed) + "\n");
  return {{{"estimate", e.estimate},
           {"std_error", e.std_error},
           {"n_rep", e.n_rep},
           {"certified_fraction", e.certified_fraction},
           {"excluded", e.excluded}},
          true};
}

Outcome run_estimate_v(const json& cfg) {
  const std::string phi = cfg.at("phi");
  const gilbert_process proc = process_of(cfg);
  gilbert_variance v;
  check(gilbert_estimate_v(proc, phi.c_str(), cfg.value("r_max", 0.0), cfg.at("n_angles"), cfg.at("n_radii"),
                           cfg.at("n_rep"), cfg.value("m_max", 64), &v));
  write_text(output_path(cfg, ".csv"),
             "intensity,estimate,std_error,c0,c0_se,integral,integral_se,coarse_estimate,r_max,truncation_bound,n_rep,"
             "master_seed\n" +
                 fmt(proc.intensity) + "," + fmt(v.estimate) + "," + fmt(v.std_error) + "," + fmt(v.c0) + "," +
                 fmt(v.c0_se) + "," + fmt(v.integral) + "," + fmt(v.integral_se) + "," + fmt(v.coarse_estimate) + "," +
                 fmt(v.r_max) + "," + fmt(v.truncation_bound) + "," + std::to_string(v.n_rep) + "," +
                 std::to_string(proc.master_seed) + "\n");
  const bool positive = v.estimate > 3.0 * v.std_error;
  return {{{"estimate", v.estimate},
           {"std_error", v.std_error},
           {"c0", v.c0},
           {"c0_se", v.c0_se},
           {"integral", v.integral},
           {"integral_se", v.integral_se},
           {"coarse_estimate", v.coarse_estimate},
           {"refinement_warning", v.refinement_warning != 0},
           {"r_max", v.r_max},
           {"truncation_bound", v.truncation_bound},
           {"positive_by_3se", positive}},
          positive};
}

Outcome run_table(const json& cfg, bool variance) {
  const std::string phi = cfg.at("phi"), f = cfg.at("f");
  const auto lambdas = cfg.at("lambda").get<std::vector<double>>();
  const double target = cfg.contains("target") ? cfg["target"].get<double>() : NAN;
  TableHandle table;
  auto run = variance ? gilbert_var : gilbert_lln;
  check(run(process_of(cfg), phi.c_str(), f.c_str(), lambdas.data(), lambdas.size(), cfg.at("n_rep"),
            cfg.value("padding", -1.0), target, &table.p));
  write_text(output_path(cfg, ".csv"), table_csv(table.p));
  json rows = table_json(table.p);
  json report = {{"rows", rows}};
  bool ok = !rows.empty();
  if (!variance && ok) {
    // Deviation from the target shrinks along the ladder and ends within 5%.
    double prev = INFINITY;
    for (const json& r : rows) {
      const double dev = std::abs(r["estimate"].get<double>() - r["target"].get<double>());
      ok = ok && dev <= prev;
      prev = dev;
    }
    const json& last = rows.back();
    const double rel = prev / std::abs(last["target"].get<double>());
    ok = ok && rel <= 0.05;
    report["final_relative_deviation"] = rel;
  }
  if (variance && rows.size() >= 2) {
    // Consecutive normalized variances within 15%.
    double worst = 0.0;
    for (size_t i = 1; i < rows.size(); ++i) {
      const double a = rows[i - 1]["estimate"], b = rows[i]["estimate"];
      worst = std::max(worst, std::abs(a - b) / std::max(a, b));
    }
    report["max_relative_change"] = worst;
    ok = worst <= 0.15;
  }
  return {report, ok};
}

Outcome run_clt(const json& cfg) {
  const std::string phi = cfg.at("phi"), f = cfg.at("f");
  const std::size_t n_rep = cfg.at("n_rep");
  std::vector<double> z(n_rep);
  gilbert_clt_info info;
  check(gilbert_clt(process_of(cfg), phi.c_str(), f.c_str(), cfg.at("lambda"), n_rep, cfg.value("padding", -1.0),
                    &info, z.data()));
  std::string csv = "index,standardized\n";
  for (std::size_t i = 0; i < z.size(); ++i) csv += std::to_string(i) + "," + fmt(z[i]) + "\n";
  write_text(output_path(cfg, ".csv"), csv);
  return {{{"ks_statistic", info.ks_statistic},
           {"p_value", info.p_value},
           {"mean", info.mean},
           {"variance", info.variance},
           {"n_rep", info.n_rep}},
          info.p_value >= kKsLevel};
}

Outcome run_scaling(const json& cfg) {
  const std::string phi = cfg.at("phi");
  const auto taus = cfg.at("tau").get<std::vector<double>>();
  gilbert_process proc = {1.0, cfg.at("seed").get<std::uint64_t>(), cfg.value("stream", std::uint64_t{0})};
  std::vector<gilbert_scaling_row> rows(taus.size());
  gilbert_scaling_info info;
  check(gilbert_scaling(proc, phi.c_str(), taus.data(), taus.size(), cfg.at("n_rep_e"), cfg.at("n_rep_v"),
                        cfg.value("points_per_window", 1600.0), cfg.value("m_max", 64), rows.data(), &info));
  std::string csv = "intensity,scaled_e,scaled_e_se,scaled_v,scaled_v_se,lambda\n";
  for (const auto& r : rows) {
    csv += fmt(r.intensity) + "," + fmt(r.scaled_e) + "," + fmt(r.scaled_e_se) + "," + fmt(r.scaled_v) + "," +
           fmt(r.scaled_v_se) + "," + fmt(r.lambda) + "\n";
  }
  write_text(output_path(cfg, ".csv"), csv);
  return {{{"max_z_e", info.max_z_e},
           {"max_z_v", info.max_z_v},
           {"e_consistent", info.e_consistent != 0},
           {"v_consistent", info.v_consistent != 0}},
          info.e_consistent && info.v_consistent};
}

Outcome run_stab_tail(const json& cfg) {
  const auto grid = cfg.at("r").get<std::vector<double>>();
  std::vector<double> surv(grid.size()), se(grid.size());
  double cert = 0.0;
  gilbert_tail_fit fit;
  check(gilbert_stab_tail(process_of(cfg), grid.data(), grid.size(), cfg.at("n_rep"), cfg.value("m_max", 64),
                          surv.data(), se.data(), &cert, &fit));
  std::string csv = "r,survival,std_error\n";
  for (std::size_t i = 0; i < grid.size(); ++i) csv += fmt(grid[i]) + "," + fmt(surv[i]) + "," + fmt(se[i]) + "\n";
  write_text(output_path(cfg, ".csv"), csv);
  const bool ok = fit.nonincreasing && fit.r_squared >= 0.9 && fit.slope < 0.0;
  return {{{"slope", fit.slope},
           {"intercept", fit.intercept},
           {"r_squared", fit.r_squared},
           {"n_points", fit.n_points},
           {"rate", fit.rate},
           {"prefactor", fit.prefactor},
           {"nonincreasing", fit.nonincreasing != 0},
           {"certified_fraction", cert}},
          ok};
}

const std::map<std::string, std::function<Outcome(const json&)>>& commands() {
  static const std::map<std::string, std::function<Outcome(const json&)>> table = {
      {"simulate", run_simulate},
      {"measure", run_measure},
      {"estimate-e", run_estimate_e},
      {"estimate-v", run_estimate_v},
      {"lln", [](const json& c) { return run_table(c, false); }},
      {"var", [](const json& c) { return run_table(c, true); }},
      {"clt", run_clt},
      {"scaling", run_scaling},
      {"stab-tail", run_stab_tail},
  };
  return table;
}

// Executes a run config, writes report and manifest, returns the exit code.
int execute(const std::string& command, json cfg) {
  std::filesystem::create_directories(cfg.at("out_dir").get<std::string>());
  const Outcome outcome = commands().at(command)(cfg);
  json report = outcome.report;
  report["command"] = command;
  report["config"] = cfg;
  // Results must not depend on where they are written.
  report["config"].erase("out_dir");
  if (command != "simulate") write_text(output_path(cfg, ".report.json"), dump(report));
  const json manifest = {{"tool", "gilbert"}, {"version", gilbert_version()}, {"command", command}, {"config", cfg}};
  write_text(output_path(cfg, ".manifest.json"), dump(manifest));
  std::cout << dump(outcome.report);
  if (cfg.value("check", false) && !outcome.check_passed) {
    std::cerr << "check failed\n";
    return kExitCheck;
  }
  return kExitOk;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GILBERT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("GILBERT_SEED", std::string("not an unsigned integer: ") + env);
    }
  }
  return 1;
}

struct Common {
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::string out_dir = ".";
  std::string prefix;
  bool check = false;
};

void add_common(CLI::App* app, Common& c, bool with_check) {
  app->add_option("--seed", c.seed, "Master seed (default: $GILBERT_SEED or 1)");
  app->add_option("--stream", c.stream, "First stream index");
  app->add_option("--out-dir", c.out_dir, "Directory for output files");
  app->add_option("--prefix", c.prefix, "Output file name stem (default: the command name)");
  if (with_check) app->add_flag("--check", c.check, "Exit 3 when the acceptance check fails");
}

json common_json(const Common& c, const std::string& command) {
  json j = {{"seed", c.seed}, {"stream", c.stream}, {"out_dir", c.out_dir}, {"prefix", c.prefix.empty() ? command : c.prefix}};
  if (c.check) j["check"] = true;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gilbert crack growth tessellations: simulation and Monte Carlo experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gilbert_version());

  Common common;
  try {
    common.seed = default_seed();
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  double tau = 1.0;
  std::string phi = "total-length";
  std::string f = "const1";
  std::size_t n_rep = 100;
  int m_max = 64;
  double padding = -1.0;
  double lambda = 1600.0;
  std::vector<double> lambdas;
  std::vector<double> taus;
  std::vector<double> window;
  std::vector<double> r_grid;
  std::optional<double> target;
  std::optional<double> r_max;
  std::string seeds_file;
  std::string replay_path;
  bool svg = false, ties = false;
  int n_angles = 4, n_radii = 48;
  std::size_t n_rep_e = 2000, n_rep_v = 200;
  double points_per_window = 1600.0;

  auto* sim = app.add_subcommand("simulate", "Build one tessellation: JSON lengths, optional SVG");
  auto* seeds_opt = sim->add_option("--seeds", seeds_file, "Seed file: JSON list of {x, y, alpha}");
  sim->add_option("--window", window, "Sampling window x0 y0 w h (Poisson input)")->expected(4);
  sim->add_option("--tau", tau, "Intensity for Poisson input");
  sim->add_flag("--svg", svg, "Also write an SVG render");
  sim->add_flag("--lexicographic-ties", ties, "Break exact ties by branch id");
  add_common(sim, common, false);

  auto* meas = app.add_subcommand("measure", "One empirical measure and its integral against f");
  meas->add_option("--tau", tau);
  meas->add_option("--lambda", lambda)->required();
  meas->add_option("--phi", phi);
  meas->add_option("--f", f);
  meas->add_option("--padding", padding);
  add_common(meas, common, false);

  auto* ee = app.add_subcommand("estimate-e", "Mass per point E(tau)");
  ee->add_option("--tau", tau);
  ee->add_option("--phi", phi);
  ee->add_option("--n-rep", n_rep);
  ee->add_option("--m-max", m_max);
  add_common(ee, common, false);

  auto* ev = app.add_subcommand("estimate-v", "Variance per point through pair correlations");
  ev->add_option("--tau", tau);
  ev->add_option("--phi", phi);
  ev->add_option("--r-max", r_max, "Truncation radius (default: from the stabilization tail)");
  ev->add_option("--n-angles", n_angles);
  ev->add_option("--n-radii", n_radii);
  ev->add_option("--n-rep", n_rep);
  ev->add_option("--m-max", m_max);
  add_common(ev, common, true);

  auto add_table_command = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--tau", tau);
    sub->add_option("--lambda", lambdas, "Increasing list of lambdas")->required();
    sub->add_option("--phi", phi);
    sub->add_option("--f", f);
    sub->add_option("--n-rep", n_rep);
    sub->add_option("--padding", padding);
    sub->add_option("--target", target, "Per-point E or V for the target column");
    add_common(sub, common, true);
    return sub;
  };
  auto* lln = add_table_command("lln", "Law of large numbers table over a lambda ladder");
  auto* var = add_table_command("var", "Normalized variance table over a lambda ladder");

  auto* clt = app.add_subcommand("clt", "Standardized integrals and a KS test against N(0,1)");
  clt->add_option("--tau", tau);
  clt->add_option("--lambda", lambda);
  clt->add_option("--phi", phi);
  clt->add_option("--f", f);
  clt->add_option("--n-rep", n_rep);
  clt->add_option("--padding", padding);
  add_common(clt, common, true);

  auto* sc = app.add_subcommand("scaling", "Homogeneity check of E and V across intensities");
  sc->add_option("--phi", phi);
  sc->add_option("--tau", taus)->required();
  sc->add_option("--n-rep-e", n_rep_e);
  sc->add_option("--n-rep-v", n_rep_v);
  sc->add_option("--points-per-window", points_per_window);
  sc->add_option("--m-max", m_max);
  add_common(sc, common, true);

  auto* st = app.add_subcommand("stab-tail", "Survival of the stabilization radius with an exponential fit");
  st->add_option("--tau", tau);
  st->add_option("--r", r_grid, "Radius grid")->required();
  st->add_option("--n-rep", n_rep);
  st->add_option("--m-max", m_max);
  add_common(st, common, true);

  auto* rp = app.add_subcommand("replay", "Run a manifest again");
  rp->add_option("manifest", replay_path)->required();
  std::optional<std::string> replay_dir;
  rp->add_option("--out-dir", replay_dir, "Write outputs here instead of the recorded directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Error& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    std::string command;
    json cfg;
    if (rp->parsed()) {
      const json manifest = json::parse(read_text(replay_path));
      command = manifest.at("command").get<std::string>();
      cfg = manifest.at("config");
      if (!commands().contains(command)) throw CliError{GILBERT_ERR_DOMAIN, "unknown command in manifest: " + command};
      if (replay_dir) cfg["out_dir"] = *replay_dir;
      return execute(command, cfg);
    }

    CLI::App* sub = app.get_subcommands().front();
    command = sub->get_name();
    cfg = common_json(common, command);
    if (sub == sim) {
      if (seeds_opt->count() > 0) {
        cfg["seeds_file"] = seeds_file;
      } else if (window.empty()) {
        throw CliError{GILBERT_ERR_DOMAIN, "simulate needs --seeds or --window"};
      } else {
        cfg["tau"] = tau;
      }
      if (!window.empty()) cfg["window"] = window;
      if (svg) cfg["svg"] = true;
      if (ties) cfg["lexicographic_ties"] = true;
    } else if (sub == meas) {
      cfg.update({{"tau", tau}, {"lambda", lambda}, {"phi", phi}, {"f", f}, {"padding", padding}});
    } else if (sub == ee) {
      cfg.update({{"tau", tau}, {"phi", phi}, {"n_rep", n_rep}, {"m_max", m_max}});
    } else if (sub == ev) {
      cfg.update({{"tau", tau}, {"phi", phi}, {"n_angles", n_angles}, {"n_radii", n_radii}, {"n_rep", n_rep},
                  {"m_max", m_max}});
      if (r_max) cfg["r_max"] = *r_max;
    } else if (sub == lln || sub == var) {
      cfg.update({{"tau", tau}, {"lambda", lambdas}, {"phi", phi}, {"f", f}, {"n_rep", n_rep}, {"padding", padding}});
      if (target) cfg["target"] = *target;
    } else if (sub == clt) {
      cfg.update({{"tau", tau}, {"lambda", lambda}, {"phi", phi}, {"f", f}, {"n_rep", n_rep}, {"padding", padding}});
    } else if (sub == sc) {
      cfg.update({{"tau", taus}, {"phi", phi}, {"n_rep_e", n_rep_e}, {"n_rep_v", n_rep_v},
                  {"points_per_window", points_per_window}, {"m_max", m_max}});
    } else if (sub == st) {
      cfg.update({{"tau", tau}, {"r", r_grid}, {"n_rep", n_rep}, {"m_max", m_max}});
    }
    return execute(command, cfg);
  } catch (const CliError& e) {
    std::cerr << "error: " << gilbert_status_name(e.status) << ": " << e.message << "\n";
    return e.status == GILBERT_ERR_HARNESS || e.status == GILBERT_ERR_INTERNAL ? kExitFailure : kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed run config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
