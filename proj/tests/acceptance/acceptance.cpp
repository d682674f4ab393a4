// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Seeds are pinned; every number printed is reproducible.
//
//   acceptance <path-to-cli> [criterion numbers...]
#include "gilbert/engine.hpp"
#include "gilbert/error.hpp"
#include "gilbert/functionals.hpp"
#include "gilbert/oracle.hpp"
#include "gilbert/pointproc.hpp"
#include "gilbert/stabilize.hpp"
#include "gilbert/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace gilbert;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMaster = 20240917;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Rng rng_for(std::uint64_t criterion, std::uint64_t trial) {
  return Rng(substream_seed(kMaster, trial, 1000 + criterion));
}

double uniform(Rng& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

// m seeds, uniform positions in [0, 10]^2 and uniform marks.
MarkedConfig random_config(Rng& rng, int m) {
  MarkedConfig c;
  for (int i = 0; i < m; ++i) {
    c.points.push_back({{uniform(rng, 0, 10), uniform(rng, 0, 10)}, uniform_mark(rng), static_cast<SeedId>(i)});
  }
  return c;
}

// ---- 1: engine against both oracles ----

Outcome engine_oracle() {
  int fp_bad = 0, ts_bad = 0, class_bad = 0, skipped = 0;
  double worst_fp = 0.0, worst_ts = 0.0;
  constexpr int kConfigs = 1000;
  for (int k = 0; k < kConfigs; ++k) {
    Rng rng = rng_for(1, k);
    const int m = std::uniform_int_distribution<int>(1, 12)(rng);
    const MarkedConfig c = random_config(rng, m);
    oracle::LengthTable engine, fixed, stepped;
    try {
      engine = oracle::lengths_of(build(c));
      fixed = oracle::build_fixedpoint(c);
      stepped = oracle::build_timestep(c, 1e-4);
    } catch (const DegenerateConfiguration&) {
      ++skipped;
      continue;
    }
    for (std::size_t b = 0; b < engine.size(); ++b) {
      const ExtLength e = engine[b];
      if (e.is_infinite() != fixed[b].is_infinite() || e.is_infinite() != stepped[b].is_infinite()) {
        ++class_bad;
        continue;
      }
      if (e.is_infinite()) continue;
      const double rel = std::abs(fixed[b].finite_value() - e.finite_value()) / e.finite_value();
      const double abs_ts = std::abs(stepped[b].finite_value() - e.finite_value());
      worst_fp = std::max(worst_fp, rel);
      worst_ts = std::max(worst_ts, abs_ts);
      if (rel > 1e-9) ++fp_bad;
      if (abs_ts > 5e-4) ++ts_bad;
    }
  }
  return {fp_bad == 0 && ts_bad == 0 && class_bad == 0 && skipped == 0,
          fmt("%d configs, degenerate %d; fixed-point worst rel %.2e (%d bad); time-stepping worst abs %.2e "
              "(%d bad); classification mismatches %d",
              kConfigs, skipped, worst_fp, fp_bad, worst_ts, ts_bad, class_bad)};
}

// ---- 2: partial tessellations with and without y differ only near y ----

Outcome containment() {
  int violations = 0, checked = 0;
  double worst = -1e300;
  constexpr int kConfigs = 200;
  for (int k = 0; k < kConfigs; ++k) {
    Rng rng = rng_for(2, k);
    const int m = std::uniform_int_distribution<int>(1, 30)(rng);
    const MarkedConfig base = random_config(rng, m);
    const Vec2 y{uniform(rng, 0, 10), uniform(rng, 0, 10)};
    const MarkedConfig with_y = add_point(base, y, {1.0, kMaster, static_cast<std::uint64_t>(k)});
    const Tessellation tb = build(base);
    const Tessellation ty = build(with_y);
    for (int j = 1; j <= 20; ++j) {
      const double t = 0.6 * j;
      const auto sb = partial_tessellation(tb, t);
      const auto sy = partial_tessellation(ty, t);
      auto probe = [&](Vec2 a, Vec2 b) {
        for (int q = 0; q <= 10; ++q) {
          const Vec2 p = a + (q / 10.0) * (b - a);
          const double excess = distance(p, y) - t;
          worst = std::max(worst, excess);
          ++checked;
          if (excess > 1e-6) ++violations;
        }
      };
      // Same branch in both: one segment is a prefix of the other, and the
      // difference is the stretch between the two tips.
      for (std::size_t s = 0; s < sb.size(); ++s) {
        if (!(sb[s].to == sy[s].to)) probe(sb[s].to, sy[s].to);
      }
      // The inserted seed's own branches.
      for (std::size_t s = sb.size(); s < sy.size(); ++s) probe(sy[s].from, sy[s].to);
    }
  }
  return {violations == 0, fmt("%d configs x 20 times, %d sampled points of the difference, max |p - y| - t = "
                               "%.3g, violations %d",
                               kConfigs, checked, worst, violations)};
}

// ---- 3: restriction and outside insertion leave xi unchanged ----

struct Picked {
  MarkedConfig config;
  SeedId seed = 0;
  ExtLength plus, minus;
  double radius = 0.0;
};

// A Poisson sample in [0, 20]^2 and one of its points with finite branches.
Picked pick(int trial, int criterion) {
  const MarkedConfig c = sample_poisson(Rect{0, 0, 20, 20}, {1.0, kMaster + criterion, static_cast<std::uint64_t>(trial)});
  const Tessellation t = build(c);
  Rng rng = rng_for(criterion, trial);
  for (;;) {
    const auto& p = c.points[std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(rng)];
    const ExtLength lp = t.length(p.id, Sign::Plus), lm = t.length(p.id, Sign::Minus);
    if (lp.is_finite() && lm.is_finite()) {
      return {c, p.id, lp, lm, 2.0 * std::max(lp.finite_value(), lm.finite_value())};
    }
  }
}

Outcome locality() {
  int restrict_bad = 0, insert_bad = 0;
  std::size_t dropped = 0, added = 0;
  constexpr int kTrials = 500;
  for (int k = 0; k < kTrials; ++k) {
    const Picked pk = pick(k, 3);
    const Vec2 x = pk.config.points[build(pk.config).index_of(pk.seed)].position;
    const Ball ball{x, pk.radius};

    MarkedConfig restricted;
    for (const MarkedPoint& p : pk.config.points) {
      if (ball.contains(p.position)) restricted.points.push_back(p);
    }
    dropped += pk.config.size() - restricted.size();
    const Tessellation tr = build(restricted);
    if (!(tr.length(pk.seed, Sign::Plus) == pk.plus) || !(tr.length(pk.seed, Sign::Minus) == pk.minus)) ++restrict_bad;

    Rng rng = rng_for(30, k);
    MarkedConfig extended = pk.config;
    const int n_new = std::uniform_int_distribution<int>(1, 40)(rng);
    SeedId next = 1000000;
    while (static_cast<int>(extended.size() - pk.config.size()) < n_new) {
      // Anywhere in a box reaching 20 past the ball.
      const double reach = pk.radius + 20.0;
      const Vec2 q{x.x + uniform(rng, -reach, reach), x.y + uniform(rng, -reach, reach)};
      if (ball.contains(q)) continue;
      extended.points.push_back({q, uniform_mark(rng), next++});
    }
    added += static_cast<std::size_t>(n_new);
    const Tessellation te = build(extended);
    if (!(te.length(pk.seed, Sign::Plus) == pk.plus) || !(te.length(pk.seed, Sign::Minus) == pk.minus)) ++insert_bad;
  }
  return {restrict_bad == 0 && insert_bad == 0,
          fmt("%d restriction trials (%zu points dropped), %d insertion trials (%zu points added); "
              "changed values: %d restriction, %d insertion",
              kTrials, dropped, kTrials, added, restrict_bad, insert_bad)};
}

// ---- 4: certified whole-plane values survive outside points ----

Outcome certification() {
  constexpr int kWanted = 500;
  constexpr std::uint64_t kResampleStride = std::uint64_t{1} << 48;
  int certified = 0, uncertified = 0, changed = 0;
  for (std::uint64_t i = 0; certified < kWanted; ++i) {
    const ProcessParams p{1.0, kMaster + 4, i};
    const StabilizationResult r = whole_plane_xi({0, 0}, p, 64);
    if (!r.certified) {
      ++uncertified;
      continue;
    }
    ++certified;
    ProcessParams used = p;
    used.stream += static_cast<std::uint64_t>(r.resamples) * kResampleStride;
    const PoissonField field(used);
    MarkedConfig c;
    c.points = field.points_in(Ball{{0, 0}, static_cast<double>(r.rho_hat)});
    c.points.push_back({{0, 0}, inserted_mark(used, 0), kInsertedIdBase});
    Rng rng = rng_for(4, i);
    const double outer = r.rho_hat + 10.0;
    SeedId next = kInsertedIdBase + 1;
    for (int added = 0; added < 50;) {
      const Vec2 q{uniform(rng, -outer, outer), uniform(rng, -outer, outer)};
      const double d = norm(q);
      if (d <= r.radius || d > outer) continue;
      c.points.push_back({q, uniform_mark(rng), next++});
      ++added;
    }
    const Tessellation t = build(c);
    if (!(t.length(kInsertedIdBase, Sign::Plus) == r.xi_plus) || !(t.length(kInsertedIdBase, Sign::Minus) == r.xi_minus)) {
      ++changed;
    }
  }
  return {changed == 0, fmt("%d certified runs (%d uncertified skipped), 50 outside points each; changed %d",
                            certified, uncertified, changed)};
}

// ---- 5: stabilization radius tail ----

Outcome tail() {
  std::vector<double> grid;
  for (int k = 1; k <= 40; ++k) grid.push_back(0.5 * k);
  const TailReport report = stab_tail(1.0, grid, 2000, {1.0, kMaster + 5, 0}, 64);
  const TailFit fit = fit_exponential_tail(report, 0.01);
  return {fit.nonincreasing && fit.r_squared >= 0.9 && fit.slope < 0.0,
          fmt("n_rep 2000, certified %.4f; nonincreasing %s; fit on %zu points: slope %.4f, R^2 %.4f",
              report.certified_fraction, fit.nonincreasing ? "yes" : "no", fit.n_points, fit.slope,
              fit.r_squared)};
}

// ---- 6: law of large numbers ----

Outcome lln() {
  const Phi phi = Phi::total_length();
  const ProcessParams p{1.0, kMaster + 6, 0};
  const stats::EstimatorReport e = stats::estimate_E(1.0, phi, 20000, p, 64);
  const std::vector<double> lambdas{100, 400, 1600, 6400};
  const stats::Table table = stats::lln_experiment(1.0, phi, TestFunction::constant(1.0), lambdas, 100, p,
                                                   default_padding(1.0), e.estimate);
  std::string rows;
  bool monotone = true;
  double last = INFINITY, final_rel = 0.0;
  for (const stats::TableRow& row : table.rows) {
    const double dev = std::abs(row.estimate - row.target);
    if (dev > last) monotone = false;
    last = dev;
    final_rel = dev / row.target;
    rows += fmt(" %g:%.4f", row.lambda, dev);
  }

  // Threshold 0+ puts a unit atom on every point of the window.
  int mismatches = 0, realizations = 0;
  for (double lambda : lambdas) {
    for (std::uint64_t i = 0; i < 10; ++i) {
      const ProcessParams q{1.0, kMaster + 60, i};
      const EmpiricalMeasure m = empirical_measure(lambda, q, Phi::threshold_zero_plus(), default_padding(1.0));
      const double side = std::sqrt(lambda);
      const std::size_t count = PoissonField(q).points_in(Rect{0, 0, side, side}).size();
      const double mass = integrate(m, TestFunction::constant(1.0)).value;
      if (mass != static_cast<double>(count)) ++mismatches;
      ++realizations;
    }
  }
  return {monotone && final_rel <= 0.05 && mismatches == 0,
          fmt("E-hat %.4f (se %.4f); |mean - target| by lambda:%s; nonincreasing %s; final relative %.4f; "
              "count identity %d/%d exact",
              e.estimate, e.std_error, rows.c_str(), monotone ? "yes" : "no", final_rel, realizations - mismatches,
              realizations)};
}

// ---- 7: variance per point, two routes ----

Outcome variance() {
  const Phi phi = Phi::total_length();
  const std::vector<double> lambdas{400, 1600};
  const stats::Table table = stats::var_experiment(1.0, phi, TestFunction::constant(1.0), lambdas, 400,
                                                   {1.0, kMaster + 7, 0}, default_padding(1.0));
  const double v400 = table.rows[0].estimate, v1600 = table.rows[1].estimate;
  const double ladder_rel = std::abs(v400 - v1600) / v1600;

  const ProcessParams p{1.0, kMaster + 70, 0};
  const TailFit fit = stats::default_tail_fit(1.0, p, 64);
  const double r_max = stats::truncation_radius(fit, 1e-3);
  const stats::VarianceReport v = stats::estimate_V(1.0, phi, r_max, 4, 48, 2000, p, 64, fit);
  const double route_rel = std::abs(v.total.estimate - v1600) / v1600;
  const double z = v.total.estimate / v.total.std_error;
  return {ladder_rel <= 0.15 && route_rel <= 0.2 && z >= 3.0,
          fmt("replicate route %.4f (lambda 400) vs %.4f (lambda 1600), differ %.1f%%; pair-correlation route "
              "%.4f (se %.4f, r_max %.2f) differs %.1f%% from %.4f; V / se = %.2f",
              v400, v1600, 100 * ladder_rel, v.total.estimate, v.total.std_error, r_max, 100 * route_rel, v1600,
              z)};
}

// ---- 8: central limit theorem ----

Outcome clt() {
  const Phi phi = Phi::total_length();
  const ProcessParams p{1.0, kMaster + 8, 0};
  const auto one = stats::clt_experiment(1.0, phi, TestFunction::constant(1.0), 1600, 300, p, default_padding(1.0));
  const auto cos = stats::clt_experiment(1.0, phi, TestFunction::cos_mode(1, 1), 1600, 300, p, default_padding(1.0));
  return {one.p_value >= 0.01 && cos.p_value >= 0.01,
          fmt("lambda 1600, n_rep 300: f=1 KS %.4f p %.4f; f=cos(pi x)cos(pi y) KS %.4f p %.4f", one.ks_statistic,
              one.p_value, cos.ks_statistic, cos.p_value)};
}

// ---- 9: homogeneity across intensities ----

Outcome scaling() {
  const std::vector<double> taus{0.5, 1.0, 2.0, 4.0};
  const stats::ScalingReport tl = stats::scaling_check(Phi::total_length(), taus, 4000, 300, {1.0, kMaster + 9, 0});
  const stats::ScalingReport ps = stats::scaling_check(Phi::power_sum(2.0), taus, 4000, 50, {1.0, kMaster + 90, 0});
  std::string rows;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    rows += fmt(" tau %g: %.4f/%.4f/%.3f;", taus[i], tl.rows[i].scaled_e, tl.rows[i].scaled_v, ps.rows[i].scaled_e);
  }
  return {tl.e_consistent && tl.v_consistent && ps.max_z_e <= 3.0,
          fmt("scaled E/V (length) and E (power 2):%s max z: E %.2f, V %.2f, power-2 E %.2f", rows.c_str(),
              tl.max_z_e, tl.max_z_v, ps.max_z_e)};
}

// ---- 10: manifests replay to identical bytes ----

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism(const std::string& cli) {
  const fs::path root = fs::temp_directory_path() / fmt("gilbert-acceptance-%d", static_cast<int>(::getpid()));
  fs::remove_all(root);
  const fs::path first = root / "first", second = root / "second";
  const std::vector<std::string> commands{
      "simulate --window 0 0 12 12 --tau 1 --svg --seed 5",
      "measure --lambda 400 --f cos --seed 5",
      "estimate-e --n-rep 300 --seed 5",
      "estimate-v --n-rep 30 --r-max 4 --n-angles 2 --n-radii 6 --seed 5",
      "lln --lambda 100 400 --n-rep 20 --target 2.37 --seed 5",
      "var --lambda 100 400 --n-rep 50 --seed 5",
      "clt --lambda 100 --n-rep 30 --seed 5",
      "scaling --tau 1 2 --n-rep-e 200 --n-rep-v 50 --points-per-window 100 --seed 5",
      "stab-tail --r 1 2 3 4 --n-rep 200 --seed 5",
  };
  int failures = 0;
  std::string notes;
  for (const std::string& c : commands) {
    const std::string run = "\"" + cli + "\" " + c + " --out-dir \"" + first.string() + "\" > /dev/null 2>&1";
    if (std::system(run.c_str()) != 0) {
      ++failures;
      notes += " [run failed: " + c + "]";
    }
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(first)) {
    const std::string name = entry.path().filename().string();
    if (!name.ends_with(".manifest.json")) continue;
    const std::string run = "\"" + cli + "\" replay \"" + entry.path().string() + "\" --out-dir \"" +
                            second.string() + "\" > /dev/null 2>&1";
    if (std::system(run.c_str()) != 0) {
      ++failures;
      notes += " [replay failed: " + name + "]";
    }
  }
  for (const auto& entry : fs::directory_iterator(first)) {
    const std::string name = entry.path().filename().string();
    // Manifests record their own output directory.
    if (name.ends_with(".manifest.json")) continue;
    ++compared;
    if (!fs::exists(second / name) || slurp(entry.path()) != slurp(second / name)) {
      ++failures;
      notes += " [differs: " + name + "]";
    }
  }
  fs::remove_all(root);
  return {failures == 0 && compared > 0,
          fmt("%zu commands replayed, %zu output files compared byte for byte, %d failures%s", commands.size(),
              compared, failures, notes.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <gilbert-cli> [criterion...]\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "engine matches fixed-point and time-stepping oracles", engine_oracle},
      {2, "insertion changes partial tessellations only within B(y, t)", containment},
      {3, "restriction and outside insertion leave branch lengths bit-identical", locality},
      {4, "certified whole-plane lengths survive outside points", certification},
      {5, "stabilization radius has an exponential-looking tail", tail},
      {6, "law of large numbers and the point-count identity", lln},
      {7, "variance per point: ladder stability and pair-correlation route", variance},
      {8, "standardized integrals are normal", clt},
      {9, "homogeneity of E and V across intensities", scaling},
      {10, "CLI manifests replay to identical bytes", [&] { return determinism(cli); }},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
