#include "gilbert/gilbert.h"

#include "gilbert/engine.hpp"
#include "gilbert/error.hpp"
#include "gilbert/functionals.hpp"
#include "gilbert/io.hpp"
#include "gilbert/stabilize.hpp"
#include "gilbert/stats.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct gilbert_config {
  gilbert::MarkedConfig config;
};

struct gilbert_tessellation {
  gilbert::Tessellation tess;
};

struct gilbert_table {
  gilbert::stats::Table table;
};

namespace {

using namespace gilbert;

thread_local std::string last_error;

gilbert_status fail(gilbert_status status, const char* what) {
  last_error = what;
  return status;
}

// Runs `body`, mapping exceptions onto status codes.
template <class Body>
gilbert_status guarded(Body&& body) {
  try {
    body();
    last_error.clear();
    return GILBERT_OK;
  } catch (const DomainError& e) {
    return fail(GILBERT_ERR_DOMAIN, e.what());
  } catch (const DegenerateConfiguration& e) {
    return fail(GILBERT_ERR_DEGENERATE, e.what());
  } catch (const LookupError& e) {
    return fail(GILBERT_ERR_LOOKUP, e.what());
  } catch (const HarnessError& e) {
    return fail(GILBERT_ERR_HARNESS, e.what());
  } catch (const IoError& e) {
    return fail(GILBERT_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GILBERT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GILBERT_ERR_INTERNAL, e.what());
  }
}

gilbert_status null_arg() { return fail(GILBERT_ERR_NULL, "null handle or output pointer"); }

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ProcessParams to_params(const gilbert_process& p) { return {p.intensity, p.master_seed, p.stream}; }

Sign to_sign(int sign) {
  if (sign == 1) return Sign::Plus;
  if (sign == -1) return Sign::Minus;
  throw DomainError("sign must be +1 or -1");
}

int from_sign(Sign s) { return s == Sign::Plus ? 1 : -1; }

Phi parse_phi(const char* text) {
  if (!text) throw DomainError("phi name missing");
  return Phi::parse(text);
}

TestFunction parse_f(const char* text) {
  if (!text) throw DomainError("test function name missing");
  return TestFunction::parse(text);
}

void fill(const stats::EstimatorReport& r, gilbert_estimate* out) {
  *out = {r.estimate, r.std_error, r.n_rep, r.certified_fraction, r.excluded};
}

std::optional<double> optional_target(double v) {
  if (std::isnan(v)) return std::nullopt;
  return v;
}

}  // namespace

extern "C" {

const char* gilbert_version(void) { return "0.1.0"; }

const char* gilbert_last_error(void) { return last_error.c_str(); }

const char* gilbert_status_name(gilbert_status status) {
  switch (status) {
    case GILBERT_OK: return "ok";
    case GILBERT_ERR_DOMAIN: return "domain error";
    case GILBERT_ERR_DEGENERATE: return "degenerate configuration";
    case GILBERT_ERR_LOOKUP: return "lookup error";
    case GILBERT_ERR_HARNESS: return "harness error";
    case GILBERT_ERR_IO: return "i/o error";
    case GILBERT_ERR_INTERNAL: return "internal error";
    case GILBERT_ERR_NULL: return "null argument";
  }
  return "unknown status";
}

void gilbert_string_free(char* s) { std::free(s); }

gilbert_status gilbert_config_new(gilbert_config** out) {
  if (!out) return null_arg();
  return guarded([&] { *out = new gilbert_config{}; });
}

void gilbert_config_free(gilbert_config* config) { delete config; }

gilbert_status gilbert_config_add(gilbert_config* config, double x, double y, double alpha) {
  if (!config) return null_arg();
  return guarded([&] {
    if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("seed position must be finite");
    mark_to_direction(alpha);
    const SeedId id = config->config.points.size();
    config->config.points.push_back({{x, y}, alpha, id});
  });
}

gilbert_status gilbert_config_set_window(gilbert_config* config, double x0, double y0, double w, double h) {
  if (!config) return null_arg();
  return guarded([&] {
    if (!(w > 0.0) || !(h > 0.0)) throw DomainError("window needs positive width and height");
    config->config.window = Rect{x0, y0, w, h};
  });
}

size_t gilbert_config_size(const gilbert_config* config) { return config ? config->config.points.size() : 0; }

gilbert_status gilbert_config_from_json(const char* json, gilbert_config** out) {
  if (!json || !out) return null_arg();
  return guarded([&] { *out = new gilbert_config{io::config_from_json(json)}; });
}

gilbert_status gilbert_config_to_json(const gilbert_config* config, char** out) {
  if (!config || !out) return null_arg();
  return guarded([&] { *out = copy_string(io::config_to_json(config->config)); });
}

gilbert_status gilbert_config_sample(double x0, double y0, double w, double h, gilbert_process process,
                                     gilbert_config** out) {
  if (!out) return null_arg();
  return guarded([&] {
    const Rect rect{x0, y0, w, h};
    MarkedConfig config = sample_poisson(rect, to_params(process));
    config.window = rect;
    *out = new gilbert_config{std::move(config)};
  });
}

gilbert_status gilbert_config_seed(const gilbert_config* config, size_t index, double* x, double* y, double* alpha,
                                   uint64_t* id) {
  if (!config) return null_arg();
  return guarded([&] {
    if (index >= config->config.points.size()) throw LookupError("seed index out of range");
    const MarkedPoint& p = config->config.points[index];
    if (x) *x = p.position.x;
    if (y) *y = p.position.y;
    if (alpha) *alpha = p.mark;
    if (id) *id = p.id;
  });
}

gilbert_status gilbert_build(const gilbert_config* config, int lexicographic_ties, gilbert_tessellation** out) {
  if (!config || !out) return null_arg();
  return guarded([&] {
    BuildOptions options;
    options.lexicographic_ties = lexicographic_ties != 0;
    *out = new gilbert_tessellation{build(config->config, options)};
  });
}

void gilbert_tessellation_free(gilbert_tessellation* tess) { delete tess; }

size_t gilbert_tessellation_seed_count(const gilbert_tessellation* tess) { return tess ? tess->tess.seed_count() : 0; }

gilbert_status gilbert_branch_length(const gilbert_tessellation* tess, size_t index, int sign, double* out) {
  if (!tess || !out) return null_arg();
  return guarded([&] {
    if (index >= tess->tess.seed_count()) throw LookupError("seed index out of range");
    *out = tess->tess.length_at(index, to_sign(sign)).as_double();
  });
}

gilbert_status gilbert_branch_tip(const gilbert_tessellation* tess, size_t index, int sign, double t, double* x,
                                  double* y) {
  if (!tess || !x || !y) return null_arg();
  return guarded([&] {
    if (index >= tess->tess.seed_count()) throw LookupError("seed index out of range");
    const Vec2 p = tess->tess.tip(tess->tess.config().points[index].id, to_sign(sign), t);
    *x = p.x;
    *y = p.y;
  });
}

size_t gilbert_event_count(const gilbert_tessellation* tess) { return tess ? tess->tess.events().size() : 0; }

gilbert_status gilbert_event_at(const gilbert_tessellation* tess, size_t k, gilbert_event* out) {
  if (!tess || !out) return null_arg();
  return guarded([&] {
    const auto events = tess->tess.events();
    if (k >= events.size()) throw LookupError("event index out of range");
    const CollisionEvent& e = events[k];
    *out = {e.time,
            e.blocked.seed,
            from_sign(e.blocked.sign),
            e.blocker.seed,
            from_sign(e.blocker.sign),
            e.blocker_arrival,
            e.point.x,
            e.point.y};
  });
}

gilbert_status gilbert_tessellation_json(const gilbert_tessellation* tess, char** out) {
  if (!tess || !out) return null_arg();
  return guarded([&] { *out = copy_string(io::tessellation_json(tess->tess)); });
}

gilbert_status gilbert_tessellation_svg(const gilbert_tessellation* tess, double x0, double y0, double w, double h,
                                        char** out) {
  if (!tess || !out) return null_arg();
  return guarded([&] {
    Rect window = clip_window(tess->tess);
    if (w != 0.0 || h != 0.0) {
      if (!(w > 0.0) || !(h > 0.0)) throw DomainError("window needs positive width and height");
      window = Rect{x0, y0, w, h};
    }
    *out = copy_string(io::render_svg(tess->tess, window));
  });
}

gilbert_status gilbert_whole_plane_xi(double x, double y, gilbert_process process, int m_max, gilbert_xi* out) {
  if (!out) return null_arg();
  return guarded([&] {
    const StabilizationResult r = whole_plane_xi({x, y}, to_params(process), m_max);
    *out = {r.xi_plus.as_double(), r.xi_minus.as_double(), r.radius, r.rho_hat, r.certified ? 1 : 0, r.resamples};
  });
}

gilbert_status gilbert_measure(gilbert_process process, const char* phi, const char* f, double lambda,
                               double padding, gilbert_measure_info* out) {
  if (!out) return null_arg();
  return guarded([&] {
    const Phi p = parse_phi(phi);
    const TestFunction tf = parse_f(f);
    const double pad = padding >= 0.0 ? padding : default_padding(process.intensity);
    const EmpiricalMeasure mu = empirical_measure(lambda, to_params(process), p, pad);
    const IntegralReport ir = integrate(mu, tf);
    *out = {mu.atoms.size(), mu.certified_fraction, ir.excluded, ir.value, ir.certified_value, lambda};
  });
}

gilbert_status gilbert_estimate_e(gilbert_process process, const char* phi, size_t n_rep, int m_max,
                                  gilbert_estimate* out) {
  if (!out) return null_arg();
  return guarded([&] {
    fill(stats::estimate_E(process.intensity, parse_phi(phi), n_rep, to_params(process), m_max), out);
  });
}

gilbert_status gilbert_estimate_c0(gilbert_process process, const char* phi, size_t n_rep, int m_max,
                                   gilbert_estimate* out) {
  if (!out) return null_arg();
  return guarded([&] {
    fill(stats::estimate_c0(process.intensity, parse_phi(phi), n_rep, to_params(process), m_max), out);
  });
}

gilbert_status gilbert_estimate_cxy(gilbert_process process, const char* phi, double dx, double dy, size_t n_rep,
                                    int m_max, gilbert_estimate* out) {
  if (!out) return null_arg();
  return guarded([&] {
    fill(stats::estimate_cxy(process.intensity, parse_phi(phi), {dx, dy}, n_rep, to_params(process), m_max), out);
  });
}

gilbert_status gilbert_stab_tail(gilbert_process process, const double* r_grid, size_t n_r, size_t n_rep, int m_max,
                                 double* survival_out, double* std_error_out, double* certified_fraction,
                                 gilbert_tail_fit* fit_out) {
  if ((!r_grid && n_r > 0) || !survival_out) return null_arg();
  return guarded([&] {
    const TailReport tail = stab_tail(process.intensity, std::span(r_grid, n_r), n_rep, to_params(process), m_max);
    for (size_t i = 0; i < tail.points.size(); ++i) {
      survival_out[i] = tail.points[i].survival;
      if (std_error_out) std_error_out[i] = tail.points[i].std_error;
    }
    if (certified_fraction) *certified_fraction = tail.certified_fraction;
    if (fit_out) {
      const TailFit fit = fit_exponential_tail(tail);
      *fit_out = {fit.slope, fit.intercept, fit.r_squared, fit.n_points, fit.rate, fit.prefactor,
                  fit.nonincreasing ? 1 : 0};
    }
  });
}

gilbert_status gilbert_estimate_v(gilbert_process process, const char* phi, double r_max, int n_angles, int n_radii,
                                  size_t n_rep, int m_max, gilbert_variance* out) {
  if (!out) return null_arg();
  return guarded([&] {
    const Phi p = parse_phi(phi);
    const ProcessParams params = to_params(process);
    const TailFit fit = stats::default_tail_fit(process.intensity, params, m_max);
    if (!(r_max > 0.0)) r_max = stats::truncation_radius(fit);
    const stats::VarianceReport v =
        stats::estimate_V(process.intensity, p, r_max, n_angles, n_radii, n_rep, params, m_max, fit);
    *out = {v.total.estimate,
            v.total.std_error,
            v.total.n_rep,
            v.total.certified_fraction,
            v.c0.mean,
            v.c0.std_error,
            v.integral.mean,
            v.integral.std_error,
            v.coarse_estimate,
            v.refinement_warning ? 1 : 0,
            v.r_max,
            v.truncation_bound};
  });
}

void gilbert_table_free(gilbert_table* table) { delete table; }

size_t gilbert_table_size(const gilbert_table* table) { return table ? table->table.rows.size() : 0; }

gilbert_status gilbert_table_row_at(const gilbert_table* table, size_t i, gilbert_table_row* out) {
  if (!table || !out) return null_arg();
  return guarded([&] {
    if (i >= table->table.rows.size()) throw LookupError("row index out of range");
    const stats::TableRow& r = table->table.rows[i];
    *out = {r.lambda, r.estimate, r.std_error, r.target, r.n_rep, r.certified_fraction, r.master_seed};
  });
}

gilbert_status gilbert_table_csv(const gilbert_table* table, char** out) {
  if (!table || !out) return null_arg();
  return guarded([&] { *out = copy_string(io::table_csv(table->table)); });
}

gilbert_status gilbert_table_from_csv(const char* csv, gilbert_table** out) {
  if (!csv || !out) return null_arg();
  return guarded([&] { *out = new gilbert_table{io::table_from_csv(csv)}; });
}

gilbert_status gilbert_lln(gilbert_process process, const char* phi, const char* f, const double* lambdas,
                           size_t n_lambda, size_t n_rep, double padding, double target_per_point,
                           gilbert_table** out) {
  if (!out || (!lambdas && n_lambda > 0)) return null_arg();
  return guarded([&] {
    *out = new gilbert_table{stats::lln_experiment(process.intensity, parse_phi(phi), parse_f(f),
                                                   std::span(lambdas, n_lambda), n_rep, to_params(process), padding,
                                                   optional_target(target_per_point))};
  });
}

gilbert_status gilbert_var(gilbert_process process, const char* phi, const char* f, const double* lambdas,
                           size_t n_lambda, size_t n_rep, double padding, double target_per_point,
                           gilbert_table** out) {
  if (!out || (!lambdas && n_lambda > 0)) return null_arg();
  return guarded([&] {
    *out = new gilbert_table{stats::var_experiment(process.intensity, parse_phi(phi), parse_f(f),
                                                   std::span(lambdas, n_lambda), n_rep, to_params(process), padding,
                                                   optional_target(target_per_point))};
  });
}

gilbert_status gilbert_clt(gilbert_process process, const char* phi, const char* f, double lambda, size_t n_rep,
                           double padding, gilbert_clt_info* out, double* standardized_out) {
  if (!out) return null_arg();
  return guarded([&] {
    const stats::CltReport r = stats::clt_experiment(process.intensity, parse_phi(phi), parse_f(f), lambda, n_rep,
                                                     to_params(process), padding);
    *out = {r.ks_statistic, r.p_value, r.mean, r.variance, r.standardized.size()};
    if (standardized_out) std::copy(r.standardized.begin(), r.standardized.end(), standardized_out);
  });
}

gilbert_status gilbert_ks_normal(const double* samples, size_t n, double* statistic, double* p_value) {
  if ((!samples && n > 0) || !statistic || !p_value) return null_arg();
  return guarded([&] {
    const stats::KsResult r = stats::ks_statistic(std::span(samples, n));
    *statistic = r.statistic;
    *p_value = r.p_value;
  });
}

gilbert_status gilbert_scaling(gilbert_process process, const char* phi, const double* intensities, size_t n_tau,
                               size_t n_rep_e, size_t n_rep_v, double points_per_window, int m_max,
                               gilbert_scaling_row* rows_out, gilbert_scaling_info* out) {
  if (!out || !rows_out || (!intensities && n_tau > 0)) return null_arg();
  return guarded([&] {
    const stats::ScalingReport r = stats::scaling_check(parse_phi(phi), std::span(intensities, n_tau), n_rep_e,
                                                        n_rep_v, to_params(process), points_per_window, m_max);
    for (size_t i = 0; i < r.rows.size(); ++i) {
      const stats::ScalingRow& row = r.rows[i];
      rows_out[i] = {row.intensity, row.scaled_e, row.scaled_e_se, row.scaled_v, row.scaled_v_se, row.lambda};
    }
    *out = {r.max_z_e, r.max_z_v, r.e_consistent ? 1 : 0, r.v_consistent ? 1 : 0};
  });
}

gilbert_status gilbert_write_file(const char* path, const char* content) {
  if (!path || !content) return null_arg();
  return guarded([&] { io::write_file(path, content); });
}

gilbert_status gilbert_read_file(const char* path, char** out) {
  if (!path || !out) return null_arg();
  return guarded([&] { *out = copy_string(io::read_file(path)); });
}

}  // extern "C"
