#pragma once

// Monte Carlo estimators for mass per point, pair correlations and variance
// per point, plus the experiment drivers behind the CLI.
//
// Replicate i of every driver draws from stream
//   params.stream + salt * 2^40 + i
// with a salt fixed per driver, so results do not depend on scheduling.

#include "gilbert/functionals.hpp"
#include "gilbert/pointproc.hpp"
#include "gilbert/stabilize.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gilbert::stats {

struct EstimatorReport {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_rep = 0;          // replicates used
  double certified_fraction = 1.0;
  std::size_t excluded = 0;       // uncertified even after the retry
  double intensity = 0.0;
  std::string phi;
  std::uint64_t master_seed = 0;
  std::vector<double> samples;    // per-replicate values, stream order
};

/// Mean and standard error of a sample (n >= 2).
struct MeanSe {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanSe mean_and_se(std::span<const double> xs);

/// Unbiased sample variance with its jackknife standard error.
struct VarianceEstimate {
  double variance = 0.0;
  double std_error = 0.0;
};
VarianceEstimate variance_with_jackknife(std::span<const double> xs);

/// E(tau) = E phi(xi+(0), xi-(0)) from n_rep whole-plane runs at `at`.
/// Uncertified runs are retried once with 2 * m_max, then excluded; more
/// than 10% exclusions raise HarnessError.
EstimatorReport estimate_E(double intensity, const Phi& phi, std::size_t n_rep, const ProcessParams& params,
                           int m_max = 64, Vec2 at = {0.0, 0.0});

/// c_phi[x] = E phi^2; shares replicate streams with estimate_E.
EstimatorReport estimate_c0(double intensity, const Phi& phi, std::size_t n_rep, const ProcessParams& params,
                            int m_max = 64, Vec2 at = {0.0, 0.0});

/// c_phi[0, x] for x = displacement. Each replicate draws two independent
/// fields P, Q and returns
///   phi_0(P + {0, x}) phi_x(P + {0, x}) - phi_0(P_A + {0}) phi_x(P_B + {x})
/// where P_A takes P on the origin's side of the bisector and Q on the
/// other, P_B the reverse. P_A and P_B are independent copies of the
/// process, so the subtracted term has mean E(tau)^2 exactly, and it
/// cancels the product whenever both points stabilize within |x| / 2.
EstimatorReport estimate_cxy(double intensity, const Phi& phi, Vec2 displacement, std::size_t n_rep,
                             const ProcessParams& params, int m_max = 64);

struct VarianceReport {
  EstimatorReport total;     // V-hat = c0 + tau * integral, per replicate
  MeanSe c0;
  MeanSe integral;           // of c_phi[0, x] over B(0, r_max)
  double coarse_estimate = 0.0;  // same data, every other radial node
  bool refinement_warning = false;
  double r_max = 0.0;
  /// Bound on the neglected |x| > r_max part from a fitted stabilization
  /// tail; NaN when no fit is supplied.
  double truncation_bound = 0.0;
};

/// Pair-correlation route to the variance per point: polar grid of
/// n_angles x n_radii nodes, trapezoidal in r, uniform in angle (with a
/// random rotation per replicate).
VarianceReport estimate_V(double intensity, const Phi& phi, double r_max, int n_angles, int n_radii,
                          std::size_t n_rep, const ProcessParams& params, int m_max = 64,
                          std::optional<TailFit> tail = std::nullopt);

/// Radius at which the fitted tail M e^{-C r} drops below `level`.
double truncation_radius(const TailFit& fit, double level = 1e-3);

/// Stabilization tail fit used to pick r_max when none is given: 2000
/// whole-plane runs, grid r = k / (2 sqrt(tau)), k = 1..40.
TailFit default_tail_fit(double intensity, const ProcessParams& params, int m_max = 64);

struct TableRow {
  double lambda = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  std::size_t n_rep = 0;
  double certified_fraction = 0.0;
  std::uint64_t master_seed = 0;
};

struct Table {
  std::vector<TableRow> rows;
};

/// Per lambda: Monte Carlo mean of lambda^-1 * integral of f against the
/// empirical measure, and target tau * E * (integral of f). Replicate i uses
/// the same field for every lambda, so the windows are nested.
Table lln_experiment(double intensity, const Phi& phi, const TestFunction& f, std::span<const double> lambdas,
                     std::size_t n_rep, const ProcessParams& params, double padding,
                     std::optional<double> mass_per_point = std::nullopt);

/// Per lambda: lambda^-1 * sample variance of the integral (jackknife se),
/// target tau * V * (integral of f^2). Refuses n_rep < 50.
Table var_experiment(double intensity, const Phi& phi, const TestFunction& f, std::span<const double> lambdas,
                     std::size_t n_rep, const ProcessParams& params, double padding,
                     std::optional<double> variance_per_point = std::nullopt);

/// Integrals of f against n_rep empirical measures at one lambda.
std::vector<double> measure_integrals(double intensity, const Phi& phi, const TestFunction& f, double lambda,
                                      std::size_t n_rep, const ProcessParams& params, double padding);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// Kolmogorov survival function P(K > x) of the limiting distribution.
double kolmogorov_survival(double x);

/// One-sample KS distance to the standard normal with asymptotic p-value.
/// Needs at least 8 samples.
KsResult ks_statistic(std::span<const double> samples);

struct CltReport {
  std::vector<double> standardized;
  double ks_statistic = 0.0;
  double p_value = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Standardizes n_rep integrals at one lambda and tests them against N(0,1).
CltReport clt_experiment(double intensity, const Phi& phi, const TestFunction& f, double lambda, std::size_t n_rep,
                         const ProcessParams& params, double padding);

struct ScalingRow {
  double intensity = 0.0;
  double scaled_e = 0.0;      // tau^{k/2} E-hat
  double scaled_e_se = 0.0;
  double scaled_v = 0.0;      // tau^k V-hat
  double scaled_v_se = 0.0;
  double lambda = 0.0;        // window used for the variance column
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  double max_z_e = 0.0;  // largest pairwise |difference| / combined se
  double max_z_v = 0.0;
  bool e_consistent = false;  // max_z_e <= 3
  bool v_consistent = false;  // max_z_v <= 4
};

/// Remark-style homogeneity check for a phi of declared degree k. The
/// variance column uses windows of area points_per_window / tau so every
/// intensity sees the same expected number of points. Throws DomainError
/// for a phi without a degree.
ScalingReport scaling_check(const Phi& phi, std::span<const double> intensities, std::size_t n_rep_e,
                            std::size_t n_rep_v, const ProcessParams& params, double points_per_window = 1600.0,
                            int m_max = 64);

}  // namespace gilbert::stats
