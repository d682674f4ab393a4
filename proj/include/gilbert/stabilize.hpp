#pragma once

#include "gilbert/engine.hpp"
#include "gilbert/pointproc.hpp"

#include <span>
#include <vector>

namespace gilbert {

/// Whole-plane branch lengths at one point, certified by the first integer
/// radius m at which 2 * max(xi+, xi-) computed inside B(x, m) is <= m.
struct StabilizationResult {
  ExtLength xi_plus;
  ExtLength xi_minus;
  int rho_hat = 0;          // certifying radius; 0 when uncertified
  double radius = 0.0;      // R = 2 * max(xi+, xi-), +inf if unbounded
  bool certified = false;
  int windows_tried = 0;
  int resamples = 0;        // degenerate realizations skipped
};

/// Runs the growing-ball procedure for `target` on source + inserted points.
/// `target` must be the id of one inserted point. Degenerate configurations
/// propagate as DegenerateConfiguration.
StabilizationResult stabilize_at(const PlaneSource& source, std::span<const MarkedPoint> inserted,
                                 SeedId target, int m_max);

/// Certified whole-plane (xi+, xi-) at `center` for one realization of the
/// marked Poisson process named by `params`, with the center added under the
/// usual marking. Degenerate realizations are replaced by the next substream.
StabilizationResult whole_plane_xi(Vec2 center, const ProcessParams& params, int m_max);

/// True iff both branches are finite and B(x, 2 * max(xi+, xi-)) lies in
/// the window, so the in-window values are the whole-plane values.
bool certify_point(const Tessellation& tess, const Window& window, SeedId seed);

struct TailPoint {
  double r = 0.0;
  double survival = 0.0;   // P(R > r)
  double std_error = 0.0;  // binomial
};

struct TailReport {
  std::vector<TailPoint> points;
  std::size_t n_rep = 0;
  double certified_fraction = 0.0;
};

/// Empirical survival function of the stabilization radius R over n_rep
/// independent whole_plane_xi runs (uncertified runs excluded).
TailReport stab_tail(double intensity, std::span<const double> r_grid, std::size_t n_rep,
                     const ProcessParams& params, int m_max);

struct TailFit {
  double slope = 0.0;      // of log survival against r
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
  double rate = 0.0;       // C-hat = -slope
  double prefactor = 0.0;  // smallest M-hat with survival <= M e^{-C r} on the grid
  bool nonincreasing = false;
};

/// Least-squares line through log P(R > r) over points with survival >= min_survival.
TailFit fit_exponential_tail(const TailReport& tail, double min_survival = 0.01);

}  // namespace gilbert
