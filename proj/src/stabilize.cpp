#include "gilbert/stabilize.hpp"

#include "gilbert/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gilbert {

namespace {

constexpr int kMaxResamples = 16;
constexpr std::uint64_t kCenterTag = 0;
// Resampled realizations move to a disjoint block of stream indices.
constexpr std::uint64_t kResampleStride = std::uint64_t{1} << 48;

}  // namespace

StabilizationResult stabilize_at(const PlaneSource& source, std::span<const MarkedPoint> inserted,
                                 SeedId target, int m_max) {
  if (m_max < 1) throw DomainError("m_max must be at least 1");
  const auto it = std::find_if(inserted.begin(), inserted.end(),
                               [target](const MarkedPoint& p) { return p.id == target; });
  if (it == inserted.end()) throw LookupError("target is not an inserted point");
  const Vec2 center = it->position;

  StabilizationResult result;
  for (int m = 1; m <= m_max; ++m) {
    const Ball ball{center, static_cast<double>(m)};
    MarkedConfig config;
    config.points = source.points_in(ball);
    for (const MarkedPoint& p : inserted) {
      if (ball.contains(p.position)) config.points.push_back(p);
    }
    const Tessellation tess = build(config);
    result.xi_plus = tess.length(target, Sign::Plus);
    result.xi_minus = tess.length(target, Sign::Minus);
    result.windows_tried = m;
    const ExtLength longest = max(result.xi_plus, result.xi_minus);
    result.radius = 2.0 * longest.as_double();
    if (longest.is_finite() && result.radius <= m) {
      result.certified = true;
      result.rho_hat = m;
      return result;
    }
  }
  return result;
}

StabilizationResult whole_plane_xi(Vec2 center, const ProcessParams& params, int m_max) {
  for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
    ProcessParams p = params;
    p.stream = params.stream + static_cast<std::uint64_t>(attempt) * kResampleStride;
    const PoissonField field(p);
    const MarkedPoint origin{center, inserted_mark(p, kCenterTag), kInsertedIdBase};
    try {
      StabilizationResult r = stabilize_at(field, std::span(&origin, 1), origin.id, m_max);
      r.resamples = attempt;
      return r;
    } catch (const DegenerateConfiguration&) {
      // measure-zero realization; move on to the next substream
    }
  }
  throw HarnessError("too many degenerate realizations in a row");
}

bool certify_point(const Tessellation& tess, const Window& window, SeedId seed) {
  const ExtLength plus = tess.length(seed, Sign::Plus);
  const ExtLength minus = tess.length(seed, Sign::Minus);
  if (plus.is_infinite() || minus.is_infinite()) return false;
  const double radius = 2.0 * std::max(plus.finite_value(), minus.finite_value());
  return window.contains_ball(tess.seed(seed).position, radius);
}

TailReport stab_tail(double intensity, std::span<const double> r_grid, std::size_t n_rep,
                     const ProcessParams& params, int m_max) {
  if (n_rep < 100) throw DomainError("stab_tail needs at least 100 replicates");
  std::vector<double> runs(n_rep, -1.0);
  detail::parallel_for(n_rep, [&](std::size_t i) {
    ProcessParams p = params;
    p.intensity = intensity;
    p.stream = params.stream + i;
    const StabilizationResult r = whole_plane_xi({0.0, 0.0}, p, m_max);
    if (r.certified) runs[i] = r.radius;
  });
  std::vector<double> radii;
  for (double r : runs) {
    if (r >= 0.0) radii.push_back(r);
  }
  TailReport report;
  report.n_rep = radii.size();
  report.certified_fraction = static_cast<double>(radii.size()) / static_cast<double>(n_rep);
  if (report.certified_fraction < 0.5) {
    throw HarnessError("fewer than half of the runs certified; increase m_max");
  }
  const double n = static_cast<double>(radii.size());
  for (double r : r_grid) {
    const auto above = std::count_if(radii.begin(), radii.end(), [r](double x) { return x > r; });
    const double s = static_cast<double>(above) / n;
    report.points.push_back({r, s, std::sqrt(s * (1.0 - s) / n)});
  }
  return report;
}

TailFit fit_exponential_tail(const TailReport& tail, double min_survival) {
  TailFit fit;
  fit.nonincreasing = std::is_sorted(tail.points.begin(), tail.points.end(),
                                     [](const TailPoint& a, const TailPoint& b) { return a.survival > b.survival; });
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::size_t n = 0;
  for (const TailPoint& p : tail.points) {
    if (p.survival < min_survival || p.survival <= 0.0) continue;
    const double y = std::log(p.survival);
    sx += p.r;
    sy += y;
    sxx += p.r * p.r;
    sxy += p.r * y;
    syy += y * y;
    ++n;
  }
  fit.n_points = n;
  if (n < 2) return fit;
  const double dn = static_cast<double>(n);
  const double cov = sxy - sx * sy / dn;
  const double var_x = sxx - sx * sx / dn;
  const double var_y = syy - sy * sy / dn;
  fit.slope = cov / var_x;
  fit.intercept = (sy - fit.slope * sx) / dn;
  fit.r_squared = var_y > 0.0 ? cov * cov / (var_x * var_y) : 1.0;
  fit.rate = -fit.slope;
  double prefactor = 0.0;
  for (const TailPoint& p : tail.points) prefactor = std::max(prefactor, p.survival * std::exp(fit.rate * p.r));
  fit.prefactor = prefactor;
  return fit;
}

}  // namespace gilbert
