#include "gilbert/oracle.hpp"

#include "gilbert/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gilbert::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_size(const MarkedConfig& config) {
  if (config.points.size() > kOracleMaxSeeds) {
    throw DomainError("oracle limited to " + std::to_string(kOracleMaxSeeds) + " seeds");
  }
}

struct Candidate {
  std::size_t blocker = 0;
  double s_blocked = 0.0;
  double s_blocker = 0.0;
};

std::vector<Ray> all_rays(const MarkedConfig& config) {
  std::vector<Ray> rays;
  rays.reserve(2 * config.points.size());
  for (const MarkedPoint& p : config.points) {
    rays.push_back(branch_ray(p, Sign::Plus));
    rays.push_back(branch_ray(p, Sign::Minus));
  }
  return rays;
}

// For each branch, every forward crossing where it arrives no earlier than
// the other branch.
std::vector<std::vector<Candidate>> candidates_for(const std::vector<Ray>& rays) {
  std::vector<std::vector<Candidate>> out(rays.size());
  for (std::size_t a = 0; a < rays.size(); ++a) {
    for (std::size_t b = 0; b < rays.size(); ++b) {
      if (a / 2 == b / 2) continue;
      const auto hit = ray_intersection(rays[a], rays[b]);
      if (hit && hit->s_b <= hit->s_a) out[a].push_back({b, hit->s_a, hit->s_b});
    }
  }
  return out;
}

LengthTable to_table(const std::vector<double>& raw) {
  LengthTable out;
  out.reserve(raw.size());
  for (double v : raw) out.push_back(v == kInf ? ExtLength::infinite() : ExtLength(v));
  return out;
}

std::vector<double> sweep(const std::vector<std::vector<Candidate>>& cands, const std::vector<double>& cur) {
  std::vector<double> next(cur.size(), kInf);
  for (std::size_t a = 0; a < cands.size(); ++a) {
    for (const Candidate& c : cands[a]) {
      if (cur[c.blocker] >= c.s_blocker) next[a] = std::min(next[a], c.s_blocked);
    }
  }
  return next;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double u = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + u * ab);
}

// Crossing of segments [p, p + r] and [q, q + s] as parameters (u, v) in
// [0, 1]^2; parallel pairs never cross here.
bool segment_crossing(Vec2 p, Vec2 r, Vec2 q, Vec2 s, double& u, double& v) {
  const double rxs = r.x * s.y - r.y * s.x;
  if (rxs == 0.0) return false;
  const Vec2 qp = q - p;
  u = (qp.x * s.y - qp.y * s.x) / rxs;
  v = (qp.x * r.y - qp.y * r.x) / rxs;
  return u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0;
}

}  // namespace

LengthTable lengths_of(const Tessellation& tess) {
  LengthTable out;
  out.reserve(2 * tess.seed_count());
  for (std::size_t i = 0; i < tess.seed_count(); ++i) {
    out.push_back(tess.length_at(i, Sign::Plus));
    out.push_back(tess.length_at(i, Sign::Minus));
  }
  return out;
}

LengthTable fixedpoint_sweep(const MarkedConfig& config, const LengthTable& current) {
  check_size(config);
  const auto cands = candidates_for(all_rays(config));
  std::vector<double> cur;
  cur.reserve(current.size());
  for (ExtLength l : current) cur.push_back(l.as_double());
  return to_table(sweep(cands, cur));
}

LengthTable build_fixedpoint(const MarkedConfig& config) {
  check_size(config);
  validate_config(config);
  const auto cands = candidates_for(all_rays(config));
  const std::size_t m = config.points.size();
  const std::size_t max_sweeps = m * (m - (m > 0 ? 1 : 0)) / 2 + 2;
  std::vector<double> cur(2 * m, kInf);
  for (std::size_t k = 0; k < max_sweeps; ++k) {
    std::vector<double> next = sweep(cands, cur);
    if (next == cur) return to_table(cur);
    cur = std::move(next);
  }
  throw InternalError("fixed-point iteration did not converge");
}

LengthTable build_timestep(const MarkedConfig& config, double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  check_size(config);
  validate_config(config);

  const std::vector<Ray> rays = all_rays(config);
  const std::size_t n = rays.size();

  // Past the last pairwise crossing nothing can block anything.
  double horizon = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (a / 2 == b / 2) continue;
      if (const auto hit = ray_intersection(rays[a], rays[b])) {
        horizon = std::max({horizon, hit->s_a, hit->s_b});
      }
    }
  }

  std::vector<double> reach(n, 0.0);  // grown length
  std::vector<bool> frozen(n, false);
  auto tip = [&](std::size_t b, double len) { return rays[b].origin + len * rays[b].direction; };

  struct Hit {
    double time;
    std::size_t blocked;
    std::size_t blocker;
    double s_blocker;
  };

  double t = 0.0;
  while (t <= horizon + dt) {
    bool any_alive = false;
    double gap = kInf;
    for (std::size_t a = 0; a < n; ++a) {
      if (frozen[a]) continue;
      any_alive = true;
      const Vec2 p = tip(a, reach[a]);
      for (std::size_t b = 0; b < n; ++b) {
        if (a / 2 == b / 2) continue;
        gap = std::min(gap, point_segment_distance(p, rays[b].origin, tip(b, reach[b])));
      }
    }
    if (!any_alive) break;

    // Tips and segments approach each other at relative speed <= 2.
    const double safe_steps = std::floor(gap / (2.0 * dt)) - 1.0;
    if (safe_steps >= 1.0) {
      const double steps = std::min(safe_steps, std::ceil((horizon + dt - t) / dt) + 1.0);
      const double advance = steps * dt;
      for (std::size_t a = 0; a < n; ++a) {
        if (!frozen[a]) reach[a] += advance;
      }
      t += advance;
      continue;
    }

    std::vector<Hit> hits;
    for (std::size_t a = 0; a < n; ++a) {
      if (frozen[a]) continue;
      const Vec2 p = tip(a, reach[a]);
      const Vec2 r = dt * rays[a].direction;
      for (std::size_t b = 0; b < n; ++b) {
        if (a / 2 == b / 2) continue;
        const double b_end = frozen[b] ? reach[b] : reach[b] + dt;
        double u = 0.0;
        double v = 0.0;
        if (!segment_crossing(p, r, rays[b].origin, b_end * rays[b].direction, u, v)) continue;
        const double arrival = t + u * dt;
        const double s_b = v * b_end;
        if (s_b <= arrival) hits.push_back({arrival, a, b, s_b});
      }
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.time < y.time; });
    std::vector<double> stop(n, kInf);
    for (const Hit& h : hits) {
      if (stop[h.blocked] != kInf) continue;
      if (stop[h.blocker] < h.s_blocker) continue;
      if (frozen[h.blocker] && reach[h.blocker] < h.s_blocker) continue;
      stop[h.blocked] = h.time;
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (frozen[a]) continue;
      if (stop[a] != kInf) {
        reach[a] = stop[a];
        frozen[a] = true;
      } else {
        reach[a] += dt;
      }
    }
    t += dt;
  }

  std::vector<double> out(n, kInf);
  for (std::size_t a = 0; a < n; ++a) {
    if (frozen[a]) out[a] = reach[a];
  }
  return to_table(out);
}

}  // namespace gilbert::oracle
