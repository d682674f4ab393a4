#include "gilbert/engine.hpp"

#include "gilbert/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <unordered_set>

namespace gilbert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::size_t slot(std::size_t index, Sign sign) {
  return 2 * index + static_cast<std::size_t>(sign);
}

struct Grid {
  double x0 = 0.0;
  double y0 = 0.0;
  double h = 1.0;
  int nx = 1;
  int ny = 1;

  int clamp_x(double x) const {
    return std::clamp(static_cast<int>(std::floor((x - x0) / h)), 0, nx - 1);
  }
  int clamp_y(double y) const {
    return std::clamp(static_cast<int>(std::floor((y - y0) / h)), 0, ny - 1);
  }
  bool inside(int cx, int cy) const { return cx >= 0 && cx < nx && cy >= 0 && cy < ny; }
};

enum class ItemKind : std::uint8_t { Entry = 0, Candidate = 1 };

// Queue item: either a branch entering a grid cell (or leaving the grid)
// or a candidate collision keyed by the blocked branch's arrival.
struct Item {
  double time = 0.0;
  ItemKind kind = ItemKind::Entry;
  double blocker_arrival = 0.0;
  BranchId blocked_id;
  BranchId blocker_id;
  std::uint32_t blocked = 0;
  std::uint32_t blocker = 0;
  Vec2 point;
};

struct Later {
  bool operator()(const Item& a, const Item& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return a.kind > b.kind;
    if (a.blocker_arrival != b.blocker_arrival) return a.blocker_arrival > b.blocker_arrival;
    if (a.blocked_id != b.blocked_id) return a.blocked_id > b.blocked_id;
    return a.blocker_id > b.blocker_id;
  }
};

class Builder {
public:
  Builder(const MarkedConfig& config, const BuildOptions& options)
      : config_(config), options_(options) {
    const std::size_t m = config.points.size();
    rays_.reserve(2 * m);
    for (const MarkedPoint& p : config.points) {
      rays_.push_back(branch_ray(p, Sign::Plus));
      rays_.push_back(branch_ray(p, Sign::Minus));
    }
    length_.assign(2 * m, kInf);
    blocker_.assign(2 * m, std::nullopt);
  }

  void run() {
    if (rays_.empty()) return;
    if (options_.brute_force) {
      for (std::uint32_t b = 0; b < rays_.size(); ++b) {
        for (std::uint32_t c = b + 1; c < rays_.size(); ++c) {
          if (b / 2 != c / 2) consider_pair(b, c, Region::Anywhere);
        }
      }
    } else {
      setup_grid();
      for (std::uint32_t b = 0; b < rays_.size(); ++b) {
        const Vec2 o = rays_[b].origin;
        cx_[b] = grid_.clamp_x(o.x);
        cy_[b] = grid_.clamp_y(o.y);
        push_entry(b, 0.0);
      }
    }
    while (!queue_.empty()) {
      const Item item = queue_.top();
      queue_.pop();
      if (item.kind == ItemKind::Entry) {
        enter(item.blocked, item.time);
      } else {
        resolve(item);
      }
    }
    std::stable_sort(events_.begin(), events_.end(),
                     [](const CollisionEvent& a, const CollisionEvent& b) { return a.time < b.time; });
  }

  std::vector<double> take_lengths() { return std::move(length_); }
  std::vector<std::optional<BranchId>> take_blockers() { return std::move(blocker_); }
  std::vector<CollisionEvent> take_events() { return std::move(events_); }

private:
  enum class Region { Cell, OutsideGrid, Anywhere };

  void setup_grid() {
    double lo_x = kInf, lo_y = kInf, hi_x = -kInf, hi_y = -kInf;
    for (const MarkedPoint& p : config_.points) {
      lo_x = std::min(lo_x, p.position.x);
      lo_y = std::min(lo_y, p.position.y);
      hi_x = std::max(hi_x, p.position.x);
      hi_y = std::max(hi_y, p.position.y);
    }
    const double m = static_cast<double>(config_.points.size());
    const double w = hi_x - lo_x;
    const double hgt = hi_y - lo_y;
    const double ext = std::max(w, hgt);
    double h = options_.cell_size;
    if (!(h > 0.0)) {
      // About two seeds per cell, and never more than ~4m cells.
      h = std::sqrt(2.0 * w * hgt / m);
      h = std::max(h, ext / (2.0 * std::sqrt(m) + 1.0));
      if (!(h > 0.0)) h = 1.0;
    }
    grid_.h = h;
    grid_.x0 = lo_x - 0.5 * h;
    grid_.y0 = lo_y - 0.5 * h;
    grid_.nx = static_cast<int>(std::floor(w / h)) + 2;
    grid_.ny = static_cast<int>(std::floor(hgt / h)) + 2;
    cells_.assign(static_cast<std::size_t>(grid_.nx) * grid_.ny, {});
    cx_.assign(rays_.size(), 0);
    cy_.assign(rays_.size(), 0);
    margin_ = kGeomEps * (h + std::abs(grid_.x0) + std::abs(grid_.y0) + ext);
  }

  void push_entry(std::uint32_t b, double t) {
    Item item;
    item.time = t;
    item.kind = ItemKind::Entry;
    item.blocked = b;
    item.blocked_id = rays_[b].owner;
    queue_.push(item);
  }

  void enter(std::uint32_t b, double t) {
    if (length_[b] <= t) return;
    if (!grid_.inside(cx_[b], cy_[b])) {
      for (std::uint32_t c : escaped_) {
        if (c / 2 != b / 2) consider_pair(b, c, Region::OutsideGrid);
      }
      escaped_.push_back(b);
      return;
    }
    auto& cell = cells_[static_cast<std::size_t>(cy_[b]) * grid_.nx + cx_[b]];
    for (std::uint32_t c : cell) {
      if (c / 2 != b / 2) consider_pair(b, c, Region::Cell);
    }
    cell.push_back(b);

    const Vec2 o = rays_[b].origin;
    const Vec2 d = rays_[b].direction;
    double tx = kInf;
    double ty = kInf;
    if (d.x > 0.0) tx = (grid_.x0 + (cx_[b] + 1) * grid_.h - o.x) / d.x;
    if (d.x < 0.0) tx = (grid_.x0 + cx_[b] * grid_.h - o.x) / d.x;
    if (d.y > 0.0) ty = (grid_.y0 + (cy_[b] + 1) * grid_.h - o.y) / d.y;
    if (d.y < 0.0) ty = (grid_.y0 + cy_[b] * grid_.h - o.y) / d.y;
    double next;
    if (tx < ty) {
      cx_[b] += d.x > 0.0 ? 1 : -1;
      next = tx;
    } else {
      cy_[b] += d.y > 0.0 ? 1 : -1;
      next = ty;
    }
    push_entry(b, std::max(next, t));
  }

  bool in_region(Vec2 p, Region region, std::uint32_t b) const {
    switch (region) {
      case Region::Anywhere:
        return true;
      case Region::Cell: {
        const double cx0 = grid_.x0 + cx_[b] * grid_.h;
        const double cy0 = grid_.y0 + cy_[b] * grid_.h;
        return p.x >= cx0 - margin_ && p.x <= cx0 + grid_.h + margin_ && p.y >= cy0 - margin_ &&
               p.y <= cy0 + grid_.h + margin_;
      }
      case Region::OutsideGrid: {
        const double gx1 = grid_.x0 + grid_.nx * grid_.h;
        const double gy1 = grid_.y0 + grid_.ny * grid_.h;
        const bool interior = p.x > grid_.x0 + margin_ && p.x < gx1 - margin_ && p.y > grid_.y0 + margin_ &&
                              p.y < gy1 - margin_;
        return !interior;
      }
    }
    return false;
  }

  void consider_pair(std::uint32_t b, std::uint32_t c, Region region) {
    const auto hit = ray_intersection(rays_[b], rays_[c]);
    if (!hit || !in_region(hit->point, region, b)) return;
    Item item;
    item.kind = ItemKind::Candidate;
    item.point = hit->point;
    if (hit->s_a >= hit->s_b) {
      item.blocked = b;
      item.blocker = c;
      item.time = hit->s_a;
      item.blocker_arrival = hit->s_b;
    } else {
      item.blocked = c;
      item.blocker = b;
      item.time = hit->s_b;
      item.blocker_arrival = hit->s_a;
    }
    item.blocked_id = rays_[item.blocked].owner;
    item.blocker_id = rays_[item.blocker].owner;
    queue_.push(item);
  }

  [[noreturn]] void degenerate(const std::string& what, const Item& item) const {
    throw DegenerateConfiguration(what + " between branches " + describe(item.blocked_id) + " and " +
                                  describe(item.blocker_id));
  }

  static std::string describe(const BranchId& b) {
    return std::to_string(b.seed) + sign_char(b.sign);
  }

  void resolve(Item item) {
    if (length_[item.blocked] != kInf) return;
    const double tol = kGeomEps * (1.0 + item.time);
    const double blocker_len = length_[item.blocker];
    if (blocker_len < item.blocker_arrival - tol) return;
    if (std::abs(blocker_len - item.blocker_arrival) <= tol) {
      degenerate("three branches meet at one point", item);
    }
    if (item.time - item.blocker_arrival <= tol) {
      if (!options_.lexicographic_ties) degenerate("simultaneous arrival", item);
      if (item.blocked_id < item.blocker_id) {
        std::swap(item.blocked, item.blocker);
        std::swap(item.blocked_id, item.blocker_id);
        std::swap(item.time, item.blocker_arrival);
        if (length_[item.blocked] != kInf) return;
      }
    }
    // The blocker passes through here at its own seed: the seed sits on the
    // blocked branch's path and the blocking side is ambiguous.
    if (item.blocker_arrival <= tol) degenerate("seed lies on a branch", item);

    length_[item.blocked] = item.time;
    blocker_[item.blocked] = item.blocker_id;
    events_.push_back({item.time, item.blocked_id, item.blocker_id, item.blocker_arrival, item.point});
  }

  const MarkedConfig& config_;
  const BuildOptions& options_;
  std::vector<Ray> rays_;
  std::vector<double> length_;
  std::vector<std::optional<BranchId>> blocker_;
  std::vector<CollisionEvent> events_;

  Grid grid_;
  double margin_ = 0.0;
  std::vector<std::vector<std::uint32_t>> cells_;
  std::vector<int> cx_;
  std::vector<int> cy_;
  std::vector<std::uint32_t> escaped_;
  std::priority_queue<Item, std::vector<Item>, Later> queue_;
};

}  // namespace

void validate_config(const MarkedConfig& config) {
  std::unordered_set<SeedId> ids;
  ids.reserve(config.points.size());
  for (const MarkedPoint& p : config.points) {
    if (!std::isfinite(p.position.x) || !std::isfinite(p.position.y)) {
      throw DomainError("seed " + std::to_string(p.id) + " has a non-finite position");
    }
    mark_to_direction(p.mark);
    if (!ids.insert(p.id).second) {
      throw DomainError("duplicate seed id " + std::to_string(p.id));
    }
  }
  std::vector<Vec2> pos;
  pos.reserve(config.points.size());
  for (const MarkedPoint& p : config.points) pos.push_back(p.position);
  std::sort(pos.begin(), pos.end(), [](Vec2 a, Vec2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  for (std::size_t i = 1; i < pos.size(); ++i) {
    const double scale = 1.0 + std::abs(pos[i].x) + std::abs(pos[i].y);
    if (distance(pos[i], pos[i - 1]) <= kGeomEps * scale) {
      throw DegenerateConfiguration("coincident seeds at (" + std::to_string(pos[i].x) + ", " +
                                    std::to_string(pos[i].y) + ")");
    }
  }
}

std::size_t Tessellation::index_of(SeedId seed) const {
  const auto it = index_.find(seed);
  if (it == index_.end()) throw LookupError("unknown seed id " + std::to_string(seed));
  return it->second;
}

ExtLength Tessellation::length(SeedId seed, Sign sign) const {
  return lengths_[slot(index_of(seed), sign)];
}

std::optional<BranchId> Tessellation::blocker_of(SeedId seed, Sign sign) const {
  return blockers_[slot(index_of(seed), sign)];
}

Vec2 Tessellation::tip(SeedId seed, Sign sign, double t) const {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  const std::size_t i = index_of(seed);
  const MarkedPoint& p = config_.points[i];
  const double reach = std::min(t, lengths_[slot(i, sign)].as_double());
  return p.position + (sign_factor(sign) * reach) * mark_to_direction(p.mark);
}

Tessellation build(const MarkedConfig& config, const BuildOptions& options) {
  validate_config(config);
  Builder builder(config, options);
  builder.run();

  Tessellation tess;
  tess.config_ = config;
  tess.index_.reserve(config.points.size());
  for (std::size_t i = 0; i < config.points.size(); ++i) tess.index_.emplace(config.points[i].id, i);
  const std::vector<double> raw = builder.take_lengths();
  tess.lengths_.reserve(raw.size());
  for (double v : raw) tess.lengths_.push_back(v == kInf ? ExtLength::infinite() : ExtLength(v));
  tess.blockers_ = builder.take_blockers();
  tess.events_ = builder.take_events();
  return tess;
}

ExtLength branch_length(const Tessellation& tess, SeedId seed, Sign sign) {
  return tess.length(seed, sign);
}

Vec2 branch_history(const Tessellation& tess, SeedId seed, Sign sign, double t) {
  return tess.tip(seed, sign, t);
}

Rect clip_window(const Tessellation& tess) {
  const MarkedConfig& cfg = tess.config();
  if (cfg.window) return *cfg.window;
  if (cfg.points.empty()) return {-1.0, -1.0, 2.0, 2.0};
  double lo_x = kInf, lo_y = kInf, hi_x = -kInf, hi_y = -kInf;
  for (const MarkedPoint& p : cfg.points) {
    lo_x = std::min(lo_x, p.position.x);
    lo_y = std::min(lo_y, p.position.y);
    hi_x = std::max(hi_x, p.position.x);
    hi_y = std::max(hi_y, p.position.y);
  }
  return Rect{lo_x, lo_y, hi_x - lo_x, hi_y - lo_y}.padded(1.0);
}

namespace {

// Largest s >= 0 with origin + s * dir inside r; 0 when the origin is outside.
double exit_parameter(const Rect& r, Vec2 origin, Vec2 dir) {
  if (!r.contains(origin)) return 0.0;
  double s = kInf;
  if (dir.x > 0.0) s = std::min(s, (r.x0 + r.w - origin.x) / dir.x);
  if (dir.x < 0.0) s = std::min(s, (r.x0 - origin.x) / dir.x);
  if (dir.y > 0.0) s = std::min(s, (r.y0 + r.h - origin.y) / dir.y);
  if (dir.y < 0.0) s = std::min(s, (r.y0 - origin.y) / dir.y);
  return std::max(0.0, s);
}

}  // namespace

std::vector<Segment> partial_tessellation(const Tessellation& tess, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  const Rect clip = clip_window(tess);
  std::vector<Segment> out;
  out.reserve(2 * tess.seed_count());
  for (std::size_t i = 0; i < tess.seed_count(); ++i) {
    const MarkedPoint& p = tess.config().points[i];
    for (Sign sign : {Sign::Plus, Sign::Minus}) {
      const Vec2 dir = sign_factor(sign) * mark_to_direction(p.mark);
      double reach = std::min(t, tess.length_at(i, sign).as_double());
      bool clipped = false;
      if (reach == kInf) {
        reach = exit_parameter(clip, p.position, dir);
        clipped = true;
      }
      out.push_back({p.position, p.position + reach * dir, {p.id, sign}, clipped});
    }
  }
  return out;
}

}  // namespace gilbert
