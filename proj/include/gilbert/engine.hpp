#pragma once

#include "gilbert/geom.hpp"
#include "gilbert/window.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace gilbert {

/// Finite marked seed configuration with an optional rendering window.
struct MarkedConfig {
  std::vector<MarkedPoint> points;
  std::optional<Rect> window;

  std::size_t size() const { return points.size(); }
};

/// Rejects duplicate ids, out-of-range marks and coincident positions.
void validate_config(const MarkedConfig& config);

struct CollisionEvent {
  double time = 0.0;             // arc length of the blocked branch at the contact
  BranchId blocked;
  BranchId blocker;
  double blocker_arrival = 0.0;  // arc length of the blocker at the contact
  Vec2 point;
};

struct Segment {
  Vec2 from;
  Vec2 to;
  BranchId owner;
  bool clipped = false;  // infinite branch cut at the window boundary
};

struct BuildOptions {
  /// Resolve exactly simultaneous arrivals in favour of the lexicographically
  /// smaller branch instead of reporting DegenerateConfiguration.
  bool lexicographic_ties = false;
  /// Edge length of the candidate grid; <= 0 picks one from the seed density.
  double cell_size = 0.0;
  /// Use one cell covering every seed: all branch pairs become candidates.
  bool brute_force = false;
};

/// Result of a finite-input crack growth: immutable once built.
class Tessellation {
public:
  const MarkedConfig& config() const { return config_; }
  std::size_t seed_count() const { return config_.points.size(); }

  /// Throws LookupError for an unknown seed.
  std::size_t index_of(SeedId seed) const;
  const MarkedPoint& seed(SeedId id) const { return config_.points[index_of(id)]; }

  ExtLength length(SeedId seed, Sign sign) const;
  ExtLength length_at(std::size_t index, Sign sign) const {
    return lengths_[2 * index + static_cast<std::size_t>(sign)];
  }
  std::optional<BranchId> blocker_of(SeedId seed, Sign sign) const;

  /// Sorted by blocked arrival time.
  std::span<const CollisionEvent> events() const { return events_; }

  /// Growth tip of a branch at time t (immobile once blocked).
  Vec2 tip(SeedId seed, Sign sign, double t) const;

private:
  friend Tessellation build(const MarkedConfig& config, const BuildOptions& options);

  MarkedConfig config_;
  std::unordered_map<SeedId, std::size_t> index_;
  std::vector<ExtLength> lengths_;                 // 2 * index + sign
  std::vector<std::optional<BranchId>> blockers_;  // 2 * index + sign
  std::vector<CollisionEvent> events_;
};

/// Exact event-driven Gilbert construction. Throws DegenerateConfiguration
/// for coincident seeds, collinear overlapping branches, and ties.
Tessellation build(const MarkedConfig& config, const BuildOptions& options = {});

ExtLength branch_length(const Tessellation& tess, SeedId seed, Sign sign);

Vec2 branch_history(const Tessellation& tess, SeedId seed, Sign sign, double t);

/// Branches as grown by time t, two segments per seed in config order
/// (+ then -). With t = +inf, infinite branches are clipped to the config
/// window, or to the seed bounding box padded by one unit when absent.
std::vector<Segment> partial_tessellation(const Tessellation& tess, double t);

/// Rectangle used to clip infinite branches for `tess`.
Rect clip_window(const Tessellation& tess);

}  // namespace gilbert
