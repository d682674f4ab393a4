#pragma once

#include "gilbert/engine.hpp"
#include "gilbert/window.hpp"

#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

namespace gilbert {

/// Intensity plus the (master seed, stream index) pair naming a substream.
struct ProcessParams {
  double intensity = 1.0;
  std::uint64_t master_seed = 0;
  std::uint64_t stream = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for the substream identified by (master, stream, salt...).
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t salt_a = 0,
                             std::uint64_t salt_b = 0);

using Rng = std::mt19937_64;

/// Uniform on [0, pi).
double uniform_mark(Rng& rng);

/// Ids at or above this value are reserved for points inserted by hand.
inline constexpr SeedId kInsertedIdBase = SeedId{1} << 63;

/// Homogeneous Poisson sample with the usual marking: N ~ Poisson(tau * area),
/// positions i.i.d. uniform (balls by rejection from the bounding square),
/// marks i.i.d. uniform on [0, pi). Ids are 0..N-1.
MarkedConfig sample_poisson(const Window& window, const ProcessParams& params);

/// config plus `position` with a fresh uniform mark and an unused id. The
/// mark depends on the params and on the position's bits.
MarkedConfig add_point(const MarkedConfig& config, Vec2 position, const ProcessParams& params);

/// Fresh usual-rules mark for an inserted point, keyed by a tag.
double inserted_mark(const ProcessParams& params, std::uint64_t tag);

/// Source of a whole-plane marked configuration, revealed region by region.
class PlaneSource {
public:
  virtual ~PlaneSource() = default;
  /// Every point of the realization in the closed ball.
  virtual std::vector<MarkedPoint> points_in(const Ball& ball) const = 0;
  /// Every point of the realization in the closed rectangle.
  virtual std::vector<MarkedPoint> points_in(const Rect& rect) const = 0;
};

/// One fixed realization of the marked Poisson process on the whole plane,
/// generated tile by tile from per-tile substreams. Queries over any regions
/// are mutually consistent. Caches tiles; not safe for concurrent use.
class PoissonField final : public PlaneSource {
public:
  /// `tag` (0..3) is folded into the point ids so that points of distinct
  /// fields never share an id.
  explicit PoissonField(const ProcessParams& params, unsigned tag = 0);

  std::vector<MarkedPoint> points_in(const Ball& ball) const override;
  std::vector<MarkedPoint> points_in(const Rect& rect) const override;

  const ProcessParams& params() const { return params_; }
  double tile_size() const { return tile_; }

private:
  const std::vector<MarkedPoint>& tile(std::int64_t i, std::int64_t j) const;

  ProcessParams params_;
  SeedId tag_bits_;
  double tile_;
  mutable std::unordered_map<std::uint64_t, std::vector<MarkedPoint>> cache_;
};

}  // namespace gilbert
