#include "gilbert/pointproc.hpp"

#include "gilbert/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace gilbert {

namespace {

void check_params(const ProcessParams& params) {
  if (!(params.intensity > 0.0) || !std::isfinite(params.intensity)) {
    throw DomainError("intensity must be positive and finite");
  }
}

double uniform01(Rng& rng) {
  // 53 random bits -> [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

constexpr std::uint64_t kSaltAdd = 0xadd0'0000'0000'0001ULL;
constexpr std::uint64_t kSaltInserted = 0x1234'5678'9abc'def1ULL;
constexpr std::uint64_t kSaltTile = 0x7113'0000'0000'0005ULL;

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t salt_a,
                             std::uint64_t salt_b) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ stream);
  h = mix64(h ^ salt_a);
  h = mix64(h ^ salt_b);
  return h;
}

double uniform_mark(Rng& rng) {
  // uniform01 < 1 keeps the product strictly below pi after rounding.
  const double m = uniform01(rng) * kPi;
  return m < kPi ? m : std::nextafter(kPi, 0.0);
}

MarkedConfig sample_poisson(const Window& window, const ProcessParams& params) {
  check_params(params);
  const Rect box = window.bounding_rect();
  if (box.w < 0.0 || box.h < 0.0 || (window.ball() && window.ball()->r < 0.0)) {
    throw DomainError("window has negative extent");
  }
  MarkedConfig config;
  const double area = window.area();
  if (area == 0.0) return config;

  Rng rng(substream_seed(params.master_seed, params.stream));
  std::poisson_distribution<std::uint64_t> count_dist(params.intensity * area);
  const std::uint64_t n = count_dist(rng);
  config.points.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    Vec2 p;
    do {
      p = {box.x0 + uniform01(rng) * box.w, box.y0 + uniform01(rng) * box.h};
    } while (!window.contains(p));
    config.points.push_back({p, uniform_mark(rng), k});
  }
  if (const Rect* r = window.rect()) config.window = *r;
  return config;
}

double inserted_mark(const ProcessParams& params, std::uint64_t tag) {
  Rng rng(substream_seed(params.master_seed, params.stream, kSaltInserted, tag));
  return uniform_mark(rng);
}

MarkedConfig add_point(const MarkedConfig& config, Vec2 position, const ProcessParams& params) {
  for (const MarkedPoint& p : config.points) {
    if (p.position == position) throw DegenerateConfiguration("point already present in configuration");
  }
  SeedId next = 0;
  for (const MarkedPoint& p : config.points) next = std::max(next, p.id + 1);
  const std::uint64_t tag = mix64(std::bit_cast<std::uint64_t>(position.x)) ^
                            std::bit_cast<std::uint64_t>(position.y);
  Rng rng(substream_seed(params.master_seed, params.stream, kSaltAdd, tag));
  MarkedConfig out = config;
  out.points.push_back({position, uniform_mark(rng), next});
  return out;
}

PoissonField::PoissonField(const ProcessParams& params, unsigned tag)
    : params_(params), tag_bits_(static_cast<SeedId>(tag & 3u) << 61) {
  check_params(params);
  // About four points per tile.
  tile_ = 2.0 / std::sqrt(params.intensity);
}

const std::vector<MarkedPoint>& PoissonField::tile(std::int64_t i, std::int64_t j) const {
  const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                            static_cast<std::uint32_t>(j);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  Rng rng(substream_seed(params_.master_seed, params_.stream, kSaltTile, key));
  std::poisson_distribution<std::uint32_t> count_dist(params_.intensity * tile_ * tile_);
  const std::uint32_t n = count_dist(rng);
  std::vector<MarkedPoint> pts;
  pts.reserve(n);
  // Ids pack the field tag (2 bits), the tile key (2 x 23 bits) and the
  // in-tile index (15 bits); bit 63 stays clear for inserted points.
  const SeedId id_base = tag_bits_ | (static_cast<SeedId>(static_cast<std::uint32_t>(i) & 0x7FFFFF) << 38) |
                         (static_cast<SeedId>(static_cast<std::uint32_t>(j) & 0x7FFFFF) << 15);
  for (std::uint32_t k = 0; k < n; ++k) {
    const Vec2 p{(static_cast<double>(i) + uniform01(rng)) * tile_, (static_cast<double>(j) + uniform01(rng)) * tile_};
    pts.push_back({p, uniform_mark(rng), id_base | k});
  }
  return cache_.emplace(key, std::move(pts)).first->second;
}

std::vector<MarkedPoint> PoissonField::points_in(const Rect& rect) const {
  std::vector<MarkedPoint> out;
  const auto i0 = static_cast<std::int64_t>(std::floor(rect.x0 / tile_));
  const auto i1 = static_cast<std::int64_t>(std::floor((rect.x0 + rect.w) / tile_));
  const auto j0 = static_cast<std::int64_t>(std::floor(rect.y0 / tile_));
  const auto j1 = static_cast<std::int64_t>(std::floor((rect.y0 + rect.h) / tile_));
  for (std::int64_t i = i0; i <= i1; ++i) {
    for (std::int64_t j = j0; j <= j1; ++j) {
      for (const MarkedPoint& p : tile(i, j)) {
        if (rect.contains(p.position)) out.push_back(p);
      }
    }
  }
  return out;
}

std::vector<MarkedPoint> PoissonField::points_in(const Ball& ball) const {
  std::vector<MarkedPoint> out;
  for (const MarkedPoint& p : points_in(ball.bounding_rect())) {
    if (ball.contains(p.position)) out.push_back(p);
  }
  return out;
}

}  // namespace gilbert
