#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>

namespace gilbert {

/// Relative tolerance for parallelism, coincidence and tie tests.
inline constexpr double kGeomEps = 1e-9;

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

std::ostream& operator<<(std::ostream& os, Vec2 v);

using SeedId = std::uint64_t;

enum class Sign : std::uint8_t { Plus = 0, Minus = 1 };

inline constexpr Sign opposite(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
inline constexpr double sign_factor(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }
inline constexpr char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

/// One directional half of a seed's crack: the x+ or x- branch.
struct BranchId {
  SeedId seed = 0;
  Sign sign = Sign::Plus;

  friend constexpr auto operator<=>(const BranchId&, const BranchId&) = default;
};

std::ostream& operator<<(std::ostream& os, const BranchId& b);

/// Seed location with its undirected growth angle in [0, pi).
struct MarkedPoint {
  Vec2 position;
  double mark = 0.0;
  SeedId id = 0;
};

/// Returns (cos mark, sin mark). Throws DomainError unless 0 <= mark < pi.
Vec2 mark_to_direction(double mark);

struct Ray {
  Vec2 origin;
  Vec2 direction;
  BranchId owner;
};

/// The branch of `p` with the given sign, as a ray from the seed.
Ray branch_ray(const MarkedPoint& p, Sign sign);

/// Length in [0, +inf]. Infinity is a state of its own, queried explicitly.
class ExtLength {
public:
  constexpr ExtLength() = default;
  explicit ExtLength(double v);

  static constexpr ExtLength infinite() {
    ExtLength l;
    l.value_ = std::numeric_limits<double>::infinity();
    return l;
  }

  constexpr bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
  constexpr bool is_finite() const { return !is_infinite(); }

  /// Throws DomainError for an infinite length.
  double finite_value() const;

  /// IEEE view; +inf for infinite lengths.
  constexpr double as_double() const { return value_; }

  friend constexpr bool operator==(ExtLength a, ExtLength b) { return a.value_ == b.value_; }
  friend constexpr auto operator<=>(ExtLength a, ExtLength b) { return a.value_ <=> b.value_; }

private:
  double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, ExtLength l);

inline ExtLength max(ExtLength a, ExtLength b) { return a < b ? b : a; }

struct RayHit {
  Vec2 point;
  double s_a = 0.0;  // arrival length along a
  double s_b = 0.0;  // arrival length along b
};

/// Forward intersection of two rays. Empty when parallel-distinct, when the
/// meeting point lies behind either origin, or for collinear rays that do
/// not overlap. Collinear overlapping rays throw DegenerateConfiguration.
///
/// Exactly symmetric: swapping the arguments swaps s_a and s_b bit-for-bit
/// and yields the identical point.
std::optional<RayHit> ray_intersection(const Ray& a, const Ray& b);

}  // namespace gilbert
