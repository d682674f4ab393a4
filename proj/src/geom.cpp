#include "gilbert/geom.hpp"

#include "gilbert/error.hpp"

#include <string>

namespace gilbert {

std::ostream& operator<<(std::ostream& os, Vec2 v) {
  return os << '(' << v.x << ", " << v.y << ')';
}

std::ostream& operator<<(std::ostream& os, const BranchId& b) {
  return os << b.seed << sign_char(b.sign);
}

Vec2 mark_to_direction(double mark) {
  if (!(mark >= 0.0 && mark < kPi)) {
    throw DomainError("mark must lie in [0, pi), got " + std::to_string(mark));
  }
  return {std::cos(mark), std::sin(mark)};
}

Ray branch_ray(const MarkedPoint& p, Sign sign) {
  const Vec2 d = mark_to_direction(p.mark);
  return {p.position, sign_factor(sign) * d, {p.id, sign}};
}

ExtLength::ExtLength(double v) : value_(v) {
  if (!(v >= 0.0)) {
    throw DomainError("length must be nonnegative");
  }
}

double ExtLength::finite_value() const {
  if (is_infinite()) {
    throw DomainError("length is infinite");
  }
  return value_;
}

std::ostream& operator<<(std::ostream& os, ExtLength l) {
  if (l.is_infinite()) return os << "inf";
  return os << l.as_double();
}

std::optional<RayHit> ray_intersection(const Ray& a, const Ray& b) {
  const Vec2 w = b.origin - a.origin;
  const double denom = cross(a.direction, b.direction);
  const double scale = 1.0 + std::abs(w.x) + std::abs(w.y);

  if (std::abs(denom) <= kGeomEps) {
    // Parallel supporting lines; distinct unless the offset is along them.
    if (std::abs(cross(w, a.direction)) > kGeomEps * scale) {
      return std::nullopt;
    }
    const double along = dot(w, a.direction);
    const bool same_way = dot(a.direction, b.direction) > 0.0;
    if (same_way || along >= -kGeomEps * scale) {
      throw DegenerateConfiguration("collinear overlapping branches");
    }
    return std::nullopt;
  }

  // Both parameters are formed from sign-symmetric operations, so a swap of
  // arguments negates numerator and denominator exactly.
  const double s_a = cross(w, b.direction) / denom;
  const double s_b = cross(w, a.direction) / denom;
  if (!(s_a >= 0.0) || !(s_b >= 0.0)) {
    return std::nullopt;
  }
  const Vec2 pa = a.origin + s_a * a.direction;
  const Vec2 pb = b.origin + s_b * b.direction;
  return RayHit{0.5 * (pa + pb), s_a, s_b};
}

}  // namespace gilbert
