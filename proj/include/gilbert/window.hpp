#pragma once

#include "gilbert/geom.hpp"

#include <variant>

namespace gilbert {

/// Axis-aligned [x0, x0 + w] x [y0, y0 + h].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x0 + w && p.y >= y0 && p.y <= y0 + h; }
  /// B(c, r) is a subset of the rectangle.
  bool contains_ball(Vec2 c, double r) const {
    return c.x - r >= x0 && c.x + r <= x0 + w && c.y - r >= y0 && c.y + r <= y0 + h;
  }
  Rect padded(double pad) const { return {x0 - pad, y0 - pad, w + 2 * pad, h + 2 * pad}; }
  Vec2 center() const { return {x0 + 0.5 * w, y0 + 0.5 * h}; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Closed ball B(center, r).
struct Ball {
  Vec2 center;
  double r = 0.0;

  double area() const { return kPi * r * r; }
  bool contains(Vec2 p) const { return distance(p, center) <= r; }
  bool contains_ball(Vec2 c, double rr) const { return distance(c, center) + rr <= r; }
  Rect bounding_rect() const { return {center.x - r, center.y - r, 2 * r, 2 * r}; }

  friend bool operator==(const Ball&, const Ball&) = default;
};

/// Sampling or certification region: a rectangle or a ball.
class Window {
public:
  Window(Rect r) : shape_(r) {}
  Window(Ball b) : shape_(b) {}

  double area() const;
  bool contains(Vec2 p) const;
  bool contains_ball(Vec2 c, double r) const;
  Rect bounding_rect() const;
  /// Positive extent in every direction.
  bool is_proper() const;

  const Rect* rect() const { return std::get_if<Rect>(&shape_); }
  const Ball* ball() const { return std::get_if<Ball>(&shape_); }

private:
  std::variant<Rect, Ball> shape_;
};

}  // namespace gilbert
