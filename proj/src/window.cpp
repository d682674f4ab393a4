#include "gilbert/window.hpp"

namespace gilbert {

double Window::area() const {
  return std::visit([](const auto& s) { return s.area(); }, shape_);
}

bool Window::contains(Vec2 p) const {
  return std::visit([p](const auto& s) { return s.contains(p); }, shape_);
}

bool Window::contains_ball(Vec2 c, double r) const {
  return std::visit([&](const auto& s) { return s.contains_ball(c, r); }, shape_);
}

Rect Window::bounding_rect() const {
  if (const Rect* r = rect()) return *r;
  return ball()->bounding_rect();
}

bool Window::is_proper() const {
  if (const Rect* r = rect()) return r->w > 0.0 && r->h > 0.0;
  return ball()->r > 0.0;
}

}  // namespace gilbert
