#pragma once

#include "gilbert/engine.hpp"
#include "gilbert/geom.hpp"

namespace testutil {

inline gilbert::MarkedConfig demo2() {
  using namespace gilbert;
  MarkedConfig c;
  c.points = {{{0, 0}, 0.0, 0}, {{1, 2}, kPi / 2, 1}};
  return c;
}

// demo2 plus c = ((-1, 5), pi/2)
inline gilbert::MarkedConfig demo3() {
  using namespace gilbert;
  MarkedConfig c = demo2();
  c.points.push_back({{-1, 5}, kPi / 2, 2});
  return c;
}

}  // namespace testutil
