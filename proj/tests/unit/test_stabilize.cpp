#include "gilbert/error.hpp"
#include "gilbert/stabilize.hpp"

#include <doctest.h>

#include <cmath>

using namespace gilbert;

namespace {

// A source with no points at all.
class EmptySource final : public PlaneSource {
public:
  std::vector<MarkedPoint> points_in(const Ball&) const override { return {}; }
  std::vector<MarkedPoint> points_in(const Rect&) const override { return {}; }
};

}  // namespace

TEST_CASE("empty environment never certifies") {
  const EmptySource empty;
  const MarkedPoint x{{0, 0}, 0.4, kInsertedIdBase};
  const StabilizationResult r = stabilize_at(empty, std::span(&x, 1), x.id, 10);
  CHECK_FALSE(r.certified);
  CHECK(r.xi_plus.is_infinite());
  CHECK(r.xi_minus.is_infinite());
  CHECK(r.windows_tried == 10);
  CHECK(r.rho_hat == 0);
}

TEST_CASE("stabilize_at preconditions") {
  const EmptySource empty;
  const MarkedPoint x{{0, 0}, 0.4, kInsertedIdBase};
  CHECK_THROWS_AS(stabilize_at(empty, std::span(&x, 1), x.id, 0), DomainError);
  CHECK_THROWS_AS(stabilize_at(empty, std::span(&x, 1), x.id + 1, 5), LookupError);
}

TEST_CASE("certified results satisfy R <= rho_hat <= m_max") {
  int certified = 0;
  for (std::uint64_t i = 0; i < 300; ++i) {
    const StabilizationResult r = whole_plane_xi({0, 0}, {1.0, 3, i}, 64);
    if (!r.certified) continue;
    ++certified;
    CHECK(r.xi_plus.is_finite());
    CHECK(r.xi_minus.is_finite());
    CHECK(r.radius == 2.0 * std::max(r.xi_plus.finite_value(), r.xi_minus.finite_value()));
    CHECK(r.radius <= r.rho_hat);
    CHECK(r.rho_hat <= 64);
  }
  CHECK(certified >= 297);
}

TEST_CASE("certified values do not depend on m_max") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const StabilizationResult a = whole_plane_xi({1, 2}, {1.0, 8, i}, 64);
    if (!a.certified) continue;
    const StabilizationResult b = whole_plane_xi({1, 2}, {1.0, 8, i}, 200);
    CHECK(b.certified);
    CHECK(a.xi_plus == b.xi_plus);
    CHECK(a.xi_minus == b.xi_minus);
    CHECK(a.rho_hat == b.rho_hat);
  }
}

TEST_CASE("certify_point") {
  MarkedConfig c;
  // Two vertical seeds cross the x-axis at time 0.2, well before seed 0's
  // branches arrive at time 1.
  c.points = {{{0, 0}, 0.0, 0}, {{1, -0.2}, kPi / 2, 1}, {{-1, 0.2}, kPi / 2, 2}};
  const Tessellation t = build(c);
  REQUIRE(t.length(0, Sign::Plus).finite_value() == doctest::Approx(1.0));
  REQUIRE(t.length(0, Sign::Minus).finite_value() == doctest::Approx(1.0));
  CHECK(certify_point(t, Rect{-10, -10, 20, 20}, 0));
  CHECK(certify_point(t, Ball{{0, 0}, 2.0 + 1e-9}, 0));
  CHECK_FALSE(certify_point(t, Rect{-0.1, -0.1, 0.2, 0.2}, 0));
  CHECK_FALSE(certify_point(t, Rect{-10, -10, 20, 20}, 1));
}

TEST_CASE("certified points survive outside extensions") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const ProcessParams p{1.0, 31, i};
    const Rect inner{0, 0, 12, 12};
    const MarkedConfig small = sample_poisson(inner, p);
    const Tessellation t = build(small);
    MarkedConfig extended = small;
    for (const MarkedPoint& q : sample_poisson(Rect{-8, -8, 28, 28}, {1.0, 32, i}).points) {
      if (inner.contains(q.position)) continue;
      extended.points.push_back({q.position, q.mark, q.id + 100000});
    }
    const Tessellation te = build(extended);
    for (const MarkedPoint& q : small.points) {
      const ExtLength lp = t.length(q.id, Sign::Plus), lm = t.length(q.id, Sign::Minus);
      if (lp.is_infinite() || lm.is_infinite() || !certify_point(t, inner, q.id)) continue;
      CHECK(te.length(q.id, Sign::Plus) == lp);
      CHECK(te.length(q.id, Sign::Minus) == lm);
    }
  }
}

TEST_CASE("stab_tail: survival starts at 1 and never increases") {
  const double grid[] = {0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0};
  const TailReport tail = stab_tail(1.0, grid, 200, {1.0, 4, 0}, 64);
  REQUIRE(tail.points.size() == std::size(grid));
  CHECK(tail.points[0].survival == 1.0);
  for (std::size_t i = 1; i < tail.points.size(); ++i) CHECK(tail.points[i].survival <= tail.points[i - 1].survival);
  for (const TailPoint& pt : tail.points) CHECK(pt.std_error >= 0.0);
  CHECK_THROWS_AS(stab_tail(1.0, grid, 50, {1.0, 4, 0}, 64), DomainError);
}

TEST_CASE("stab_tail gives up when too few runs certify") {
  const double grid[] = {1.0};
  CHECK_THROWS_AS(stab_tail(1.0, grid, 100, {1.0, 4, 0}, 1), HarnessError);
}

TEST_CASE("exponential fit on an exact exponential") {
  TailReport tail;
  tail.n_rep = 1000;
  for (int k = 0; k < 10; ++k) tail.points.push_back({0.5 * k, 0.9 * std::exp(-0.8 * 0.5 * k), 0.0});
  tail.points[0].survival = 1.0;
  const TailFit fit = fit_exponential_tail(tail);
  CHECK(fit.slope < 0.0);
  CHECK(fit.r_squared > 0.99);
  CHECK(fit.nonincreasing);
  for (const TailPoint& pt : tail.points) CHECK(pt.survival <= fit.prefactor * std::exp(-fit.rate * pt.r) * (1 + 1e-12));
}
