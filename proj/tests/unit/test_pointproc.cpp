#include "gilbert/error.hpp"
#include "gilbert/pointproc.hpp"
#include "gilbert/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace gilbert;

TEST_CASE("zero-area window gives an empty configuration") {
  CHECK(sample_poisson(Rect{0, 0, 0, 5}, {1.0, 1, 0}).points.empty());
  CHECK(sample_poisson(Ball{{0, 0}, 0.0}, {1.0, 1, 0}).points.empty());
}

TEST_CASE("invalid intensity or window") {
  CHECK_THROWS_AS(sample_poisson(Rect{0, 0, 1, 1}, {0.0, 1, 0}), DomainError);
  CHECK_THROWS_AS(sample_poisson(Rect{0, 0, 1, 1}, {-1.0, 1, 0}), DomainError);
  CHECK_THROWS_AS(sample_poisson(Rect{0, 0, -1, 1}, {1.0, 1, 0}), DomainError);
}

TEST_CASE("sampling is reproducible and stream dependent") {
  const auto a = sample_poisson(Rect{0, 0, 5, 5}, {1.0, 9, 3});
  const auto b = sample_poisson(Rect{0, 0, 5, 5}, {1.0, 9, 3});
  const auto c = sample_poisson(Rect{0, 0, 5, 5}, {1.0, 9, 4});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.points[i].position == b.points[i].position);
    CHECK(a.points[i].mark == b.points[i].mark);
  }
  CHECK((a.size() != c.size() || a.points.front().position != c.points.front().position));
}

TEST_CASE("unit square counts have Poisson moments") {
  const int n = 10000;
  std::vector<double> counts(n);
  for (int i = 0; i < n; ++i) counts[i] = static_cast<double>(sample_poisson(Rect{0, 0, 1, 1}, {1.0, 2, std::uint64_t(i)}).size());
  const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / n;
  double ss = 0.0;
  for (double c : counts) ss += (c - mean) * (c - mean);
  const double var = ss / (n - 1);
  CHECK(std::abs(mean - 1.0) <= 0.03);
  CHECK(std::abs(var - 1.0) <= 0.06);

  // Counts of neighbouring streams are uncorrelated.
  double cov = 0.0;
  for (int i = 0; i + 1 < n; i += 2) cov += (counts[i] - mean) * (counts[i + 1] - mean);
  const double rho = cov / (n / 2) / var;
  CHECK(std::abs(rho) < 0.05);
}

TEST_CASE("marks and positions are uniform") {
  std::vector<double> marks, xs;
  for (std::uint64_t i = 0; marks.size() < 10000; ++i) {
    for (const MarkedPoint& p : sample_poisson(Rect{0, 0, 4, 4}, {1.0, 6, i}).points) {
      marks.push_back(p.mark);
      xs.push_back(p.position.x);
      CHECK(p.mark >= 0.0);
      CHECK(p.mark < kPi);
    }
  }
  auto ks_uniform = [](std::vector<double> v, double scale) {
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double cdf = v[i] / scale;
      d = std::max({d, (i + 1) / n - cdf, cdf - i / n});
    }
    return stats::kolmogorov_survival(std::sqrt(n) * d);
  };
  CHECK(ks_uniform(marks, kPi) >= 0.01);
  CHECK(ks_uniform(xs, 4.0) >= 0.01);
}

TEST_CASE("ball windows keep points inside") {
  const Ball b{{2, -1}, 3.0};
  for (std::uint64_t i = 0; i < 20; ++i) {
    for (const MarkedPoint& p : sample_poisson(b, {2.0, 1, i}).points) CHECK(b.contains(p.position));
  }
}

TEST_CASE("restriction to a sub-window matches direct sampling in moments") {
  const int n = 4000;
  std::vector<double> restricted(n), direct(n);
  const Rect sub{1, 1, 2, 2};
  for (int i = 0; i < n; ++i) {
    const auto big = sample_poisson(Rect{0, 0, 4, 4}, {1.0, 12, std::uint64_t(i)});
    restricted[i] = static_cast<double>(std::count_if(big.points.begin(), big.points.end(),
                                                      [&](const MarkedPoint& p) { return sub.contains(p.position); }));
    direct[i] = static_cast<double>(sample_poisson(sub, {1.0, 13, std::uint64_t(i)}).size());
  }
  const auto a = stats::mean_and_se(restricted);
  const auto b = stats::mean_and_se(direct);
  CHECK(std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("add_point") {
  MarkedConfig empty;
  const MarkedConfig one = add_point(empty, {0, 0}, {1.0, 5, 0});
  REQUIRE(one.size() == 1);
  CHECK(one.points[0].mark >= 0.0);
  CHECK(one.points[0].mark < kPi);
  CHECK_THROWS_AS(add_point(one, {0, 0}, {1.0, 5, 0}), DegenerateConfiguration);

  const MarkedConfig more = add_point(sample_poisson(Rect{0, 0, 3, 3}, {1.0, 5, 1}), {1.5, 1.5}, {1.0, 5, 1});
  std::vector<SeedId> ids;
  for (const auto& p : more.points) ids.push_back(p.id);
  std::sort(ids.begin(), ids.end());
  CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());

  std::vector<double> marks;
  for (std::uint64_t i = 0; i < 2000; ++i) marks.push_back(add_point(empty, {0, 0}, {1.0, 5, i}).points[0].mark);
  std::sort(marks.begin(), marks.end());
  double d = 0.0;
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const double cdf = marks[i] / kPi;
    d = std::max({d, (i + 1.0) / marks.size() - cdf, cdf - double(i) / marks.size()});
  }
  CHECK(stats::kolmogorov_survival(std::sqrt(2000.0) * d) >= 0.01);
}

TEST_CASE("PoissonField regions are mutually consistent") {
  const PoissonField field({1.0, 77, 0});
  const auto big = field.points_in(Rect{-6, -6, 12, 12});
  const auto ball = field.points_in(Ball{{0.5, -0.5}, 4.0});
  for (const MarkedPoint& p : ball) {
    CHECK(std::any_of(big.begin(), big.end(), [&](const MarkedPoint& q) {
      return q.id == p.id && q.position == p.position && q.mark == p.mark;
    }));
  }
  std::size_t inside = 0;
  for (const MarkedPoint& q : big) inside += Ball{{0.5, -0.5}, 4.0}.contains(q.position);
  CHECK(inside == ball.size());

  const PoissonField other({1.0, 77, 0}, 1);
  for (const MarkedPoint& p : other.points_in(Rect{-6, -6, 12, 12})) {
    CHECK(std::none_of(big.begin(), big.end(), [&](const MarkedPoint& q) { return q.id == p.id; }));
  }
}
