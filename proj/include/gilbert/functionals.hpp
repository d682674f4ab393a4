#pragma once

#include "gilbert/geom.hpp"
#include "gilbert/pointproc.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gilbert {

/// Per-point weight phi(l1, l2) from the two branch lengths of a seed.
class Phi {
public:
  enum class Kind { TotalLength, PowerSum, Threshold };

  static Phi total_length() { return Phi(Kind::TotalLength, 1.0); }
  /// (l1 + l2)^alpha; throws DomainError for alpha < 0.
  static Phi power_sum(double alpha);
  /// 1{l1 + l2 >= theta}; throws DomainError unless theta > 0.
  static Phi threshold(double theta);
  /// Limit theta -> 0+: counts every point with positive total length.
  static Phi threshold_zero_plus();

  /// "total-length", "power:<alpha>", "threshold:<theta>", "threshold:0+".
  static Phi parse(const std::string& text);
  std::string name() const;

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  /// Polynomial growth exponent q.
  double growth_exponent() const;
  /// Homogeneity degree k, absent for the threshold kind.
  std::optional<double> degree() const;

  /// Extended evaluation; +inf for an unbounded kind with an infinite argument.
  double operator()(ExtLength l1, ExtLength l2) const;

  friend bool operator==(const Phi&, const Phi&) = default;

private:
  Phi(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_;
  double param_;
};

double phi_eval(const Phi& phi, ExtLength l1, ExtLength l2);

/// Continuous f on [0,1]^2 with a name for reports.
struct TestFunction {
  std::string name;
  std::function<double(double, double)> eval;

  double operator()(Vec2 p) const { return eval(p.x, p.y); }

  static TestFunction constant(double c);
  static TestFunction coordinate_x();
  static TestFunction coordinate_y();
  static TestFunction product_xy();
  /// cos(kx pi x) cos(ky pi y)
  static TestFunction cos_mode(int kx, int ky);
  /// sin(kx pi x) sin(ky pi y)
  static TestFunction sin_mode(int kx, int ky);

  /// "const1", "zero", "x", "y", "xy", "cos", "cos:<kx>,<ky>", "sin:<kx>,<ky>".
  static TestFunction parse(const std::string& text);
};

/// Tensor Gauss-Legendre quadrature of g over the unit square.
double unit_square_integral(const std::function<double(double, double)>& g);

struct Atom {
  Vec2 location;       // x / sqrt(lambda)
  double weight = 0.0;
  bool certified = false;
  bool excluded = false;  // infinite weight; left out of integrals
};

struct EmpiricalMeasure {
  std::vector<Atom> atoms;
  double lambda = 0.0;
  Phi phi = Phi::total_length();
  double certified_fraction = 1.0;
  std::size_t excluded_count = 0;
};

/// Samples the marked process on Q_lambda = [0, sqrt(lambda)]^2 padded on
/// every side, builds once, and places phi(xi+, xi-) at x / sqrt(lambda)
/// for each point of Q_lambda. The realization is the PoissonField named by
/// params, so measures for different lambda share one process.
EmpiricalMeasure empirical_measure(double lambda, const ProcessParams& params, const Phi& phi, double padding);

/// Padding of three expected stabilization scales at the given intensity.
double default_padding(double intensity);

struct IntegralReport {
  double value = 0.0;           // all non-excluded atoms
  double certified_value = 0.0; // certified atoms only
  std::size_t excluded = 0;
};

IntegralReport integrate(const EmpiricalMeasure& measure, const TestFunction& f);

}  // namespace gilbert
