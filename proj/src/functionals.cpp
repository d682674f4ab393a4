#include "gilbert/functionals.hpp"

#include "gilbert/engine.hpp"
#include "gilbert/error.hpp"
#include "gilbert/stabilize.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace gilbert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mean stabilization radius E[2 max(xi+, xi-)] at unit intensity, measured
// with stab_tail (n_rep = 2000); scales as 1/sqrt(tau).
constexpr double kMeanRadiusUnitIntensity = 3.0;

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw DomainError("not a number: '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw DomainError("not an integer: '" + s + "'");
  return v;
}

struct GaussLegendre {
  static constexpr int kOrder = 16;
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};

  GaussLegendre() {
    for (int i = 0; i < kOrder; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (kOrder + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= kOrder; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

}  // namespace

Phi Phi::power_sum(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("power-sum exponent must be >= 0");
  return Phi(Kind::PowerSum, alpha);
}

Phi Phi::threshold(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("threshold must be positive");
  return Phi(Kind::Threshold, theta);
}

Phi Phi::threshold_zero_plus() {
  return Phi(Kind::Threshold, std::numeric_limits<double>::denorm_min());
}

Phi Phi::parse(const std::string& text) {
  if (text == "total-length") return total_length();
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "power" && !arg.empty()) return power_sum(parse_double(arg));
  if (head == "threshold" && !arg.empty()) {
    if (arg == "0+") return threshold_zero_plus();
    return threshold(parse_double(arg));
  }
  throw DomainError("unknown phi '" + text + "'");
}

std::string Phi::name() const {
  switch (kind_) {
    case Kind::TotalLength:
      return "total-length";
    case Kind::PowerSum: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "power:%.17g", param_);
      return buf;
    }
    case Kind::Threshold: {
      if (param_ == std::numeric_limits<double>::denorm_min()) return "threshold:0+";
      char buf[64];
      std::snprintf(buf, sizeof buf, "threshold:%.17g", param_);
      return buf;
    }
  }
  return "?";
}

double Phi::growth_exponent() const {
  switch (kind_) {
    case Kind::TotalLength:
      return 1.0;
    case Kind::PowerSum:
      return param_;
    case Kind::Threshold:
      return 0.0;
  }
  return 0.0;
}

std::optional<double> Phi::degree() const {
  if (kind_ == Kind::Threshold) return std::nullopt;
  return growth_exponent();
}

double Phi::operator()(ExtLength l1, ExtLength l2) const {
  const double sum = l1.as_double() + l2.as_double();
  switch (kind_) {
    case Kind::TotalLength:
      return sum;
    case Kind::PowerSum:
      if (param_ == 0.0) return 1.0;
      return sum == kInf ? kInf : std::pow(sum, param_);
    case Kind::Threshold:
      return sum >= param_ ? 1.0 : 0.0;
  }
  return 0.0;
}

double phi_eval(const Phi& phi, ExtLength l1, ExtLength l2) { return phi(l1, l2); }

TestFunction TestFunction::constant(double c) {
  char buf[64];
  if (c == 1.0) {
    std::snprintf(buf, sizeof buf, "const1");
  } else if (c == 0.0) {
    std::snprintf(buf, sizeof buf, "zero");
  } else {
    std::snprintf(buf, sizeof buf, "const:%.17g", c);
  }
  return {buf, [c](double, double) { return c; }};
}

TestFunction TestFunction::coordinate_x() {
  return {"x", [](double x, double) { return x; }};
}

TestFunction TestFunction::coordinate_y() {
  return {"y", [](double, double y) { return y; }};
}

TestFunction TestFunction::product_xy() {
  return {"xy", [](double x, double y) { return x * y; }};
}

TestFunction TestFunction::cos_mode(int kx, int ky) {
  return {"cos:" + std::to_string(kx) + "," + std::to_string(ky),
          [kx, ky](double x, double y) { return std::cos(kx * kPi * x) * std::cos(ky * kPi * y); }};
}

TestFunction TestFunction::sin_mode(int kx, int ky) {
  return {"sin:" + std::to_string(kx) + "," + std::to_string(ky),
          [kx, ky](double x, double y) { return std::sin(kx * kPi * x) * std::sin(ky * kPi * y); }};
}

TestFunction TestFunction::parse(const std::string& text) {
  if (text == "const1") return constant(1.0);
  if (text == "zero") return constant(0.0);
  if (text == "x") return coordinate_x();
  if (text == "y") return coordinate_y();
  if (text == "xy") return product_xy();
  if (text == "cos") return cos_mode(1, 1);
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    const std::string arg = text.substr(colon + 1);
    if (head == "const") return constant(parse_double(arg));
    const auto comma = arg.find(',');
    if ((head == "cos" || head == "sin") && comma != std::string::npos) {
      const int kx = parse_int(arg.substr(0, comma));
      const int ky = parse_int(arg.substr(comma + 1));
      return head == "cos" ? cos_mode(kx, ky) : sin_mode(kx, ky);
    }
  }
  throw DomainError("unknown test function '" + text + "'");
}

double unit_square_integral(const std::function<double(double, double)>& g) {
  static const GaussLegendre gl;
  constexpr int kPanels = 8;
  const double h = 1.0 / kPanels;
  double total = 0.0;
  for (int px = 0; px < kPanels; ++px) {
    for (int py = 0; py < kPanels; ++py) {
      for (int i = 0; i < GaussLegendre::kOrder; ++i) {
        const double x = (px + 0.5 * (gl.nodes[i] + 1.0)) * h;
        for (int j = 0; j < GaussLegendre::kOrder; ++j) {
          const double y = (py + 0.5 * (gl.nodes[j] + 1.0)) * h;
          total += gl.weights[i] * gl.weights[j] * g(x, y);
        }
      }
    }
  }
  return total * 0.25 * h * h;
}

double default_padding(double intensity) {
  if (!(intensity > 0.0)) throw DomainError("intensity must be positive");
  return 3.0 * kMeanRadiusUnitIntensity / std::sqrt(intensity);
}

EmpiricalMeasure empirical_measure(double lambda, const ProcessParams& params, const Phi& phi, double padding) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  if (!(padding >= 0.0)) throw DomainError("padding must be nonnegative");
  const double side = std::sqrt(lambda);
  const Rect q{0.0, 0.0, side, side};
  const Rect padded = q.padded(padding);

  const PoissonField field(params);
  MarkedConfig config;
  config.points = field.points_in(padded);
  config.window = padded;
  const Tessellation tess = build(config);

  EmpiricalMeasure mu;
  mu.lambda = lambda;
  mu.phi = phi;
  std::size_t certified = 0;
  const Window window(padded);
  for (std::size_t i = 0; i < tess.seed_count(); ++i) {
    const MarkedPoint& p = tess.config().points[i];
    if (p.position.x >= side || p.position.y >= side || p.position.x < 0.0 || p.position.y < 0.0) continue;
    Atom atom;
    atom.location = {p.position.x / side, p.position.y / side};
    atom.weight = phi(tess.length_at(i, Sign::Plus), tess.length_at(i, Sign::Minus));
    atom.certified = certify_point(tess, window, p.id);
    atom.excluded = !std::isfinite(atom.weight);
    certified += atom.certified ? 1 : 0;
    mu.excluded_count += atom.excluded ? 1 : 0;
    mu.atoms.push_back(atom);
  }
  mu.certified_fraction = mu.atoms.empty() ? 1.0 : static_cast<double>(certified) / mu.atoms.size();
  return mu;
}

IntegralReport integrate(const EmpiricalMeasure& measure, const TestFunction& f) {
  IntegralReport out;
  for (const Atom& a : measure.atoms) {
    if (a.excluded) {
      ++out.excluded;
      continue;
    }
    const double v = a.weight * f(a.location);
    out.value += v;
    if (a.certified) out.certified_value += v;
  }
  return out;
}

}  // namespace gilbert
