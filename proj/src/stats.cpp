#include "gilbert/stats.hpp"

#include "gilbert/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gilbert::stats {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::uint64_t kSaltPoint = 1;
constexpr std::uint64_t kSaltPair = 2;
constexpr std::uint64_t kSaltVariance = 3;
constexpr std::uint64_t kSaltMeasure = 4;
constexpr std::uint64_t kSaltMassTarget = 5;

// Offsets inside one replicate's block of stream indices.
constexpr std::uint64_t kSecondField = std::uint64_t{1} << 47;
constexpr std::uint64_t kResampleStride = std::uint64_t{1} << 48;
constexpr int kMaxResamples = 16;

// Mark tags for points inserted by the pair estimators.
constexpr std::uint64_t kTagOrigin = 1;
constexpr std::uint64_t kTagSingle = 2;
constexpr std::uint64_t kTagRotation = 3;
constexpr std::uint64_t kTagNodeBase = 16;

constexpr double kMaxExcludedFraction = 0.10;

ProcessParams replicate(const ProcessParams& base, double intensity, std::uint64_t salt, std::size_t i) {
  ProcessParams p = base;
  p.intensity = intensity;
  p.stream = base.stream + (salt << 40) + static_cast<std::uint64_t>(i);
  return p;
}

void check_rep(std::size_t n_rep, std::size_t minimum, const char* what) {
  if (n_rep < minimum) {
    throw DomainError(std::string(what) + " needs at least " + std::to_string(minimum) + " replicates");
  }
}

// Whole-plane run at `at`, retried once with twice the radius budget.
StabilizationResult point_run(Vec2 at, const ProcessParams& p, int m_max) {
  StabilizationResult r = whole_plane_xi(at, p, m_max);
  if (!r.certified) r = whole_plane_xi(at, p, 2 * m_max);
  return r;
}

EstimatorReport summarize(std::vector<double> values, std::size_t n_total, double intensity, const Phi& phi,
                          const ProcessParams& params) {
  EstimatorReport rep;
  rep.intensity = intensity;
  rep.phi = phi.name();
  rep.master_seed = params.master_seed;
  rep.excluded = n_total - values.size();
  rep.certified_fraction = n_total == 0 ? 0.0 : static_cast<double>(values.size()) / n_total;
  if (static_cast<double>(rep.excluded) > kMaxExcludedFraction * static_cast<double>(n_total)) {
    throw HarnessError("more than 10% of replicates uncertified after retry; raise m_max");
  }
  const MeanSe m = mean_and_se(values);
  rep.estimate = m.mean;
  rep.std_error = m.std_error;
  rep.n_rep = values.size();
  rep.samples = std::move(values);
  return rep;
}

// Per-replicate whole-plane (xi+, xi-) at `at`; nullopt when uncertified.
std::vector<std::optional<std::pair<ExtLength, ExtLength>>> point_lengths(double intensity, std::size_t n_rep,
                                                                          const ProcessParams& params, int m_max,
                                                                          Vec2 at) {
  std::vector<std::optional<std::pair<ExtLength, ExtLength>>> out(n_rep);
  detail::parallel_for(n_rep, [&](std::size_t i) {
    const StabilizationResult r = point_run(at, replicate(params, intensity, kSaltPoint, i), m_max);
    if (r.certified) out[i] = std::make_pair(r.xi_plus, r.xi_minus);
  });
  return out;
}

/// Points from `near` on a's side of the a-b bisector, from `far` elsewhere.
class SplitSource final : public PlaneSource {
public:
  SplitSource(const PlaneSource& near, const PlaneSource& far, Vec2 a, Vec2 b)
      : near_(near), far_(far), mid_(0.5 * (a + b)), axis_(b - a) {}

  std::vector<MarkedPoint> points_in(const Ball& ball) const override { return merge(near_.points_in(ball), far_.points_in(ball)); }
  std::vector<MarkedPoint> points_in(const Rect& rect) const override { return merge(near_.points_in(rect), far_.points_in(rect)); }

private:
  bool near_side(Vec2 p) const { return dot(p - mid_, axis_) < 0.0; }

  std::vector<MarkedPoint> merge(std::vector<MarkedPoint> from_near, const std::vector<MarkedPoint>& from_far) const {
    std::erase_if(from_near, [this](const MarkedPoint& p) { return !near_side(p.position); });
    for (const MarkedPoint& p : from_far) {
      if (!near_side(p.position)) from_near.push_back(p);
    }
    return from_near;
  }

  const PlaneSource& near_;
  const PlaneSource& far_;
  Vec2 mid_;
  Vec2 axis_;
};

// Coupled pair-correlation sample; nullopt if some run does not certify.
std::optional<double> pair_difference(const PlaneSource& p_field, const PlaneSource& q_field, const Phi& phi,
                                      Vec2 y, double mark_origin, double mark_y, int m_max) {
  const MarkedPoint origin{{0.0, 0.0}, mark_origin, kInsertedIdBase};
  const MarkedPoint other{y, mark_y, kInsertedIdBase + 1};
  const MarkedPoint both[2] = {origin, other};
  const SplitSource split_a(p_field, q_field, origin.position, y);
  const SplitSource split_b(q_field, p_field, origin.position, y);

  const double half = 0.5 * norm(y);
  for (int budget : {m_max, 2 * m_max}) {
    const StabilizationResult a_ind = stabilize_at(split_a, std::span(&origin, 1), origin.id, budget);
    const StabilizationResult b_ind = stabilize_at(split_b, std::span(&other, 1), other.id, budget);
    if (!a_ind.certified || !b_ind.certified) continue;
    // Both determined inside their own open half-plane, where the joint
    // configuration agrees with the split one: the difference is exactly 0.
    if (a_ind.radius < half && b_ind.radius < half) return 0.0;
    const StabilizationResult a = stabilize_at(p_field, both, origin.id, budget);
    const StabilizationResult b = stabilize_at(p_field, both, other.id, budget);
    if (a.certified && b.certified) {
      return phi(a.xi_plus, a.xi_minus) * phi(b.xi_plus, b.xi_minus) -
             phi(a_ind.xi_plus, a_ind.xi_minus) * phi(b_ind.xi_plus, b_ind.xi_minus);
    }
  }
  return std::nullopt;
}

// Runs `body(P, Q, params)` for a replicate, moving to a fresh block of
// streams when a realization turns out degenerate.
template <class Body>
auto with_fields(const ProcessParams& p, Body&& body) {
  for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
    ProcessParams pp = p;
    pp.stream = p.stream + static_cast<std::uint64_t>(attempt) * kResampleStride;
    ProcessParams qq = pp;
    qq.stream = pp.stream + kSecondField;
    const PoissonField p_field(pp, 0);
    const PoissonField q_field(qq, 1);
    try {
      return body(p_field, q_field, pp);
    } catch (const DegenerateConfiguration&) {
      // measure-zero realization; next block
    }
  }
  throw HarnessError("too many degenerate realizations in a row");
}

struct MeasureSample {
  double value = 0.0;
  double certified_fraction = 1.0;
  std::size_t excluded = 0;
  std::size_t atoms = 0;
};

MeasureSample measure_sample(double lambda, const ProcessParams& p, const Phi& phi, const TestFunction& f,
                             double padding) {
  for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
    ProcessParams pp = p;
    pp.stream = p.stream + static_cast<std::uint64_t>(attempt) * kResampleStride;
    try {
      const EmpiricalMeasure mu = empirical_measure(lambda, pp, phi, padding);
      const IntegralReport ir = integrate(mu, f);
      return {ir.value, mu.certified_fraction, ir.excluded, mu.atoms.size()};
    } catch (const DegenerateConfiguration&) {
    }
  }
  throw HarnessError("too many degenerate realizations in a row");
}

std::vector<MeasureSample> measure_samples(double intensity, const Phi& phi, const TestFunction& f, double lambda,
                                           std::size_t n_rep, const ProcessParams& params, double padding) {
  std::vector<MeasureSample> out(n_rep);
  detail::parallel_for(n_rep, [&](std::size_t i) {
    out[i] = measure_sample(lambda, replicate(params, intensity, kSaltMeasure, i), phi, f, padding);
  });
  return out;
}

double resolve_padding(double padding, double intensity) {
  return padding >= 0.0 ? padding : default_padding(intensity);
}

}  // namespace

MeanSe mean_and_se(std::span<const double> xs) {
  if (xs.size() < 2) throw HarnessError("need at least two samples");
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

VarianceEstimate variance_with_jackknife(std::span<const double> xs) {
  if (xs.size() < 3) throw HarnessError("need at least three samples");
  const std::size_t n = xs.size();
  const double dn = static_cast<double>(n);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / dn;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / (dn - 1.0);
  // Leave-one-out variances from the centered sums.
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - mean;
    const double ss_i = ss - d * d * dn / (dn - 1.0);
    loo[i] = ss_i / (dn - 2.0);
  }
  const double loo_mean = std::accumulate(loo.begin(), loo.end(), 0.0) / dn;
  double acc = 0.0;
  for (double v : loo) acc += (v - loo_mean) * (v - loo_mean);
  return {var, std::sqrt((dn - 1.0) / dn * acc)};
}

EstimatorReport estimate_E(double intensity, const Phi& phi, std::size_t n_rep, const ProcessParams& params,
                           int m_max, Vec2 at) {
  check_rep(n_rep, 30, "estimate_E");
  const auto lengths = point_lengths(intensity, n_rep, params, m_max, at);
  std::vector<double> values;
  values.reserve(n_rep);
  for (const auto& l : lengths) {
    if (l) values.push_back(phi(l->first, l->second));
  }
  return summarize(std::move(values), n_rep, intensity, phi, params);
}

EstimatorReport estimate_c0(double intensity, const Phi& phi, std::size_t n_rep, const ProcessParams& params,
                            int m_max, Vec2 at) {
  check_rep(n_rep, 30, "estimate_c0");
  const auto lengths = point_lengths(intensity, n_rep, params, m_max, at);
  std::vector<double> values;
  values.reserve(n_rep);
  for (const auto& l : lengths) {
    if (l) {
      const double v = phi(l->first, l->second);
      values.push_back(v * v);
    }
  }
  return summarize(std::move(values), n_rep, intensity, phi, params);
}

EstimatorReport estimate_cxy(double intensity, const Phi& phi, Vec2 displacement, std::size_t n_rep,
                             const ProcessParams& params, int m_max) {
  check_rep(n_rep, 30, "estimate_cxy");
  if (displacement == Vec2{0.0, 0.0}) throw DomainError("displacement must be nonzero");
  std::vector<std::optional<double>> out(n_rep);
  detail::parallel_for(n_rep, [&](std::size_t i) {
    out[i] = with_fields(replicate(params, intensity, kSaltPair, i),
                         [&](const PoissonField& pf, const PoissonField& qf, const ProcessParams& pp) {
                           return pair_difference(pf, qf, phi, displacement, inserted_mark(pp, kTagOrigin),
                                                  inserted_mark(pp, kTagNodeBase), m_max);
                         });
  });
  std::vector<double> values;
  for (const auto& v : out) {
    if (v) values.push_back(*v);
  }
  return summarize(std::move(values), n_rep, intensity, phi, params);
}

double truncation_radius(const TailFit& fit, double level) {
  if (!(fit.rate > 0.0) || !(fit.prefactor > 0.0)) throw DomainError("tail fit has no positive decay rate");
  return std::max(0.0, std::log(fit.prefactor / level) / fit.rate);
}

TailFit default_tail_fit(double intensity, const ProcessParams& params, int m_max) {
  if (!(intensity > 0.0)) throw DomainError("intensity must be positive");
  std::vector<double> grid;
  for (int k = 1; k <= 40; ++k) grid.push_back(0.5 * k / std::sqrt(intensity));
  return fit_exponential_tail(stab_tail(intensity, grid, 2000, params, m_max));
}

VarianceReport estimate_V(double intensity, const Phi& phi, double r_max, int n_angles, int n_radii,
                          std::size_t n_rep, const ProcessParams& params, int m_max, std::optional<TailFit> tail) {
  check_rep(n_rep, 30, "estimate_V");
  if (!(r_max > 0.0)) throw DomainError("r_max must be positive");
  if (n_angles < 1 || n_radii < 1) throw DomainError("quadrature grid must have at least one node");

  const double dr = r_max / n_radii;
  const double dtheta = 2.0 * kPi / n_angles;
  // Trapezoid in r on r_j = j * dr; the r = 0 end carries zero weight.
  std::vector<double> fine_w(n_radii + 1, 0.0);
  std::vector<double> coarse_w(n_radii + 1, 0.0);
  for (int j = 1; j <= n_radii; ++j) fine_w[j] = (j == n_radii ? 0.5 : 1.0) * dr * (j * dr);
  const bool has_coarse = n_radii % 2 == 0 && n_radii >= 2;
  if (has_coarse) {
    for (int j = 2; j <= n_radii; j += 2) coarse_w[j] = (j == n_radii ? 0.5 : 1.0) * 2.0 * dr * (j * dr);
  }

  struct Sample {
    bool ok = false;
    double c0 = 0.0;
    double fourth = 0.0;
    double fine = 0.0;
    double coarse = 0.0;
  };
  // Every node of every replicate draws its own pair of fields: nodes that
  // share a field are strongly correlated, which costs more than it saves.
  const std::size_t nodes = static_cast<std::size_t>(n_angles) * n_radii;
  std::vector<Sample> samples(n_rep);
  detail::parallel_for(n_rep, [&](std::size_t i) {
    Sample s;
    const ProcessParams base = replicate(params, intensity, kSaltVariance, i * (nodes + 1));
    const auto c0 = with_fields(base, [&](const PoissonField& pf, const PoissonField&, const ProcessParams& pp) {
      const MarkedPoint lone{{0.0, 0.0}, inserted_mark(pp, kTagSingle), kInsertedIdBase};
      StabilizationResult r0 = stabilize_at(pf, std::span(&lone, 1), lone.id, m_max);
      if (!r0.certified) r0 = stabilize_at(pf, std::span(&lone, 1), lone.id, 2 * m_max);
      return r0.certified ? std::optional<double>(phi(r0.xi_plus, r0.xi_minus)) : std::nullopt;
    });
    if (!c0) {
      samples[i] = s;
      return;
    }
    s.c0 = *c0 * *c0;
    s.fourth = s.c0 * s.c0;

    Rng rot_rng(substream_seed(base.master_seed, base.stream, kTagRotation));
    const double offset = uniform_mark(rot_rng) / kPi;
    for (int j = 1; j <= n_radii; ++j) {
      double ring = 0.0;
      for (int k = 0; k < n_angles; ++k) {
        const double theta = (k + offset) * dtheta;
        const Vec2 y{j * dr * std::cos(theta), j * dr * std::sin(theta)};
        const std::size_t node = static_cast<std::size_t>(j - 1) * n_angles + k;
        ProcessParams np = base;
        np.stream = base.stream + 1 + node;
        const auto d = with_fields(np, [&](const PoissonField& pf, const PoissonField& qf, const ProcessParams& pp) {
          return pair_difference(pf, qf, phi, y, inserted_mark(pp, kTagOrigin), inserted_mark(pp, kTagNodeBase),
                                 m_max);
        });
        if (!d) {
          samples[i] = Sample{};
          return;
        }
        ring += *d;
      }
      s.fine += fine_w[j] * dtheta * ring;
      s.coarse += coarse_w[j] * dtheta * ring;
    }
    s.ok = true;
    samples[i] = s;
  });

  std::vector<double> c0s, fines, totals, coarse_totals;
  double fourth = 0.0;
  for (const Sample& s : samples) {
    if (!s.ok) continue;
    c0s.push_back(s.c0);
    fines.push_back(s.fine);
    totals.push_back(s.c0 + intensity * s.fine);
    coarse_totals.push_back(s.c0 + intensity * s.coarse);
    fourth += s.fourth;
  }

  VarianceReport out;
  out.total = summarize(totals, n_rep, intensity, phi, params);
  out.c0 = mean_and_se(c0s);
  out.integral = mean_and_se(fines);
  out.r_max = r_max;
  if (has_coarse) {
    out.coarse_estimate = mean_and_se(coarse_totals).mean;
    out.refinement_warning = std::abs(out.coarse_estimate - out.total.estimate) > out.total.std_error;
  } else {
    out.coarse_estimate = kNaN;
  }
  out.truncation_bound = kNaN;
  if (tail && tail->rate > 0.0 && tail->prefactor > 0.0) {
    // |c[0,x]| <= 2 sqrt(E phi^4) sqrt(P(some radius >= |x|/2)), the
    // probability bounded by 4 M e^{-C |x| / 2}; integrated over |x| > r_max.
    const double m4 = fourth / static_cast<double>(c0s.size());
    const double k = tail->rate / 4.0;
    const double amplitude = 2.0 * std::sqrt(m4) * 2.0 * std::sqrt(tail->prefactor);
    out.truncation_bound =
        intensity * amplitude * 2.0 * kPi * std::exp(-k * r_max) * (r_max / k + 1.0 / (k * k));
  }
  return out;
}

std::vector<double> measure_integrals(double intensity, const Phi& phi, const TestFunction& f, double lambda,
                                      std::size_t n_rep, const ProcessParams& params, double padding) {
  const auto samples = measure_samples(intensity, phi, f, lambda, n_rep, params, resolve_padding(padding, intensity));
  std::vector<double> out;
  out.reserve(samples.size());
  for (const MeasureSample& s : samples) out.push_back(s.value);
  return out;
}

Table lln_experiment(double intensity, const Phi& phi, const TestFunction& f, std::span<const double> lambdas,
                     std::size_t n_rep, const ProcessParams& params, double padding,
                     std::optional<double> mass_per_point) {
  check_rep(n_rep, 2, "lln_experiment");
  if (!std::is_sorted(lambdas.begin(), lambdas.end())) throw DomainError("lambda list must be increasing");
  const double integral_f = unit_square_integral(f.eval);
  double mass = 0.0;
  if (mass_per_point) {
    mass = *mass_per_point;
  } else {
    ProcessParams p = params;
    p.stream = params.stream + (kSaltMassTarget << 40);
    mass = estimate_E(intensity, phi, 2000, p).estimate;
  }
  Table table;
  for (double lambda : lambdas) {
    const auto samples = measure_samples(intensity, phi, f, lambda, n_rep, params, resolve_padding(padding, intensity));
    std::vector<double> scaled;
    double cert = 0.0;
    for (const MeasureSample& s : samples) {
      scaled.push_back(s.value / lambda);
      cert += s.certified_fraction;
    }
    const MeanSe m = mean_and_se(scaled);
    table.rows.push_back({lambda, m.mean, m.std_error, intensity * mass * integral_f, n_rep,
                          cert / static_cast<double>(n_rep), params.master_seed});
  }
  return table;
}

Table var_experiment(double intensity, const Phi& phi, const TestFunction& f, std::span<const double> lambdas,
                     std::size_t n_rep, const ProcessParams& params, double padding,
                     std::optional<double> variance_per_point) {
  if (n_rep < 50) throw HarnessError("var_experiment refuses fewer than 50 replicates");
  if (!std::is_sorted(lambdas.begin(), lambdas.end())) throw DomainError("lambda list must be increasing");
  const double integral_f2 = unit_square_integral([&](double x, double y) {
    const double v = f.eval(x, y);
    return v * v;
  });
  const double target = variance_per_point ? intensity * *variance_per_point * integral_f2 : kNaN;
  Table table;
  for (double lambda : lambdas) {
    const auto samples = measure_samples(intensity, phi, f, lambda, n_rep, params, resolve_padding(padding, intensity));
    std::vector<double> values;
    double cert = 0.0;
    for (const MeasureSample& s : samples) {
      values.push_back(s.value);
      cert += s.certified_fraction;
    }
    const VarianceEstimate v = variance_with_jackknife(values);
    table.rows.push_back({lambda, v.variance / lambda, v.std_error / lambda, target, n_rep,
                          cert / static_cast<double>(n_rep), params.master_seed});
  }
  return table;
}

double kolmogorov_survival(double x) {
  if (!(x > 0.0)) return 1.0;
  if (x < 1.18) {
    // Theta-function form, fast for small x.
    const double c = kPi * kPi / (8.0 * x * x);
    double sum = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      sum += std::exp(-odd * odd * c);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * kPi) / x * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_statistic(std::span<const double> samples) {
  if (samples.size() < 8) throw DomainError("KS test needs at least 8 samples");
  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-xs[i] / std::sqrt(2.0));
    d = std::max({d, (i + 1) / n - cdf, cdf - i / n});
  }
  return {d, kolmogorov_survival(std::sqrt(n) * d)};
}

CltReport clt_experiment(double intensity, const Phi& phi, const TestFunction& f, double lambda, std::size_t n_rep,
                         const ProcessParams& params, double padding) {
  check_rep(n_rep, 8, "clt_experiment");
  const std::vector<double> values = measure_integrals(intensity, phi, f, lambda, n_rep, params, padding);
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1.0);
  const double sd = std::sqrt(var);
  if (sd < 1e-12) throw HarnessError("degenerate spread: standard deviation below 1e-12");
  CltReport out;
  out.mean = mean;
  out.variance = var;
  out.standardized.reserve(values.size());
  for (double v : values) out.standardized.push_back((v - mean) / sd);
  const KsResult ks = ks_statistic(out.standardized);
  out.ks_statistic = ks.statistic;
  out.p_value = ks.p_value;
  return out;
}

ScalingReport scaling_check(const Phi& phi, std::span<const double> intensities, std::size_t n_rep_e,
                            std::size_t n_rep_v, const ProcessParams& params, double points_per_window, int m_max) {
  const auto k = phi.degree();
  if (!k) throw DomainError("phi '" + phi.name() + "' is not homogeneous");
  if (n_rep_v < 50) throw HarnessError("variance column needs at least 50 replicates");
  if (!(points_per_window > 0.0)) throw DomainError("points_per_window must be positive");

  ScalingReport out;
  const TestFunction one = TestFunction::constant(1.0);
  for (std::size_t idx = 0; idx < intensities.size(); ++idx) {
    const double tau = intensities[idx];
    ProcessParams p = params;
    p.stream = params.stream + (static_cast<std::uint64_t>(idx) << 36);
    const EstimatorReport e = estimate_E(tau, phi, n_rep_e, p, m_max);
    const double lambda = points_per_window / tau;
    const auto values = measure_integrals(tau, phi, one, lambda, n_rep_v, p, default_padding(tau));
    const VarianceEstimate v = variance_with_jackknife(values);
    const double e_scale = std::pow(tau, *k / 2.0);
    const double v_scale = std::pow(tau, *k) / (lambda * tau);
    out.rows.push_back({tau, e_scale * e.estimate, e_scale * e.std_error, v_scale * v.variance,
                        v_scale * v.std_error, lambda});
  }
  for (std::size_t a = 0; a < out.rows.size(); ++a) {
    for (std::size_t b = a + 1; b < out.rows.size(); ++b) {
      const ScalingRow& x = out.rows[a];
      const ScalingRow& y = out.rows[b];
      const double ze = std::abs(x.scaled_e - y.scaled_e) / std::hypot(x.scaled_e_se, y.scaled_e_se);
      const double zv = std::abs(x.scaled_v - y.scaled_v) / std::hypot(x.scaled_v_se, y.scaled_v_se);
      out.max_z_e = std::max(out.max_z_e, ze);
      out.max_z_v = std::max(out.max_z_v, zv);
    }
  }
  out.e_consistent = out.max_z_e <= 3.0;
  out.v_consistent = out.max_z_v <= 4.0;
  return out;
}

}  // namespace gilbert::stats
