#include "moc/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "moc/errors.hpp"

namespace moc {
namespace {

using Clock = std::chrono::steady_clock;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec random_vec(std::mt19937_64& rng, int dim, double lo, double hi) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = uniform(rng, lo, hi);
  return v;
}

Vec random_direction(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n;
  Vec v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = n(rng);
  } while (v.norm() < 1e-3);
  return v / v.norm();
}

ObstacleSpec random_obstacle(std::mt19937_64& rng, int dim, std::span<const int> exps,
                             double rmin, double rmax, double span) {
  Vec radii(dim);
  IVec p(dim);
  std::uniform_int_distribution<std::size_t> pick(0, exps.size() - 1);
  for (int i = 0; i < dim; ++i) {
    radii[i] = uniform(rng, rmin, rmax);
    p[i] = exps[pick(rng)];
  }
  return obstacle_from_radii(random_vec(rng, dim, -span, span), radii, p);
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

template <class Body>
CheckResult timed(const char* name, Body body) {
  const auto t0 = Clock::now();
  CheckResult r{name, false, {}, 0.0};
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

double bounding_radius(const ObstacleSpec& o) {
  double r = 0.0;
  for (int i = 0; i < o.dim(); ++i) {
    const double ri = std::pow(o.axis_scales[i], 1.0 / (2.0 * o.exponents[i]));
    r += ri * ri;
  }
  return std::sqrt(r);
}

double min_gamma(const std::vector<ObstacleSpec>& obstacles, const Vec& x) {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& o : obstacles) g = std::min(g, gamma_eval(o, x).value);
  return g;
}

}  // namespace

Scenario random_scenario(std::mt19937_64& rng, int dim, Method method) {
  static constexpr int kExps[] = {1, 2};
  Scenario s;
  s.name = "random";
  s.dim = dim;
  s.method = method;
  const int count = std::uniform_int_distribution<int>(1, 4)(rng);
  while (static_cast<int>(s.obstacles.size()) < count) {
    ObstacleSpec o = random_obstacle(rng, dim, kExps, 1.5, 4.0, 10.0);
    const double ro = bounding_radius(o);
    const bool clear = std::all_of(s.obstacles.begin(), s.obstacles.end(), [&](const auto& q) {
      return (q.center - o.center).norm() > ro + bounding_radius(q) + 0.5;
    });
    if (clear) s.obstacles.push_back(o);
  }
  Vec goal;
  do {
    goal = random_vec(rng, dim, -4.0, 4.0);
  } while (min_gamma(s.obstacles, goal) < 1.5);
  s.field = LinearAttractor{goal};
  // Start behind a random obstacle as seen from the goal so the run grazes it.
  Vec start;
  std::uniform_int_distribution<std::size_t> pick(0, s.obstacles.size() - 1);
  do {
    const ObstacleSpec& o = s.obstacles[pick(rng)];
    const Vec away = (o.center - goal).normalized();
    start = o.center + away * (bounding_radius(o) + uniform(rng, 0.5, 4.0)) +
            random_vec(rng, dim, -2.0, 2.0);
  } while (min_gamma(s.obstacles, start) < 1.05 || start.cwiseAbs().maxCoeff() > 16.0);
  s.starts = {start};
  if (dim == 3) {
    static constexpr RotationPlanes kPlanes[] = {RotationPlanes::AboutE3, RotationPlanes::AboutE2,
                                                 RotationPlanes::Both};
    s.rotation.planes = kPlanes[std::uniform_int_distribution<int>(0, 2)(rng)];
  }
  for (auto& o : s.obstacles) {
    o.indicator.rule = IndicatorRule::GoalLine;
  }
  return s;
}

CheckResult check_gradients(const VerifyOptions& opt) {
  return timed("gradient vs central differences", [&](CheckResult& r) {
    static constexpr int kExps[] = {1, 2, 3, 8};
    std::mt19937_64 rng(opt.seed);
    double worst = 0.0;
    for (int k = 0; k < opt.gradient_samples; ++k) {
      const int dim = 2 + k % 2;
      const ObstacleSpec o = random_obstacle(rng, dim, kExps, 0.5, 3.0, 5.0);
      const Vec x = o.center + random_vec(rng, dim, -3.0, 3.0);
      const Vec g = gamma_eval(o, x).gradient;
      const double h = 1e-6;
      Vec fd(dim);
      for (int i = 0; i < dim; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        fd[i] = (gamma_eval(o, xp).value - gamma_eval(o, xm).value) / (2.0 * h);
      }
      const double scale = std::max(g.norm(), 1.0);
      worst = std::max(worst, (g - fd).norm() / scale);
    }
    r.passed = worst <= 1e-6;
    r.detail = fmt("max relative error %.3g over %g samples", worst, opt.gradient_samples);
  });
}

CheckResult check_orthogonality(const VerifyOptions& opt) {
  return timed("basis orthogonality", [&](CheckResult& r) {
    std::mt19937_64 rng(opt.seed + 1);
    double worst = 0.0;
    for (int k = 0; k < opt.basis_samples; ++k) {
      const int dim = 2 + k % 2;
      GammaEval g;
      g.gradient = random_direction(rng, dim) * uniform(rng, 0.1, 10.0);
      g.gradient_norm = g.gradient.norm();
      g.value = uniform(rng, 1.0, 50.0);
      const BasisMatrix E = normal_basis(g);
      worst = std::max(worst, E.orthogonality_error());
      RotationConfig rc;
      rc.about_e3.delta1 = uniform(rng, 0.05, 1.0);
      rc.about_e3.delta2 = uniform(rng, 1.0, 4.0);
      rc.about_e2 = rc.about_e3;
      const Vec f = random_direction(rng, dim) * uniform(rng, 0.1, 20.0);
      const int y = k % 3 == 0 ? -1 : 1;
      const ManipulatedBasis mb = manipulate_basis(E, f, g, rc, y);
      worst = std::max(worst, mb.basis.orthogonality_error());
    }
    r.passed = worst <= 1e-10;
    r.detail = fmt("max |E^T E - I| %.3g over %g samples", worst, opt.basis_samples);
  });
}

CheckResult check_modulation_forms(const VerifyOptions& opt) {
  return timed("modulation form equivalence", [&](CheckResult& r) {
    std::mt19937_64 rng(opt.seed + 2);
    double worst = 0.0;
    for (int k = 0; k < opt.modulation_samples; ++k) {
      const int dim = 2 + k % 2;
      GammaEval g;
      g.gradient = random_direction(rng, dim);
      g.gradient_norm = 1.0;
      g.value = uniform(rng, 1.0, 20.0);
      const BasisMatrix E = normal_basis(g);
      const GainMatrix D = eigen_gains(g.value, 1.0, 1.0, false, dim);
      const Mat diff = assemble_modulation(E, D).entries - alt_modulation(E, g.value).entries;
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    r.passed = worst <= 1e-12;
    r.detail = fmt("max entry difference %.3g over %g samples", worst, opt.modulation_samples);
  });
}

CheckResult check_impenetrability(const VerifyOptions& opt) {
  return timed("impenetrability", [&](CheckResult& r) {
    std::mt19937_64 rng(opt.seed + 3);
    double worst = std::numeric_limits<double>::infinity();
    int failures = 0;
    for (int k = 0; k < opt.scenarios; ++k) {
      Scenario s = random_scenario(rng, 2 + (k / 2) % 2, k % 2 ? Method::OAMOC : Method::Baseline);
      s.max_steps = opt.max_steps;
      const Trajectory t = simulate(s, {true})[0];
      if (t.status == Status::Failed) ++failures;
      for (const auto& rec : t.records) worst = std::min(worst, rec.min_gamma);
    }
    r.passed = failures == 0 && worst >= 1.0 - 1e-6;
    r.detail = fmt("min gamma %.9g, failed runs %g", worst, failures);
  });
}

CheckResult check_determinism(const VerifyOptions& opt) {
  return timed("determinism", [&](CheckResult& r) {
    std::mt19937_64 rng(opt.seed + 4);
    const Scenario s = random_scenario(rng, 3, Method::OAMOC);
    const Trajectory a = simulate(s, {true})[0];
    const Trajectory b = simulate(s, {true})[0];
    bool same = a.records.size() == b.records.size() && a.status == b.status;
    for (std::size_t i = 0; same && i < a.records.size(); ++i) {
      same = same_values(a.records[i].state, b.records[i].state) &&
             same_values(a.records[i].velocity, b.records[i].velocity);
    }
    r.passed = same;
    r.detail = same ? "repeat run is bitwise identical" : "repeat run differs";
  });
}

std::vector<CheckResult> run_invariant_suite(const VerifyOptions& opt) {
  return {check_gradients(opt), check_orthogonality(opt), check_modulation_forms(opt),
          check_impenetrability(opt), check_determinism(opt)};
}

}  // namespace moc
