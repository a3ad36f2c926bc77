#include <Eigen/QR>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "moc/dynamics.hpp"
#include "moc/errors.hpp"
#include "moc/verification.hpp"

namespace {

using namespace moc;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Vec v2(double a, double b) { return Vec{{a, b}}; }

Vec random_unit(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n;
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = n(rng);
  return v / v.norm();
}

GammaEval grad(const Vec& g, double value) {
  GammaEval e;
  e.value = value;
  e.gradient = g;
  e.gradient_norm = g.norm();
  return e;
}

double recomputed_min_gamma(const std::vector<ObstacleSpec>& obstacles, const Vec& x) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& o : obstacles) m = std::min(m, gamma_eval(o, x).value);
  return m;
}

double trajectory_min_gamma(const Scenario& s, const Trajectory& t) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : t.records) m = std::min(m, recomputed_min_gamma(s.obstacles, r.state));
  return m;
}

Scenario head_on(Method method) {
  Scenario s;
  s.dim = 2;
  s.field = LinearAttractor{v2(0, 0)};
  s.obstacles = {obstacle_from_radii(v2(-9, 0), v2(3.6, 3.6), IVec{{1, 1}})};
  s.starts = {v2(-18, 0)};
  s.method = method;
  return s;
}

Outcome gradient_oracle() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> r(0.5, 4.0);
  const int exps[] = {1, 2, 3, 8};
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int d = 2 + k % 2;
    Vec c(d), radii(d), x(d);
    IVec p(d);
    for (int i = 0; i < d; ++i) {
      c[i] = 10 * u(rng);
      radii[i] = r(rng);
      p[i] = exps[std::uniform_int_distribution<int>(0, 3)(rng)];
      x[i] = c[i] + 1.5 * radii[i] * u(rng);
    }
    const ObstacleSpec o = obstacle_from_radii(c, radii, p);
    const Vec g = gamma_eval(o, x).gradient;
    Vec fd(d);
    for (int i = 0; i < d; ++i) {
      Vec xp = x, xm = x;
      xp[i] += 1e-6;
      xm[i] -= 1e-6;
      fd[i] = (gamma_eval(o, xp).value - gamma_eval(o, xm).value) / (xp[i] - xm[i]);
    }
    if (g.norm() > 0) worst = std::max(worst, (g - fd).norm() / g.norm());
  }
  return {worst <= 1e-6, fmt("max relative error %.3g (limit 1e-6)", worst)};
}

Outcome orthogonality() {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> gam(1.0, 50.0);
  std::uniform_real_distribution<double> d1(0.01, 1.0);
  std::uniform_real_distribution<double> d2(1.0, 10.0);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const int d = 2 + k % 2;
    const GammaEval g = grad(random_unit(rng, d) * gam(rng), gam(rng));
    std::vector<BasisMatrix> frames;
    if (d == 2) {
      frames.push_back(basis_2d(g));
    } else {
      for (auto v : kAllVariants) frames.push_back(basis_3d(g, v));
    }
    RotationConfig rc;
    rc.about_e3 = {d1(rng), d2(rng)};
    rc.about_e2 = {d1(rng), d2(rng)};
    rc.planes = static_cast<RotationPlanes>(k % 3);
    const Vec f = random_unit(rng, d) * gam(rng);
    const std::size_t n = frames.size();
    for (std::size_t i = 0; i < n; ++i) {
      frames.push_back(manipulate_basis(frames[i], f, g, rc, k % 2 ? 1 : -1).basis);
    }
    for (const auto& e : frames) {
      const Mat m = e.columns.transpose() * e.columns - Mat::Identity(d, d);
      worst = std::max(worst, m.cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-10, fmt("max |E^T E - I| %.3g (limit 1e-10)", worst)};
}

Outcome modulation_forms() {
  std::mt19937_64 rng(103);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> gam(1.0, 100.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int d = 2 + k % 2;
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d * d; ++i) a(i / d, i % d) = n(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
    const BasisMatrix e{Mat(q)};
    const double G = gam(rng);
    // I - e1 e1ᵀ/Γ + Σ_{i≥2} e_i e_iᵀ/Γ, built here from the columns.
    Mat alt = Mat::Identity(d, d);
    for (int i = 0; i < d; ++i) {
      alt += (i == 0 ? -1.0 : 1.0) / G * e.columns.col(i) * e.columns.col(i).transpose();
    }
    const Mat lib = assemble_modulation(e, eigen_gains(G, 1.0, 1.0, false, d)).entries;
    const Mat lib_alt = alt_modulation(e, G).entries;
    worst = std::max({worst, (lib - lib_alt).cwiseAbs().maxCoeff(), (lib - alt).cwiseAbs().maxCoeff()});
  }
  return {worst <= 1e-12, fmt("max entry difference %.3g (limit 1e-12)", worst)};
}

Outcome impenetrability() {
  std::mt19937_64 rng(104);
  double worst = std::numeric_limits<double>::infinity();
  int failed = 0;
  for (int k = 0; k < 500; ++k) {
    Scenario s = random_scenario(rng, 2 + (k / 2) % 2, k % 2 ? Method::OAMOC : Method::Baseline);
    s.dt = 0.01;
    s.max_steps = 5000;
    const Trajectory t = simulate(s, {true})[0];
    if (t.status == Status::Failed) ++failed;
    worst = std::min(worst, trajectory_min_gamma(s, t));
  }
  return {failed == 0 && worst >= 1 - 1e-6,
          fmt("min gamma %.12g over 500 scenarios, %g failed runs (limit 1 - 1e-6)", worst, failed)};
}

Outcome local_minimum() {
  const Scenario b = head_on(Method::Baseline);
  const Trajectory tb = simulate(b, {true})[0];
  const double gb = recomputed_min_gamma(b.obstacles, tb.last().state);
  const double dist = tb.last().state.norm();
  const bool base_ok = tb.status == Status::Stalled && gb >= 1 - 1e-6 && gb <= 1.05 &&
                       std::abs(dist - 5.4) <= 0.05 * 5.4;

  Scenario o = head_on(Method::OAMOC);
  o.rotation.about_e3 = {0.5, 2.0};
  const Trajectory to = simulate(o, {true})[0];
  const bool rot_ok = to.status == Status::Converged && to.last().state.norm() <= 0.1;
  return {base_ok && rot_ok,
          std::string("baseline ") + to_string(tb.status) +
              fmt(" min gamma %.9g distance %.6g (expected 5.4 +- 5%%); ", gb, dist) + "rotated " +
              to_string(to.status) + fmt(" distance %.4g", to.last().state.norm())};
}

Outcome obstacle_weights_check() {
  const auto w = obstacle_weights(std::vector{2.0, 3.0, 5.0});
  const double expect[] = {0.6486, 0.2703, 0.0811};
  bool ok = w.size() == 3;
  for (int j = 0; ok && j < 3; ++j) ok = std::abs(w[j] - expect[j]) <= 1e-4;
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> gam(1.0, 100.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> g(1 + k % 6);
    for (auto& x : g) x = gam(rng);
    double s = 0.0;
    for (double x : obstacle_weights(g)) s += x;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  ok = ok && worst <= 1e-12;
  return {ok, fmt("(%.4f, %.4f, %.4f)", w[0], w[1], w[2]) + fmt(", max |sum - 1| %.3g", worst)};
}

Outcome tail_effect() {
  int away = 0, toward = 0, bad = 0;
  for (auto window : {ConsistencyWindow::Off, ConsistencyWindow::Previous}) {
    Scenario s = head_on(Method::OAMOC);
    s.policy.consistency = window;
    s.starts = {v2(-18, 2), v2(-18, 5), v2(-18, -4), v2(-18, 8)};
    for (const auto& t : simulate(s, {true})) {
      for (const auto& r : t.records) {
        const auto& term = r.obstacles[0];
        double align = term.radial_alignment;
        if (window == ConsistencyWindow::Off) {
          const GammaEval g = gamma_eval(s.obstacles[0], r.state);
          align = (g.gradient / g.gradient_norm).dot(field_eval(s.field, r.state));
        }
        if (align >= 0) {
          ++away;
          bad += term.radial_gain != 1.0;
        } else {
          ++toward;
          bad += term.radial_gain == 1.0;
        }
      }
    }
  }
  return {bad == 0 && away > 0 && toward > 0,
          fmt("%g steps moving away, %g approaching, %g violations", away, toward, bad)};
}

Scenario trap_scene() {
  Scenario s = head_on(Method::OAMOC);
  s.obstacles.clear();
  for (double y : {3.0, 1.0, -3.0, -1.0}) {
    ObstacleSpec o = obstacle_from_radii(v2(-9, y), v2(3.6, 3.6), IVec{{1, 1}});
    o.group_id = 1;
    o.indicator.rule = IndicatorRule::GoalLine;
    s.obstacles.push_back(o);
  }
  return s;
}

Outcome trap_area() {
  Scenario s = trap_scene();
  s.starts = {v2(-18, 7), v2(-18, 8), v2(-18, 10), v2(-18, -7), v2(-18, -8), v2(-18, -10)};
  int converged = 0;
  for (const auto& t : simulate(s, {true})) converged += t.status == Status::Converged;
  Scenario adverse = trap_scene();
  adverse.starts.clear();
  for (int y = -6; y <= 6; ++y) adverse.starts.push_back(v2(-18, y));
  int stalled = 0, failed = 0;
  for (const auto& t : simulate(adverse, {true})) {
    stalled += t.status == Status::Stalled;
    failed += t.status == Status::Failed;
  }
  return {converged == 6 && stalled >= 1,
          fmt("outer starts converged %g/6; central starts stalled %g, failed %g of 13", converged,
              stalled, failed)};
}

Outcome patrol_orbit() {
  Scenario s;
  s.dim = 2;
  s.mode = Mode::Patrol;
  s.field = LinearAttractor{v2(0, 0)};
  s.obstacles = {obstacle_from_radii(v2(0, 0), v2(3.6, 3.6), IVec{{1, 1}})};
  s.starts = {v2(-8, 1)};
  s.rotation.about_e3 = {0.5, 1.0};
  s.max_steps = 5000;
  const Trajectory t = simulate(s, {true})[0];
  double worst_gamma = 0.0, worst_norm = 0.0;
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    worst_norm = std::max(worst_norm, std::abs(t.records[k].velocity.norm() - 1.0));
    if (k >= t.records.size() / 2) {
      worst_gamma = std::max(worst_gamma,
                             std::abs(recomputed_min_gamma(s.obstacles, t.records[k].state) - 1.0));
    }
  }
  return {t.records.size() == 5000 && worst_gamma <= 0.1 && worst_norm <= 1e-12,
          fmt("%g steps, max |gamma - 1| over final half %.4g (limit 0.1), max ||d| - 1| %.3g",
              t.records.size(), worst_gamma, worst_norm)};
}

Outcome rotation_planes_3d() {
  Scenario s;
  s.dim = 3;
  s.field = LinearAttractor{Vec{{0, 0, 0}}};
  ObstacleSpec o = obstacle_from_radii(Vec{{-9, 0, 0}}, Vec{{3.6, 3.6, 3.6}}, IVec{{1, 1, 1}});
  o.indicator.y = -1;
  s.obstacles = {o};
  s.starts = {Vec{{-18, 0, 0}}};
  std::vector<Trajectory> runs;
  bool ok = true;
  double min_g = std::numeric_limits<double>::infinity();
  for (auto p : {RotationPlanes::AboutE3, RotationPlanes::AboutE2, RotationPlanes::Both}) {
    s.rotation.planes = p;
    runs.push_back(simulate(s, {true})[0]);
    ok = ok && runs.back().status == Status::Converged;
    min_g = std::min(min_g, trajectory_min_gamma(s, runs.back()));
  }
  ok = ok && min_g >= 1 - 1e-6;
  double smallest = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const std::size_t n = std::min(runs[a].records.size(), runs[b].records.size());
      double dev = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        dev = std::max(dev, (runs[a].records[k].state - runs[b].records[k].state).norm());
      }
      smallest = std::min(smallest, dev);
    }
  }
  ok = ok && smallest > 0.5;
  return {ok, std::string("statuses ") + to_string(runs[0].status) + "/" + to_string(runs[1].status) +
                  "/" + to_string(runs[2].status) +
                  fmt(", smallest pairwise max deviation %.4g (limit 0.5), min gamma %.6g", smallest,
                      min_g)};
}

struct Check {
  const char* name;
  std::function<Outcome()> run;
  double time_limit;  // seconds, 0 for none
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Check> checks = {
      {"gradient_oracle", gradient_oracle, 1.0},
      {"orthogonality", orthogonality, 5.0},
      {"modulation_forms", modulation_forms, 1.0},
      {"impenetrability", impenetrability, 60.0},
      {"local_minimum", local_minimum, 5.0},
      {"obstacle_weights", obstacle_weights_check, 0.0},
      {"tail_effect", tail_effect, 0.0},
      {"trap_area", trap_area, 0.0},
      {"patrol_orbit", patrol_orbit, 0.0},
      {"rotation_planes_3d", rotation_planes_3d, 0.0},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  bool all_ok = true;
  int ran = 0;
  for (const auto& c : checks) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.name) == wanted.end()) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit == 0.0 || secs < c.time_limit;
    const bool ok = o.passed && in_time;
    std::printf("%s %s: %s (%.2fs%s)\n", ok ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over time limit");
    all_ok = all_ok && ok;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown check name\n");
    return 2;
  }
  return all_ok ? 0 : 1;
}
