#include "moc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "moc/errors.hpp"

namespace moc {
namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct FieldEvaluator {
  const Vec& x;

  Vec operator()(const LinearAttractor& a) const {
    if (a.goal.size() != x.size()) throw Error(ErrorCode::Usage, "goal and state differ in dimension");
    return -(x - a.goal);
  }

  Vec operator()(const LimitCycle& c) const {
    const double x1 = x[0];
    const double x2 = x[1];
    const double s = x1 * x1 + x2 * std::sin(x1) - 1.0;
    Vec f = Vec::Zero(x.size());
    f[0] = x2 - x1 * s;
    f[1] = -x1 - x2 * s;
    const double n = f.norm();
    if (!(n > 0.0)) throw Error(ErrorCode::FieldSingular, "cycle field vanishes at the state");
    return c.speed * f / n;
  }

  Vec operator()(const ConstantField& c) const {
    if (c.direction.size() != x.size()) {
      throw Error(ErrorCode::Usage, "field direction and state differ in dimension");
    }
    return c.direction;
  }
};

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

std::string obstacle_label(std::size_t j) { return "obstacle " + std::to_string(j); }

void check_schedule(const RotationSchedule& s, const char* which) {
  if (!(s.delta1 > 0.0 && s.delta1 <= 1.0)) {
    throw Error(ErrorCode::Domain, std::string(which) + ": delta1 must lie in (0, 1]");
  }
  if (!(s.delta2 >= 1.0) || !std::isfinite(s.delta2)) {
    throw Error(ErrorCode::Domain, std::string(which) + ": delta2 must be >= 1");
  }
}

// Frames for every active coordinate variant of one obstacle.
std::vector<VariantBasis> variant_frames(const GammaEval& g, const CombinationPolicy& policy) {
  if (g.gradient.size() == 2) return {{basis_2d(g), 1.0}};
  std::vector<VariantBasis> out;
  for (std::size_t k = 0; k < 3; ++k) {
    const double eta = policy.variant_weights[k];
    if (eta <= 0.0) continue;
    out.push_back({basis_3d_with_fallback(g, kAllVariants[k]).first, eta});
  }
  if (out.empty()) throw Error(ErrorCode::NoValidVariant, "all coordinate variant weights are zero");
  return out;
}

}  // namespace

const char* to_string(Mode m) noexcept { return m == Mode::Avoid ? "avoid" : "patrol"; }

const char* to_string(Method m) noexcept { return m == Method::Baseline ? "baseline" : "oamoc"; }

const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::Converged: return "converged";
    case Status::Stalled: return "stalled";
    case Status::MaxSteps: return "max_steps";
    case Status::Failed: return "failed";
  }
  return "?";
}

Vec field_eval(const VectorField& field, const Vec& state) {
  return std::visit(FieldEvaluator{state}, field);
}

std::optional<Vec> field_goal(const VectorField& field) {
  if (const auto* a = std::get_if<LinearAttractor>(&field)) return a->goal;
  return std::nullopt;
}

int indicator_sign(const IndicatorPolicy& policy, const Vec& state, const ObstacleSpec& obstacle,
                   const std::optional<Vec>& goal) {
  switch (policy.rule) {
    case IndicatorRule::Fixed:
      return policy.y;
    case IndicatorRule::SignOfComponent: {
      const double u = state[policy.axis] - obstacle.center[policy.axis];
      if (u == 0.0) return 1;
      const int y = u > 0.0 ? -1 : 1;
      return policy.flip ? -y : y;
    }
    case IndicatorRule::GoalLine: {
      if (!goal) throw Error(ErrorCode::MissingGoal, "goal-line indicator needs a goal");
      // Side test in the ξ1-ξ2 plane (the 3-D case uses the same projection).
      const Vec to_center = obstacle.center - *goal;
      const Vec to_state = state - *goal;
      return cross2(to_center, to_state) < 0.0 ? -1 : 1;
    }
  }
  return 1;
}

bool operator==(const Scenario& a, const Scenario& b) {
  if (a.starts.size() != b.starts.size()) return false;
  for (std::size_t i = 0; i < a.starts.size(); ++i) {
    if (!same_values(a.starts[i], b.starts[i])) return false;
  }
  return a.name == b.name && a.dim == b.dim && a.field == b.field && a.obstacles == b.obstacles &&
         a.dt == b.dt && a.max_steps == b.max_steps && a.goal_tol == b.goal_tol &&
         a.policy == b.policy && a.rotation == b.rotation && a.mode == b.mode &&
         a.method == b.method && a.stall == b.stall && a.outputs == b.outputs;
}

void validate(const Scenario& s) {
  if (s.dim != 2 && s.dim != 3) throw Error(ErrorCode::Usage, "dimension must be 2 or 3");
  if (const auto* a = std::get_if<LinearAttractor>(&s.field)) {
    if (a->goal.size() != s.dim) throw Error(ErrorCode::Usage, "field goal has the wrong dimension");
    if (!a->goal.allFinite()) throw Error(ErrorCode::Domain, "field goal must be finite");
  } else if (const auto* c = std::get_if<ConstantField>(&s.field)) {
    if (c->direction.size() != s.dim) {
      throw Error(ErrorCode::Usage, "field direction has the wrong dimension");
    }
  } else if (const auto* l = std::get_if<LimitCycle>(&s.field)) {
    if (!(l->speed > 0.0)) throw Error(ErrorCode::Domain, "cycle speed must be positive");
  }
  const auto goal = field_goal(s.field);
  for (std::size_t j = 0; j < s.obstacles.size(); ++j) {
    const auto& o = s.obstacles[j];
    try {
      validate(o);
    } catch (const Error& e) {
      throw Error(e.code(), obstacle_label(j) + ": " + e.what());
    }
    if (o.dim() != s.dim) throw Error(ErrorCode::Usage, obstacle_label(j) + ": wrong dimension");
    if (o.indicator.rule == IndicatorRule::GoalLine && !goal) {
      throw Error(ErrorCode::MissingGoal, obstacle_label(j) + ": goal-line indicator needs a goal");
    }
  }
  if (s.starts.empty()) throw Error(ErrorCode::Usage, "at least one start is required");
  for (std::size_t i = 0; i < s.starts.size(); ++i) {
    const Vec& x = s.starts[i];
    const std::string who = "start " + std::to_string(i);
    if (x.size() != s.dim) throw Error(ErrorCode::Usage, who + ": wrong dimension");
    if (!x.allFinite()) throw Error(ErrorCode::Domain, who + ": not finite");
    for (std::size_t j = 0; j < s.obstacles.size(); ++j) {
      const double g = gamma_eval(s.obstacles[j], x).value;
      if (!(g > 1.0)) {
        throw Error(ErrorCode::Domain, who + " is not strictly outside " + obstacle_label(j) +
                                           " (gamma = " + num(g) + ")");
      }
    }
  }
  if (!(s.dt > 0.0) || !std::isfinite(s.dt)) throw Error(ErrorCode::Domain, "dt must be positive");
  if (s.max_steps <= 0) throw Error(ErrorCode::Domain, "max_steps must be positive");
  if (!(s.goal_tol > 0.0)) throw Error(ErrorCode::Domain, "goal_tol must be positive");
  if (!(s.policy.reactivity > 0.0)) throw Error(ErrorCode::Domain, "reactivity must be positive");
  for (double eta : s.policy.variant_weights) {
    if (!(eta >= 0.0)) throw Error(ErrorCode::Domain, "variant weights must be non-negative");
  }
  if (s.dim == 3 && std::none_of(s.policy.variant_weights.begin(), s.policy.variant_weights.end(),
                                 [](double e) { return e > 0.0; })) {
    throw Error(ErrorCode::NoValidVariant, "at least one variant weight must be positive");
  }
  check_schedule(s.rotation.about_e3, "schedule about e3");
  check_schedule(s.rotation.about_e2, "schedule about e2");
  if (!(s.stall.relative_speed > 0.0) || s.stall.steps <= 0) {
    throw Error(ErrorCode::Domain, "stall criterion must be positive");
  }
  if (s.mode == Mode::Patrol && s.obstacles.empty()) {
    throw Error(ErrorCode::Usage, "patrol mode needs an obstacle");
  }
}

ModulationEval modulation_at(const Vec& state, const Vec& input, const Scenario& scenario,
                             bool rotate) {
  const int d = scenario.dim;
  const std::size_t n = scenario.obstacles.size();
  ModulationEval out;
  out.matrix = ModulationMatrix::identity(d);
  out.min_gamma = std::numeric_limits<double>::infinity();
  if (n == 0) return out;

  std::vector<GammaEval> evals;
  std::vector<double> gammas;
  std::vector<std::optional<int>> groups;
  evals.reserve(n);
  gammas.reserve(n);
  groups.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    evals.push_back(gamma_eval(scenario.obstacles[j], state));
    const double g = evals.back().value;
    if (g < 1.0 - kBoundaryTol) {
      throw Error(ErrorCode::InsideObstacle, "state inside " + obstacle_label(j) + " (gamma = " +
                                                 num(g) + ")");
    }
    gammas.push_back(g);
    groups.push_back(scenario.obstacles[j].group_id);
    out.min_gamma = std::min(out.min_gamma, g);
  }
  const std::vector<double> weights = grouped_weights(gammas, groups);
  const CombinationPolicy& policy = scenario.policy;
  const bool product = policy.mode == CombinationMode::Product;
  const auto goal = field_goal(scenario.field);
  const bool can_rotate = rotate && input.norm() > 0.0;

  std::vector<ModulationMatrix> per_obstacle;
  std::vector<double> used_weights;
  per_obstacle.reserve(n);
  used_weights.reserve(n);
  out.terms.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    ObstacleTerm& term = out.terms[j];
    term.gamma = gammas[j];
    term.weight = weights[j];
    const GammaEval& g = evals[j];
    const Vec e1 = g.gradient / g.gradient_norm;
    term.radial_alignment = e1.dot(input);
    if (weights[j] == 0.0) continue;  // identity in either mode

    const bool tail_away = policy.tail_effect && term.radial_alignment >= 0.0;
    const double mu_w = product ? weights[j] : 1.0;
    const GainMatrix D = eigen_gains(std::max(gammas[j], 1.0), policy.reactivity, mu_w, tail_away, d);
    term.radial_gain = D.lambdas[0];

    std::vector<VariantBasis> frames = variant_frames(g, policy);
    if (can_rotate) {
      term.indicator = indicator_sign(scenario.obstacles[j].indicator, state,
                                      scenario.obstacles[j], goal);
      for (std::size_t k = 0; k < frames.size(); ++k) {
        ManipulatedBasis mb =
            manipulate_basis(frames[k].basis, input, g, scenario.rotation, term.indicator);
        if (k == 0) {
          term.theta_e3 = mb.theta_e3;
          term.theta_e2 = mb.theta_e2;
        }
        frames[k].basis = std::move(mb.basis);
      }
    }
    per_obstacle.push_back(d == 2 ? assemble_modulation(frames.front().basis, D)
                                  : combine_coordinates(frames, D));
    used_weights.push_back(weights[j]);
  }
  out.matrix = combine(per_obstacle, used_weights, policy.mode);
  return out;
}

StepResult step_oamoc(const Vec& state, const Scenario& scenario, const ModulationHistory& history,
                      int step_index) {
  if (!state.allFinite()) throw Error(ErrorCode::NonFiniteState, "state is not finite");
  const bool oamoc = scenario.method == Method::OAMOC;
  const Vec f = field_eval(scenario.field, state);
  const Vec f_in = oamoc ? history.transform(f) : f;
  ModulationEval eval = modulation_at(state, f_in, scenario, oamoc);

  StepResult r;
  const Vec velocity = eval.matrix.apply(f_in);
  r.next_state = state + velocity * scenario.dt;
  if (!r.next_state.allFinite()) throw Error(ErrorCode::NonFiniteState, "integration diverged");
  r.record.step = step_index;
  r.record.state = state;
  r.record.velocity = velocity;
  r.record.field_norm = f.norm();
  r.record.min_gamma = eval.min_gamma;
  r.record.obstacles = std::move(eval.terms);
  r.modulation = std::move(eval.matrix);
  return r;
}

PatrolStepResult patrol_step(const Vec& state, const Vec& direction, const Scenario& scenario,
                             int step_index) {
  if (!state.allFinite()) throw Error(ErrorCode::NonFiniteState, "state is not finite");
  ModulationEval eval = modulation_at(state, direction, scenario,
                                      scenario.method == Method::OAMOC);
  const Vec proposed = eval.matrix.apply(direction);
  const double n = proposed.norm();
  if (!(n >= scenario.stall.relative_speed * direction.norm())) {
    throw Error(ErrorCode::ZeroVelocity,
                "modulation annihilates the patrol direction at step " + std::to_string(step_index));
  }
  PatrolStepResult r;
  r.next_direction = proposed / n;
  r.next_state = state + r.next_direction * scenario.dt;
  r.record.step = step_index;
  r.record.state = state;
  r.record.velocity = r.next_direction;
  r.record.field_norm = direction.norm();
  r.record.min_gamma = eval.min_gamma;
  r.record.obstacles = std::move(eval.terms);
  return r;
}

namespace {

void run_avoid(const Scenario& s, Vec state, Trajectory& traj) {
  ModulationHistory history(s.policy.consistency);
  const auto goal = field_goal(s.field);
  int slow = 0;
  for (int k = 0; k < s.max_steps; ++k) {
    StepResult r = step_oamoc(state, s, history, k);
    const double speed = r.record.velocity.norm();
    const double fnorm = r.record.field_norm;
    traj.records.push_back(std::move(r.record));
    if (goal && (state - *goal).norm() <= s.goal_tol) {
      traj.status = Status::Converged;
      return;
    }
    slow = (speed < s.stall.relative_speed * fnorm || fnorm == 0.0) ? slow + 1 : 0;
    if (slow >= s.stall.steps) {
      traj.status = Status::Stalled;
      return;
    }
    history.push(r.modulation);
    state = r.next_state;
  }
  traj.status = Status::MaxSteps;
}

void run_patrol(const Scenario& s, Vec state, Trajectory& traj) {
  // Head for the center of the nearest obstacle.
  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < s.obstacles.size(); ++j) {
    const double g = gamma_eval(s.obstacles[j], state).value;
    if (g < best) {
      best = g;
      nearest = j;
    }
  }
  Vec dir = s.obstacles[nearest].center - state;
  dir.normalize();
  for (int k = 0; k < s.max_steps; ++k) {
    PatrolStepResult r;
    try {
      r = patrol_step(state, dir, s, k);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroVelocity) throw;
      traj.status = Status::Stalled;
      return;
    }
    traj.records.push_back(std::move(r.record));
    dir = r.next_direction;
    state = r.next_state;
  }
  traj.status = Status::MaxSteps;
}

}  // namespace

Trajectory simulate_start(const Scenario& scenario, std::size_t start_index,
                          const SimulateOptions& options) {
  if (start_index >= scenario.starts.size()) throw Error(ErrorCode::Usage, "start index out of range");
  Trajectory traj;
  traj.start_index = start_index;
  traj.dt = scenario.dt;
  const Vec& start = scenario.starts[start_index];
  try {
    if (scenario.mode == Mode::Avoid) {
      run_avoid(scenario, start, traj);
    } else {
      run_patrol(scenario, start, traj);
    }
  } catch (const Error& e) {
    if (!options.record_failures) throw;
    traj.status = Status::Failed;
    traj.failure = e.what();
  }
  return traj;
}

std::vector<Trajectory> simulate(const Scenario& scenario, const SimulateOptions& options) {
  validate(scenario);
  std::vector<Trajectory> out;
  out.reserve(scenario.starts.size());
  for (std::size_t i = 0; i < scenario.starts.size(); ++i) {
    out.push_back(simulate_start(scenario, i, options));
  }
  return out;
}

}  // namespace moc
