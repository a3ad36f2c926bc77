#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "moc/basis.hpp"
#include "moc/geometry.hpp"
#include "moc/modulation.hpp"
#include "moc/types.hpp"

namespace moc {

/// f(ξ) = -(ξ - goal)
struct LinearAttractor {
  Vec goal;
  friend bool operator==(const LinearAttractor& a, const LinearAttractor& b) {
    return same_values(a.goal, b.goal);
  }
};

/// Planar cycle system lifted to 3-D with a zero third component, rescaled to
/// a constant speed:
///   s  = ξ1² + ξ2 sin ξ1 - 1
///   f1 = ξ2 - ξ1 s
///   f2 = -ξ1 - ξ2 s
struct LimitCycle {
  double speed = 10.0;
  friend bool operator==(const LimitCycle&, const LimitCycle&) = default;
};

struct ConstantField {
  Vec direction;
  friend bool operator==(const ConstantField& a, const ConstantField& b) {
    return same_values(a.direction, b.direction);
  }
};

using VectorField = std::variant<LinearAttractor, LimitCycle, ConstantField>;

/// Throws FieldSingular at a zero of the cycle field (it cannot be rescaled).
Vec field_eval(const VectorField& field, const Vec& state);

/// The attractor's goal, if the field has one.
std::optional<Vec> field_goal(const VectorField& field);

/// Throws MissingGoal for GoalLine without a goal.
int indicator_sign(const IndicatorPolicy& policy, const Vec& state, const ObstacleSpec& obstacle,
                   const std::optional<Vec>& goal);

enum class Mode { Avoid, Patrol };
enum class Method { Baseline, OAMOC };

const char* to_string(Mode m) noexcept;
const char* to_string(Method m) noexcept;

/// Stalled when ‖ξ̇‖ < relative_speed · ‖f‖ for `steps` consecutive steps
/// (in patrol mode ‖f‖ is the unit direction).
struct StallCriterion {
  double relative_speed = 1e-4;
  int steps = 50;
  friend bool operator==(const StallCriterion&, const StallCriterion&) = default;
};

struct OutputPaths {
  std::string trajectory;
  std::string plot;
  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

struct Scenario {
  std::string name;
  int dim = 2;
  VectorField field = LimitCycle{};
  std::vector<ObstacleSpec> obstacles;
  std::vector<Vec> starts;
  double dt = 0.01;
  int max_steps = 5000;
  double goal_tol = 0.1;
  CombinationPolicy policy;
  RotationConfig rotation;
  Mode mode = Mode::Avoid;
  Method method = Method::OAMOC;
  StallCriterion stall;
  OutputPaths outputs;

  friend bool operator==(const Scenario& a, const Scenario& b);
};

/// Checks every invariant (dimensions, obstacle parameters, dt, starts
/// strictly outside every obstacle). Throws Error(Usage/Domain) naming the
/// offending entity.
void validate(const Scenario& scenario);

/// Per-obstacle diagnostics for one evaluation of the modulation.
struct ObstacleTerm {
  double gamma = 0.0;
  double weight = 0.0;
  double radial_alignment = 0.0;  // e1ᵀ f_in with the unrotated normal
  double radial_gain = 1.0;       // λ1 actually used
  double theta_e3 = 0.0;
  double theta_e2 = 0.0;
  int indicator = 1;
};

struct StepRecord {
  int step = 0;
  Vec state;
  Vec velocity;
  double field_norm = 0.0;
  double min_gamma = 0.0;
  std::vector<ObstacleTerm> obstacles;
};

enum class Status { Converged, Stalled, MaxSteps, Failed };

const char* to_string(Status s) noexcept;

struct Trajectory {
  std::size_t start_index = 0;
  double dt = 0.0;
  Status status = Status::MaxSteps;
  std::string failure;  // set when status is Failed
  std::vector<StepRecord> records;

  const StepRecord& last() const { return records.back(); }
};

/// Combined modulation at a state for a given input vector, with the
/// per-obstacle terms that produced it.
struct ModulationEval {
  ModulationMatrix matrix;
  std::vector<ObstacleTerm> terms;
  double min_gamma = 0.0;
};

/// Runs the per-obstacle pipeline (Γ and frames, weights, indicator, frame
/// rotation when `rotate`, gains, combination). `input` is the vector the
/// result will multiply; it drives the tail rule and rotation angle.
/// Throws InsideObstacle when some Γ < 1 - kBoundaryTol.
ModulationEval modulation_at(const Vec& state, const Vec& input, const Scenario& scenario,
                             bool rotate);

struct StepResult {
  Vec next_state;
  StepRecord record;
  ModulationMatrix modulation;
};

/// One avoid-mode step: consistency transform of f (OAMOC only), rotated
/// modulation (OAMOC only), ξ̇ = M f_new, ξ_{t+1} = ξ_t + ξ̇ dt.
StepResult step_oamoc(const Vec& state, const Scenario& scenario, const ModulationHistory& history,
                      int step_index = 0);

struct PatrolStepResult {
  Vec next_state;
  Vec next_direction;
  StepRecord record;
};

/// One patrol step: d' = M(ξ) d / ‖M(ξ) d‖, ξ' = ξ + d' dt.
/// Throws ZeroVelocity when M d vanishes.
PatrolStepResult patrol_step(const Vec& state, const Vec& direction, const Scenario& scenario,
                             int step_index = 0);

struct SimulateOptions {
  /// When false, step errors propagate; when true they end that trajectory
  /// with Status::Failed and the message in Trajectory::failure.
  bool record_failures = false;
};

Trajectory simulate_start(const Scenario& scenario, std::size_t start_index,
                          const SimulateOptions& options = {});

/// One trajectory per start, in start order.
std::vector<Trajectory> simulate(const Scenario& scenario, const SimulateOptions& options = {});

}  // namespace moc
