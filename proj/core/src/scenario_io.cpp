#include "moc/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>

#include "moc/errors.hpp"

namespace moc {
namespace {

class Reader {
 public:
  explicit Reader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what,
                         ErrorCode code = ErrorCode::Parse) const {
    throw Error(code, where(at) + what);
  }

  std::string where(const YAML::Node& at) const {
    const auto m = at.Mark();
    return source_ + ":" + std::to_string(m.is_null() ? 1 : m.line + 1) + ": ";
  }

  void keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed,
            const std::string& context) const {
    if (!map.IsMap()) fail(map, context + " must be a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      bool known = false;
      for (auto a : allowed) known = known || key == a;
      if (!known) fail(kv.first, "unknown key '" + key + "' in " + context);
    }
  }

  template <class T>
  T scalar(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) fail(n, what + " must be a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, what + " has the wrong type");
    }
  }

  double number(const YAML::Node& n, const std::string& what) const {
    return scalar<double>(n, what);
  }

  Vec vec(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) fail(n, what + " must be a list");
    if (n.size() < 1 || n.size() > 3) fail(n, what + " must have 1 to 3 entries");
    Vec v(static_cast<int>(n.size()));
    for (std::size_t i = 0; i < n.size(); ++i) v[static_cast<int>(i)] = number(n[i], what);
    return v;
  }

  IVec ivec(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) fail(n, what + " must be a list");
    if (n.size() < 1 || n.size() > 3) fail(n, what + " must have 1 to 3 entries");
    IVec v(static_cast<int>(n.size()));
    for (std::size_t i = 0; i < n.size(); ++i) v[static_cast<int>(i)] = scalar<int>(n[i], what);
    return v;
  }

  template <class E>
  E choice(const YAML::Node& n, const std::map<std::string, E>& options,
           const std::string& what) const {
    const auto s = scalar<std::string>(n, what);
    const auto it = options.find(s);
    if (it == options.end()) {
      std::string list;
      for (const auto& [k, v] : options) list += (list.empty() ? "" : ", ") + k;
      fail(n, what + " must be one of: " + list);
    }
    return it->second;
  }

 private:
  std::string source_;
};

const std::map<std::string, Method> kMethods = {{"baseline", Method::Baseline},
                                                {"oamoc", Method::OAMOC}};
const std::map<std::string, Mode> kModes = {{"avoid", Mode::Avoid}, {"patrol", Mode::Patrol}};
const std::map<std::string, CombinationMode> kCombinations = {
    {"product", CombinationMode::Product}, {"weighted_sum", CombinationMode::WeightedSum}};
const std::map<std::string, ConsistencyWindow> kWindows = {
    {"off", ConsistencyWindow::Off},
    {"previous", ConsistencyWindow::Previous},
    {"full_product", ConsistencyWindow::FullProduct}};
const std::map<std::string, RotationPlanes> kPlanes = {{"about_e3", RotationPlanes::AboutE3},
                                                       {"about_e2", RotationPlanes::AboutE2},
                                                       {"both", RotationPlanes::Both}};

template <class E>
std::string name_of(const std::map<std::string, E>& options, E value) {
  for (const auto& [k, v] : options) {
    if (v == value) return k;
  }
  return {};
}

VectorField read_field(const Reader& r, const YAML::Node& n) {
  r.keys(n, {"type", "goal", "speed", "direction"}, "field");
  if (!n["type"]) r.fail(n, "field needs a type");
  const auto type = r.scalar<std::string>(n["type"], "field type");
  if (type == "linear") {
    r.keys(n, {"type", "goal"}, "linear field");
    if (!n["goal"]) r.fail(n, "linear field needs a goal");
    return LinearAttractor{r.vec(n["goal"], "field goal")};
  }
  if (type == "limit_cycle") {
    r.keys(n, {"type", "speed"}, "limit_cycle field");
    LimitCycle c;
    if (n["speed"]) c.speed = r.number(n["speed"], "field speed");
    return c;
  }
  if (type == "constant") {
    r.keys(n, {"type", "direction"}, "constant field");
    if (!n["direction"]) r.fail(n, "constant field needs a direction");
    return ConstantField{r.vec(n["direction"], "field direction")};
  }
  r.fail(n["type"], "field type must be one of: constant, limit_cycle, linear");
}

IndicatorPolicy read_indicator(const Reader& r, const YAML::Node& n) {
  r.keys(n, {"rule", "y", "component", "flip"}, "indicator");
  if (!n["rule"]) r.fail(n, "indicator needs a rule");
  IndicatorPolicy p;
  const auto rule = r.scalar<std::string>(n["rule"], "indicator rule");
  if (rule == "fixed") {
    r.keys(n, {"rule", "y"}, "fixed indicator");
    p.rule = IndicatorRule::Fixed;
    if (n["y"]) p.y = r.scalar<int>(n["y"], "indicator y");
    if (p.y != 1 && p.y != -1) r.fail(n["y"], "indicator y must be 1 or -1", ErrorCode::Domain);
  } else if (rule == "goal_line") {
    r.keys(n, {"rule"}, "goal_line indicator");
    p.rule = IndicatorRule::GoalLine;
  } else if (rule == "sign_of_component") {
    r.keys(n, {"rule", "component", "flip"}, "sign_of_component indicator");
    p.rule = IndicatorRule::SignOfComponent;
    if (!n["component"]) r.fail(n, "sign_of_component indicator needs a component");
    p.axis = r.scalar<int>(n["component"], "indicator component") - 1;
    if (n["flip"]) p.flip = r.scalar<bool>(n["flip"], "indicator flip");
  } else {
    r.fail(n["rule"], "indicator rule must be one of: fixed, goal_line, sign_of_component");
  }
  return p;
}

ObstacleSpec read_obstacle(const Reader& r, const YAML::Node& n, int dim, const std::string& who) {
  r.keys(n, {"center", "radii", "axis_scales", "exponents", "group", "indicator"}, who);
  if (!n["center"]) r.fail(n, who + " needs a center");
  if (!n["exponents"]) r.fail(n, who + " needs exponents");
  if (!n["radii"] == !n["axis_scales"]) r.fail(n, who + " needs exactly one of radii, axis_scales");
  const Vec c = r.vec(n["center"], who + " center");
  const IVec p = r.ivec(n["exponents"], who + " exponents");
  ObstacleSpec o;
  if (n["radii"]) {
    const Vec radii = r.vec(n["radii"], who + " radii");
    if (radii.size() != p.size()) r.fail(n["radii"], who + ": radii and exponents differ in length");
    if ((radii.array() <= 0.0).any()) {
      r.fail(n["radii"], who + ": radius must be positive", ErrorCode::Domain);
    }
    o = obstacle_from_radii(c, radii, p);
  } else {
    o.center = c;
    o.axis_scales = r.vec(n["axis_scales"], who + " axis_scales");
    o.exponents = p;
  }
  if (n["group"]) o.group_id = r.scalar<int>(n["group"], who + " group");
  if (n["indicator"]) o.indicator = read_indicator(r, n["indicator"]);
  if (o.dim() != dim || o.axis_scales.size() != dim || o.exponents.size() != dim) {
    r.fail(n, who + ": entries must match dim " + std::to_string(dim));
  }
  try {
    validate(o);
  } catch (const Error& e) {
    r.fail(n, who + ": " + e.what(), e.code());
  }
  return o;
}

RotationSchedule read_schedule(const Reader& r, const YAML::Node& n, const std::string& who) {
  r.keys(n, {"delta1", "delta2"}, who);
  RotationSchedule s;
  if (n["delta1"]) s.delta1 = r.number(n["delta1"], who + " delta1");
  if (n["delta2"]) s.delta2 = r.number(n["delta2"], who + " delta2");
  return s;
}

void read_policy(const Reader& r, const YAML::Node& n, CombinationPolicy& p) {
  r.keys(n, {"combination", "consistency", "tail_effect", "reactivity", "variant_weights"},
         "policy");
  if (n["combination"]) p.mode = r.choice(n["combination"], kCombinations, "policy combination");
  if (n["consistency"]) p.consistency = r.choice(n["consistency"], kWindows, "policy consistency");
  if (n["tail_effect"]) p.tail_effect = r.scalar<bool>(n["tail_effect"], "policy tail_effect");
  if (n["reactivity"]) p.reactivity = r.number(n["reactivity"], "policy reactivity");
  if (const auto w = n["variant_weights"]) {
    r.keys(w, {"xy", "xz", "yz"}, "variant_weights");
    p.variant_weights = {0.0, 0.0, 0.0};
    if (w["xy"]) p.variant_weights[0] = r.number(w["xy"], "variant weight xy");
    if (w["xz"]) p.variant_weights[1] = r.number(w["xz"], "variant weight xz");
    if (w["yz"]) p.variant_weights[2] = r.number(w["yz"], "variant weight yz");
  }
}

// Maps a validation message naming "obstacle j" or "start k" back to the node
// that declared it.
YAML::Node locate(const YAML::Node& root, const std::string& message) {
  for (const char* section : {"start ", "obstacle "}) {
    const auto pos = message.find(section);
    if (pos == std::string::npos) continue;
    const std::size_t idx = std::strtoul(message.c_str() + pos + std::strlen(section), nullptr, 10);
    const auto list = root[std::string(section) == "obstacle " ? "obstacles" : "starts"];
    if (list && list.IsSequence() && idx < list.size()) return list[idx];
  }
  return root;
}

Scenario read_scenario(const Reader& r, const YAML::Node& root) {
  r.keys(root, {"name", "dim", "field", "method", "mode", "dt", "max_steps", "goal_tol", "policy",
                "rotation", "stall", "obstacles", "starts", "output"},
         "scenario");
  Scenario s;
  if (root["name"]) s.name = r.scalar<std::string>(root["name"], "name");
  if (!root["dim"]) r.fail(root, "scenario needs dim");
  s.dim = r.scalar<int>(root["dim"], "dim");
  if (s.dim != 2 && s.dim != 3) r.fail(root["dim"], "dim must be 2 or 3", ErrorCode::Usage);
  if (!root["field"]) r.fail(root, "scenario needs a field");
  s.field = read_field(r, root["field"]);
  if (root["method"]) s.method = r.choice(root["method"], kMethods, "method");
  if (root["mode"]) s.mode = r.choice(root["mode"], kModes, "mode");
  if (root["dt"]) s.dt = r.number(root["dt"], "dt");
  if (root["max_steps"]) s.max_steps = r.scalar<int>(root["max_steps"], "max_steps");
  if (root["goal_tol"]) s.goal_tol = r.number(root["goal_tol"], "goal_tol");
  if (root["policy"]) read_policy(r, root["policy"], s.policy);
  if (const auto rot = root["rotation"]) {
    r.keys(rot, {"planes", "about_e3", "about_e2"}, "rotation");
    if (rot["planes"]) s.rotation.planes = r.choice(rot["planes"], kPlanes, "rotation planes");
    if (rot["about_e3"]) s.rotation.about_e3 = read_schedule(r, rot["about_e3"], "about_e3");
    if (rot["about_e2"]) s.rotation.about_e2 = read_schedule(r, rot["about_e2"], "about_e2");
  }
  if (const auto st = root["stall"]) {
    r.keys(st, {"relative_speed", "steps"}, "stall");
    if (st["relative_speed"]) s.stall.relative_speed = r.number(st["relative_speed"], "stall speed");
    if (st["steps"]) s.stall.steps = r.scalar<int>(st["steps"], "stall steps");
  }
  if (const auto obs = root["obstacles"]) {
    if (!obs.IsSequence()) r.fail(obs, "obstacles must be a list");
    for (std::size_t j = 0; j < obs.size(); ++j) {
      s.obstacles.push_back(read_obstacle(r, obs[j], s.dim, "obstacle " + std::to_string(j)));
    }
  }
  if (!root["starts"] || !root["starts"].IsSequence()) r.fail(root, "scenario needs a starts list");
  for (std::size_t k = 0; k < root["starts"].size(); ++k) {
    s.starts.push_back(r.vec(root["starts"][k], "start " + std::to_string(k)));
  }
  if (const auto out = root["output"]) {
    r.keys(out, {"trajectory", "plot"}, "output");
    if (out["trajectory"]) s.outputs.trajectory = r.scalar<std::string>(out["trajectory"], "output");
    if (out["plot"]) s.outputs.plot = r.scalar<std::string>(out["plot"], "output plot");
  }
  try {
    validate(s);
  } catch (const Error& e) {
    r.fail(locate(root, e.what()), e.what(), e.code());
  }
  return s;
}

// Shortest text that reads back to the same double.
std::string num(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string num(int x) { return std::to_string(x); }

YAML::Emitter& flow(YAML::Emitter& out, const auto& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (int i = 0; i < v.size(); ++i) out << num(v[i]);
  return out << YAML::EndSeq;
}

void write_schedule(YAML::Emitter& out, const char* key, const RotationSchedule& s) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "delta1" << YAML::Value << num(s.delta1);
  out << YAML::Key << "delta2" << YAML::Value << num(s.delta2);
  out << YAML::EndMap;
}

}  // namespace

Scenario parse_scenario(std::string_view document, std::string_view source) {
  const Reader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(document));
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::Parse, std::string(source) + ":" + std::to_string(e.mark.line + 1) +
                                      ": " + e.msg);
  }
  if (!root.IsMap()) throw Error(ErrorCode::Parse, std::string(source) + ":1: expected a mapping");
  return read_scenario(r, root);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::string serialize_scenario(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "dim" << YAML::Value << s.dim;

  out << YAML::Key << "field" << YAML::Value << YAML::BeginMap;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, LinearAttractor>) {
          out << YAML::Key << "type" << YAML::Value << "linear" << YAML::Key << "goal"
              << YAML::Value;
          flow(out, f.goal);
        } else if constexpr (std::is_same_v<F, LimitCycle>) {
          out << YAML::Key << "type" << YAML::Value << "limit_cycle" << YAML::Key << "speed"
              << YAML::Value << num(f.speed);
        } else {
          out << YAML::Key << "type" << YAML::Value << "constant" << YAML::Key << "direction"
              << YAML::Value;
          flow(out, f.direction);
        }
      },
      s.field);
  out << YAML::EndMap;

  out << YAML::Key << "method" << YAML::Value << name_of(kMethods, s.method);
  out << YAML::Key << "mode" << YAML::Value << name_of(kModes, s.mode);
  out << YAML::Key << "dt" << YAML::Value << num(s.dt);
  out << YAML::Key << "max_steps" << YAML::Value << s.max_steps;
  out << YAML::Key << "goal_tol" << YAML::Value << num(s.goal_tol);

  out << YAML::Key << "policy" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "combination" << YAML::Value << name_of(kCombinations, s.policy.mode);
  out << YAML::Key << "consistency" << YAML::Value << name_of(kWindows, s.policy.consistency);
  out << YAML::Key << "tail_effect" << YAML::Value << s.policy.tail_effect;
  out << YAML::Key << "reactivity" << YAML::Value << num(s.policy.reactivity);
  out << YAML::Key << "variant_weights" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "xy" << YAML::Value << num(s.policy.variant_weights[0]);
  out << YAML::Key << "xz" << YAML::Value << num(s.policy.variant_weights[1]);
  out << YAML::Key << "yz" << YAML::Value << num(s.policy.variant_weights[2]);
  out << YAML::EndMap << YAML::EndMap;

  out << YAML::Key << "rotation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "planes" << YAML::Value << name_of(kPlanes, s.rotation.planes);
  write_schedule(out, "about_e3", s.rotation.about_e3);
  write_schedule(out, "about_e2", s.rotation.about_e2);
  out << YAML::EndMap;

  out << YAML::Key << "stall" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "relative_speed" << YAML::Value << num(s.stall.relative_speed);
  out << YAML::Key << "steps" << YAML::Value << s.stall.steps;
  out << YAML::EndMap;

  out << YAML::Key << "obstacles" << YAML::Value << YAML::BeginSeq;
  for (const auto& o : s.obstacles) {
    out << YAML::BeginMap;
    out << YAML::Key << "center" << YAML::Value;
    flow(out, o.center);
    out << YAML::Key << "axis_scales" << YAML::Value;
    flow(out, o.axis_scales);
    out << YAML::Key << "exponents" << YAML::Value;
    flow(out, o.exponents);
    if (o.group_id) out << YAML::Key << "group" << YAML::Value << *o.group_id;
    out << YAML::Key << "indicator" << YAML::Value << YAML::Flow << YAML::BeginMap;
    switch (o.indicator.rule) {
      case IndicatorRule::Fixed:
        out << YAML::Key << "rule" << YAML::Value << "fixed" << YAML::Key << "y" << YAML::Value
            << o.indicator.y;
        break;
      case IndicatorRule::GoalLine:
        out << YAML::Key << "rule" << YAML::Value << "goal_line";
        break;
      case IndicatorRule::SignOfComponent:
        out << YAML::Key << "rule" << YAML::Value << "sign_of_component" << YAML::Key
            << "component" << YAML::Value << o.indicator.axis + 1 << YAML::Key << "flip"
            << YAML::Value << o.indicator.flip;
        break;
    }
    out << YAML::EndMap << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "starts" << YAML::Value << YAML::BeginSeq;
  for (const auto& x : s.starts) flow(out, x);
  out << YAML::EndSeq;

  if (!s.outputs.trajectory.empty() || !s.outputs.plot.empty()) {
    out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    if (!s.outputs.trajectory.empty()) {
      out << YAML::Key << "trajectory" << YAML::Value << s.outputs.trajectory;
    }
    if (!s.outputs.plot.empty()) out << YAML::Key << "plot" << YAML::Value << s.outputs.plot;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace moc
