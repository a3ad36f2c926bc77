#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "moc/errors.hpp"
#include "moc/plot.hpp"
#include "moc/scenario_io.hpp"
#include "moc/trajectory_io.hpp"
#include "moc/verification.hpp"

namespace moc {
namespace {

namespace fs = std::filesystem;

const char* kHeadOn = R"(name: head-on
dim: 2
field: {type: linear, goal: [0, 0]}
method: oamoc
obstacles:
  - center: [-9, 0]
    radii: [3.6, 3.6]
    exponents: [1, 1]
starts:
  - [-18, 0]
)";

std::string error_of(const std::string& doc) {
  try {
    parse_scenario(doc, "doc.yaml");
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(ScenarioParse, HeadOnDocument) {
  const Scenario s = parse_scenario(kHeadOn);
  EXPECT_EQ(s.dim, 2);
  ASSERT_EQ(s.obstacles.size(), 1u);
  EXPECT_EQ(s.obstacles[0].center, (Vec{{-9, 0}}));
  EXPECT_NEAR(s.obstacles[0].axis_scales[0], 12.96, 1e-12);
  ASSERT_EQ(s.starts.size(), 1u);
  EXPECT_EQ(s.starts[0], (Vec{{-18, 0}}));
  EXPECT_EQ(s.method, Method::OAMOC);
  EXPECT_EQ(s.dt, 0.01);
}

TEST(ScenarioParse, ZeroAxisScaleIsRejectedWithLine) {
  const std::string doc = R"(dim: 2
field: {type: linear, goal: [0, 0]}
obstacles:
  - center: [-9, 0]
    axis_scales: [0, 12.96]
    exponents: [1, 1]
starts: [[-18, 0]]
)";
  const std::string msg = error_of(doc);
  EXPECT_NE(msg.find("axis scale must be positive"), std::string::npos) << msg;
  EXPECT_NE(msg.find("doc.yaml:4:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("obstacle 0"), std::string::npos) << msg;
}

TEST(ScenarioParse, EmptyObstacleListIsValid) {
  const Scenario s = parse_scenario("dim: 2\nfield: {type: linear, goal: [0, 0]}\nobstacles: []\n"
                                    "starts: [[1, 2]]\n");
  EXPECT_TRUE(s.obstacles.empty());
  EXPECT_EQ(simulate(s)[0].status, Status::Converged);
}

TEST(ScenarioParse, UnknownKeysAreErrors) {
  std::string doc = kHeadOn;
  doc += "delta_1: 0.5\n";
  std::string msg = error_of(doc);
  EXPECT_NE(msg.find("unknown key 'delta_1'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("doc.yaml:11:"), std::string::npos) << msg;

  msg = error_of("dim: 2\nfield: {type: linear, goal: [0, 0]}\nrotation:\n  about_e3: {delta: 2}\n"
                 "starts: [[1, 2]]\n");
  EXPECT_NE(msg.find("unknown key 'delta'"), std::string::npos) << msg;
}

TEST(ScenarioParse, SyntaxErrorHasLocation) {
  const std::string msg = error_of("dim: 2\nfield: {type: linear, goal: [0, 0]\nstarts: [[1, 2]]\n");
  EXPECT_NE(msg.find("doc.yaml:"), std::string::npos) << msg;
  try {
    parse_scenario("dim: [2\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
  }
}

TEST(ScenarioParse, StartInsideObstacleNamesTheStart) {
  std::string doc = kHeadOn;
  doc += "  - [-9, 1]\n";
  const std::string msg = error_of(doc);
  EXPECT_NE(msg.find("start 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("doc.yaml:11:"), std::string::npos) << msg;
}

TEST(ScenarioParse, TypeErrors) {
  EXPECT_NE(error_of("dim: two\nfield: {type: linear, goal: [0, 0]}\nstarts: [[1, 2]]\n")
                .find("dim has the wrong type"),
            std::string::npos);
  EXPECT_NE(error_of("dim: 2\nfield: {type: spiral}\nstarts: [[1, 2]]\n").find("field type"),
            std::string::npos);
  EXPECT_NE(error_of("dim: 2\nmethod: fast\nfield: {type: linear, goal: [0, 0]}\nstarts: [[1, 2]]\n")
                .find("method must be one of"),
            std::string::npos);
}

TEST(ScenarioRoundTrip, BundledFiles) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(MOC_SCENARIO_DIR)) {
    const Scenario a = load_scenario(entry.path());
    const std::string text = serialize_scenario(a);
    const Scenario b = parse_scenario(text);
    EXPECT_TRUE(a == b) << entry.path();
    EXPECT_EQ(serialize_scenario(b), text);
    ++count;
  }
  EXPECT_EQ(count, 33);
}

TEST(ScenarioRoundTrip, RandomScenarios) {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 50; ++k) {
    Scenario a = random_scenario(rng, 2 + k % 2, k % 2 ? Method::OAMOC : Method::Baseline);
    a.dt = 0.1 / 3.0;
    a.policy.reactivity = 1.0 / 7.0;
    a.obstacles[0].group_id = k;
    a.obstacles[0].indicator = {IndicatorRule::SignOfComponent, 1, k % 2, k % 3 == 0};
    a.outputs.plot = "x.svg";
    EXPECT_TRUE(a == parse_scenario(serialize_scenario(a))) << serialize_scenario(a);
  }
}

TEST(ScenarioLoad, MissingFileIsIoError) {
  try {
    load_scenario("/nonexistent/nowhere.yaml");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

Trajectory short_run(int dim, int steps) {
  Scenario s = parse_scenario(kHeadOn);
  if (dim == 3) {
    s = parse_scenario(R"(dim: 3
field: {type: linear, goal: [0, 0, 0]}
obstacles:
  - {center: [-9, 0, 0], radii: [3.6, 3.6, 3.6], exponents: [1, 1, 1]}
starts: [[-18, 0.5, 0]]
)");
  }
  s.max_steps = steps;
  return simulate(s)[0];
}

TEST(TrajectoryCsv, RowsAndHeader) {
  std::ostringstream out;
  write_trajectory(out, short_run(2, 3), 2, 1);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_EQ(text.substr(0, text.find('\n')), "step,t,xi1,xi2,v1,v2,min_gamma,gamma_1,theta_1,status");
  EXPECT_NE(text.find(",max_steps\n"), std::string::npos);
  EXPECT_NE(text.find(",running\n"), std::string::npos);

  std::ostringstream out3;
  write_trajectory(out3, short_run(3, 3), 3, 1);
  EXPECT_EQ(out3.str().substr(0, out3.str().find('\n')),
            "step,t,xi1,xi2,xi3,v1,v2,v3,min_gamma,gamma_1,theta_1,phi_1,status");
}

TEST(TrajectoryCsv, DeterministicBytes) {
  std::ostringstream a, b;
  write_trajectory(a, short_run(3, 200), 3, 1);
  write_trajectory(b, short_run(3, 200), 3, 1);
  EXPECT_EQ(a.str(), b.str());
}

TEST(TrajectoryCsv, ReadBackIsExact) {
  for (int dim : {2, 3}) {
    const Trajectory t = short_run(dim, 300);
    std::stringstream io;
    write_trajectory(io, t, dim, 1);
    const Trajectory r = read_trajectory(io);
    ASSERT_EQ(r.records.size(), t.records.size());
    EXPECT_EQ(r.status, t.status);
    EXPECT_EQ(r.dt, t.dt);
    for (std::size_t k = 0; k < t.records.size(); ++k) {
      const auto& a = t.records[k];
      const auto& b = r.records[k];
      EXPECT_EQ(a.step, b.step);
      EXPECT_TRUE(same_values(a.state, b.state));
      EXPECT_TRUE(same_values(a.velocity, b.velocity));
      EXPECT_EQ(a.min_gamma, b.min_gamma);
      EXPECT_EQ(a.obstacles[0].gamma, b.obstacles[0].gamma);
      EXPECT_EQ(a.obstacles[0].theta_e3, b.obstacles[0].theta_e3);
      EXPECT_EQ(a.obstacles[0].theta_e2, b.obstacles[0].theta_e2);
    }
  }
}

TEST(TrajectoryCsv, FormatUsesSeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(-18.0), "-18");
}

TEST(TrajectoryCsv, UnwritablePath) {
  try {
    write_trajectory(short_run(2, 2), 2, 1, "/nonexistent/dir/out.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/out.csv"), std::string::npos);
  }
}

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

TEST(Plot, Panels) {
  const Scenario s = parse_scenario(kHeadOn);
  const auto ts = simulate(s);
  const std::string one = render_plot(ts, s.obstacles, 2, Vec{{0, 0}});
  EXPECT_EQ(count_of(one, "<g>"), 1u);
  EXPECT_EQ(count_of(one, "fill=\"#ddd\""), 1u);
  EXPECT_EQ(count_of(one, "fill=\"none\" stroke=\"#1f77b4\""), 1u);

  const std::string empty = render_plot({}, s.obstacles, 2);
  EXPECT_EQ(count_of(empty, "fill=\"#ddd\""), 1u);
  EXPECT_EQ(count_of(empty, "stroke=\"#1f77b4\""), 0u);

  const Trajectory t3 = short_run(3, 50);
  const ObstacleSpec ball = obstacle_from_radii(Vec{{-9, 0, 0}}, Vec{{3.6, 3.6, 3.6}}, IVec{{1, 1, 1}});
  const std::string three = render_plot(std::vector{t3}, std::vector{ball}, 3);
  EXPECT_EQ(count_of(three, "<g>"), 3u);
  EXPECT_EQ(count_of(three, "fill=\"#ddd\""), 3u);
}

}  // namespace
}  // namespace moc
