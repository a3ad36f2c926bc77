#include "commands.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <thread>
#include <vector>

#include "bundle.hpp"
#include "grid.hpp"
#include "moc/errors.hpp"
#include "moc/plot.hpp"
#include "moc/scenario_io.hpp"
#include "moc/trajectory_io.hpp"
#include "moc/verification.hpp"

namespace moc::cli {
namespace fs = std::filesystem;
namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Usage:
      return kUsage;
    case ErrorCode::InsideObstacle:
    case ErrorCode::NonFiniteState:
      return kInvariant;
    default:
      return kIo;
  }
}

std::string point(const Vec& x) {
  std::string s = "(";
  for (int i = 0; i < x.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.4g", i ? ", " : "", x[i]);
    s += buf;
  }
  return s + ")";
}

std::string summary_line(const Scenario& s, const Trajectory& t) {
  char buf[256];
  const auto goal = field_goal(s.field);
  const Vec& x = t.records.empty() ? s.starts[t.start_index] : t.last().state;
  double min_g = std::numeric_limits<double>::infinity();
  for (const auto& r : t.records) min_g = std::min(min_g, r.min_gamma);
  char gamma[32] = "-";
  if (!s.obstacles.empty()) std::snprintf(gamma, sizeof gamma, "%.6g", min_g);
  std::snprintf(buf, sizeof buf, "%4zu  %-22s %-10s %6zu  %-24s %10s  %s", t.start_index,
                point(s.starts[t.start_index]).c_str(), to_string(t.status), t.records.size(),
                point(x).c_str(), gamma,
                goal && s.mode == Mode::Avoid ? std::to_string((x - *goal).norm()).c_str() : "-");
  std::string line = buf;
  if (!t.failure.empty()) line += "  [" + t.failure + "]";
  return line;
}

void print_summary(std::ostream& out, const Scenario& s, const std::vector<Trajectory>& ts) {
  out << "scenario " << (s.name.empty() ? "<unnamed>" : s.name) << ": " << to_string(s.method)
      << ", " << to_string(s.mode) << ", " << s.obstacles.size() << " obstacle(s)\n";
  out << "   #  start                  status      steps  final state              min gamma"
         "   dist\n";
  for (const auto& t : ts) out << summary_line(s, t) << '\n';
}

fs::path indexed(const fs::path& p, std::size_t k, std::size_t n) {
  if (n == 1) return p;
  fs::path q = p;
  q.replace_filename(p.stem().string() + "_" + std::to_string(k) + p.extension().string());
  return q;
}

void write_outputs(const Scenario& s, const std::vector<Trajectory>& ts, const std::string& csv,
                   const std::string& svg, std::ostream& out) {
  if (!csv.empty()) {
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const fs::path p = indexed(csv, k, ts.size());
      write_trajectory(ts[k], s.dim, s.obstacles.size(), p);
      out << "wrote " << p.string() << '\n';
    }
  }
  if (!svg.empty()) {
    emit_plot(ts, s.obstacles, s.dim, svg, field_goal(s.field), s.name);
    out << "wrote " << svg << '\n';
  }
}

bool any_failed(const std::vector<Trajectory>& ts) {
  for (const auto& t : ts) {
    if (t.status == Status::Failed) return true;
  }
  return false;
}

// Runs every start on a small pool; results land at their start index.
std::vector<Trajectory> simulate_parallel(const Scenario& s, unsigned jobs) {
  std::vector<Trajectory> out(s.starts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < out.size(); k = next++) out[k] = simulate_start(s, k, {true});
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, out.size()));
  std::vector<std::jthread> pool;
  for (unsigned i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  return out;
}

}  // namespace

int run_simulate(const SimulateArgs& args, std::ostream& out) {
  const Scenario s = load_scenario(args.scenario);
  const auto ts = simulate(s, {true});
  print_summary(out, s, ts);
  write_outputs(s, ts, args.out.empty() ? s.outputs.trajectory : args.out,
                args.plot.empty() ? s.outputs.plot : args.plot, out);
  return any_failed(ts) ? kInvariant : kOk;
}

int run_sweep(const SweepArgs& args, std::ostream& out) {
  Scenario s = load_scenario(args.scenario);
  const auto grid = parse_grid(args.grid, s.dim);
  s.starts.clear();
  std::size_t skipped = 0;
  for (const auto& x : grid) {
    bool outside = true;
    for (const auto& o : s.obstacles) outside = outside && gamma_eval(o, x).value > 1.0;
    if (outside) {
      s.starts.push_back(x);
    } else {
      ++skipped;
    }
  }
  if (s.starts.empty()) {
    out << "every grid point lies inside an obstacle\n";
    return kUsage;
  }
  const auto ts = simulate_parallel(s, args.jobs);
  print_summary(out, s, ts);
  std::size_t counts[4] = {};
  for (const auto& t : ts) ++counts[static_cast<int>(t.status)];
  out << "converged " << counts[0] << ", stalled " << counts[1] << ", max_steps " << counts[2]
      << ", failed " << counts[3] << ", skipped (inside) " << skipped << '\n';
  return any_failed(ts) ? kInvariant : kOk;
}

int run_verify(const VerifyArgs& args, std::ostream& out) {
  VerifyOptions opt;
  opt.seed = args.seed;
  opt.scenarios = args.scenarios;
  bool ok = true;
  for (const auto& r : run_invariant_suite(opt)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs", r.seconds);
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name << ": " << r.detail << " (" << buf << ")\n";
    ok = ok && r.passed;
  }
  return ok ? kOk : kInvariant;
}

int run_reproduce(const ReproduceArgs& args, std::ostream& out) {
  if (args.list) {
    for (const auto& b : bundled_scenarios()) {
      const auto nl = b.yaml.find('\n');
      out << b.id << "  " << (b.yaml.starts_with("# ") ? b.yaml.substr(2, nl - 2) : "") << '\n';
    }
    return kOk;
  }
  if (args.figure.empty()) throw Error(ErrorCode::Usage, "reproduce needs a figure id or --list");
  const Scenario s = load_bundled(args.figure);
  fs::create_directories(args.out_dir);
  const auto ts = simulate(s, {true});
  print_summary(out, s, ts);
  const fs::path dir(args.out_dir);
  write_outputs(s, ts, (dir / (args.figure + ".csv")).string(),
                (dir / (args.figure + ".svg")).string(), out);
  return any_failed(ts) ? kInvariant : kOk;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Obstacle avoidance by manipulating orthogonal coordinates"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run every start of a scenario file");
  simulate_cmd->add_option("scenario", sim.scenario, "Scenario YAML file")->required();
  simulate_cmd->add_option("--out", sim.out, "Trajectory CSV (suffixed _k per start when several)");
  simulate_cmd->add_option("--plot", sim.plot, "SVG plot");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Replace the starts by a grid and tabulate outcomes");
  sweep_cmd->add_option("scenario", sweep.scenario, "Scenario YAML file")->required();
  sweep_cmd->add_option("--grid", sweep.grid, "lo:hi:n per axis, comma separated")->required();
  sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads (0 = all cores)");

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite");
  verify_cmd->add_option("--seed", ver.seed, "Random seed");
  verify_cmd->add_option("--scenarios", ver.scenarios, "Random impenetrability scenarios")
      ->check(CLI::PositiveNumber);

  ReproduceArgs rep;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Run a bundled figure scenario");
  reproduce_cmd->add_option("figure", rep.figure, "Figure id, e.g. fig7d");
  reproduce_cmd->add_option("--out-dir", rep.out_dir, "Directory for the CSV and SVG");
  reproduce_cmd->add_flag("--list", rep.list, "List bundled figure ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    if (simulate_cmd->parsed()) return run_simulate(sim, std::cout);
    if (sweep_cmd->parsed()) return run_sweep(sweep, std::cout);
    if (verify_cmd->parsed()) return run_verify(ver, std::cout);
    return run_reproduce(rep, std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
}

}  // namespace moc::cli
