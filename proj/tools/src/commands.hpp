#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace moc::cli {

enum ExitCode : int { kOk = 0, kInvariant = 1, kUsage = 2, kIo = 3 };

struct SimulateArgs {
  std::string scenario;
  std::string out;
  std::string plot;
};

struct SweepArgs {
  std::string scenario;
  std::string grid;
  unsigned jobs = 0;  // 0: hardware concurrency
};

struct VerifyArgs {
  std::uint64_t seed = 7;
  int scenarios = 500;
};

struct ReproduceArgs {
  std::string figure;
  std::string out_dir = ".";
  bool list = false;
};

int run_simulate(const SimulateArgs& args, std::ostream& out);
int run_sweep(const SweepArgs& args, std::ostream& out);
int run_verify(const VerifyArgs& args, std::ostream& out);
int run_reproduce(const ReproduceArgs& args, std::ostream& out);

/// Full command line entry point; returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace moc::cli
