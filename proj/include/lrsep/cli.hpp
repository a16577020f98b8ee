#pragma once

#include "lrsep/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lrsep::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kNotConverged = 2,
};

/// Everything needed to rerun a command, written as key=value lines next to
/// its outputs (manifest.txt).
struct ExperimentManifest {
  std::string command;
  std::filesystem::path cube;
  std::filesystem::path dictionary;
  std::filesystem::path background;
  std::filesystem::path sparse;
  std::filesystem::path truth;
  std::filesystem::path output;
  std::string strategy = "one";
  SolverConfig solver = SolverConfig::background_recovery();
  // Second solver used by eval-sweep for strategy-two detection.
  SolverConfig detection_solver = SolverConfig::sparse_detection();
  int window = 5;
  long background_sparsity = 4;
  long union_sparsity = 6;
  std::string remove_bands;
  bool normalize = false;
  bool baseline = false;
  std::string preset = "desk";
  std::vector<double> alphas;
  std::uint64_t seed = 1;

  std::string to_text() const;
  /// Unknown keys are rejected; missing keys keep their defaults.
  static ExperimentManifest from_text(const std::string& text);
};

/// Thread cap: hardware concurrency, lowered by LRSEP_THREADS when set.
unsigned thread_budget();

/// Runs one subcommand (synth, separate, detect, eval-sweep, info). `args`
/// excludes the program name. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace lrsep::cli
