#pragma once

#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "fracmaps/cli/config.hpp"
#include "fracmaps/line_grid.hpp"
#include "fracmaps/manifold.hpp"

namespace fracmaps::cli {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_config = 2, exit_no_convergence = 3, exit_check = 4 };

struct RunResult {
  int exit_code = exit_ok;
  std::vector<std::filesystem::path> artifacts;
  std::string summary;
};

std::shared_ptr<const TargetManifold> make_target(const ExperimentConfig& cfg);
LineGrid make_grid(const ExperimentConfig& cfg);
/// Map carrying the configured exterior condition; interior values are
/// those of the jump at the left window edge and are meant to be replaced.
LatticeMap exterior_map(const ExperimentConfig& cfg);
LatticeMap initial_lattice(const ExperimentConfig& cfg);

/// Artifacts: map.csv, solve_report.json. Exit 3 unless converged.
RunResult run_minimize(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
/// Artifacts: field.csv, residual.json, profile_<k>.csv (one per center).
RunResult run_extension(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
/// Artifact: stability.csv. Exit 4 if a row fails the mass identity.
RunResult run_stability(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
/// Artifacts: singular_set.json, exponents.csv.
RunResult run_blowup(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
/// Artifact: selftest.json. Exit 4 if any invariant check fails.
RunResult run_selftest(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Full command line entry point: parses arguments, runs one subcommand and
/// maps failures to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracmaps::cli
