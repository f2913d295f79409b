#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracmaps/errors.hpp"
#include "fracmaps/solver.hpp"

// Flat key = value experiment configuration. One assignment per line, '#'
// starts a comment, lists are separated by spaces or commas. Every key has a
// default; unknown and repeated keys are rejected.
namespace fracmaps::cli {

class ConfigError : public Error {
 public:
  ConfigError(int line, std::string field, const std::string& message);
  /// 1-based line of the offending assignment, 0 when not tied to a line.
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

enum class ExteriorKind { constant, jump, csv };
enum class MapSource { initial, minimize, file };

struct ExperimentConfig {
  double s = 0.25;
  double window_lo = -1.0;
  double window_hi = 1.0;
  double h = 1.0 / 32;
  double R = 2.0;

  std::string target = "sphere";  // sphere | point_pair
  int target_dim = 1;             // k for the sphere S^k in R^{k+1}

  ExteriorKind exterior = ExteriorKind::jump;
  /// Empty vectors resolve to +e_1 (value, above) and -e_1 (below).
  std::vector<double> exterior_value;
  std::vector<double> exterior_above;
  std::vector<double> exterior_below;
  std::filesystem::path exterior_file;

  InitKind init = InitKind::exterior_jump;
  MapSource map_source = MapSource::initial;
  std::filesystem::path map_file;

  SolverOptions solver{};

  // Extension grid x_lo x_hi y_max dx dy.
  double ext_x_lo = -1.5;
  double ext_x_hi = 1.5;
  double ext_y_max = 1.0;
  double ext_dx = 1.0 / 64;
  double ext_dy = 1.0 / 64;
  // Node region x_lo x_hi y_lo y_hi of the residual refinement study.
  std::vector<double> residual_region{-0.5, 0.5, 0.25, 0.75};

  /// Density profile centers; empty means the window midpoint for `extend`
  /// and every interior cell boundary for `blowup`.
  std::vector<double> probe_points;
  std::vector<double> probe_radii{0.0625, 0.125, 0.25, 0.5};
  /// Non-positive means jump_density(1) at the configured order.
  double density_threshold = 0.0;

  std::vector<double> blowup_scales{0.5, 0.25, 0.125};
  double blowup_reference_h = 1.0 / 16;
  double blowup_tangent_tol = 1e-6;
  std::vector<double> holder_points;  // empty means the window midpoint
  std::vector<double> holder_radii;   // empty means 2h, 4h, 8h, 16h

  std::vector<double> stability_s{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45};
  std::vector<double> stability_theta{0.0, 0.39269908169872414, 0.78539816339744828,
                                      1.1780972450961724};

  std::filesystem::path output_dir = ".";
  std::uint64_t seed = 0;
};

/// Parses and validates. Relative input paths are resolved against
/// `base_dir`; output_dir stays relative to the working directory. Throws
/// ConfigError.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks ranges and cross-field constraints; also fills defaulted vectors.
/// `lines` maps fields to the lines they were set on, for diagnostics.
void validate(ExperimentConfig& cfg,
              const std::vector<std::pair<std::string, int>>& lines = {});

/// Every key with its resolved value, in a fixed order. Reparsing the
/// rendered text yields the same configuration.
std::vector<std::pair<std::string, std::string>> resolved_entries(const ExperimentConfig& cfg);
std::string render_config(const ExperimentConfig& cfg);

}  // namespace fracmaps::cli
