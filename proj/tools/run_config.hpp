#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "donaldson/metric.hpp"
#include "donaldson/sampling.hpp"
#include "donaldson/symplectic.hpp"

namespace donaldson::cli {

enum class Experiment { check, energy, flow, geodesic, hessian };

Experiment parse_experiment(const std::string& name);
const char* to_string(Experiment e);

struct RunConfig {
  int grid_n = 8;
  std::optional<Experiment> experiment;
  std::vector<FourierMode> initial_modes;
  std::vector<FourierMode> perturbation_modes;
  double dt = 1e-3;
  int steps = 10;
  SolverOptions solver{};
  std::uint64_t seed = 42;
  std::filesystem::path output_dir = "out";
  bool dump_fields = false;
  double u_floor = kDefaultUFloor;
  std::optional<bool> dealias;  // unset: on for flow, off otherwise
  int check_samples = 3;
  double check_amplitude = 1e-3;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Strict: unknown keys and wrongly typed values are rejected.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Range checks that depend on the final (overridden) values, including
/// that the initial form is nondegenerate.
void validate(const RunConfig& config);

/// Exit status: 0 success, 1 configuration error, 2 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

/// Runs one experiment, writing artifacts under config.output_dir and a
/// short human-readable log to `log`.
int run(Experiment experiment, const RunConfig& config, std::ostream& log);

}  // namespace donaldson::cli
