#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace isobif {

// Numerical knobs shared by every module.
struct Numerics {
  double tol_ode = 1e-10;
  double tol_newton = 1e-8;
  double delta_endpoint_factor = 1e-4;
  double max_step_fraction = 1.0 / 50.0;
  int grid_n = 40;
  int fine_n = 400;
  double overflow_cap = 1e12;
  double dedup_eps = 1e-4;
  double census_floor = 1e-6;
};

struct RunConfig {
  Numerics numerics;
  int worker_count = 1;
  std::filesystem::path output_dir = ".";
  std::uint64_t seed = 20240611;
};

// Throws std::invalid_argument when a tolerance is non-positive, grid_n < 8,
// or worker_count < 1.
void validate(const RunConfig& config);

// Sets one documented key ("tol_ode", "grid_n", "workers", "seed", ...).
// Throws std::invalid_argument on unknown keys or unparsable values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Flat "key = value" file; '#' starts a comment.
void load_config_file(RunConfig& config, const std::filesystem::path& path);

// Worker count from ISOBIF_WORKERS if set, else hardware concurrency.
int default_worker_count();

// Stable textual form of the numerics and seed (output_dir and worker count
// excluded: they do not change results).
std::string canonical_text(const RunConfig& config);

// FNV-1a 64 of canonical_text, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace isobif
