#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "isobif/bifurcation.hpp"
#include "isobif/config.hpp"
#include "isobif/geometry.hpp"
#include "isobif/metrics.hpp"
#include "isobif/polynomials.hpp"
#include "isobif/spectrum.hpp"

namespace isobif {

using Json = nlohmann::ordered_json;

// 17 significant digits, round-trips binary64.
std::string fmt17(double value);

// Every CSV starts with "# config_hash=<hash>" followed by a header row.
std::string spectrum_csv(const std::vector<EigenResult>& results, const std::string& hash);
std::string branch_csv(const Branch& branch, const std::string& hash);
// Two columns (lambda, sup_dist); sub-branches separated by a blank line.
std::string branch_plot_csv(const Branch& branch, const std::string& hash);
std::string trace_csv(std::span<const TracePoint> samples, const std::string& hash);

Json entry_json(const GeometryEntry& entry);
Json catalog_json(const std::vector<GeometryEntry>& entries);
Json census_json(const Census& census, const std::string& hash);
Json metrics_json(const HopfMetric& metric, const std::optional<Prediction>& prediction, const std::string& hash);
Json poly_json(const PolyReport& report, const std::string& hash);
Json manifest_json(const RunConfig& config, const std::string& subcommand, const std::vector<std::string>& args,
                   const std::vector<std::string>& outputs, double wall_seconds, int exit_code);

// Writes text to a file, creating parent directories. Serialized across threads.
void write_file(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const Json& json);

}  // namespace isobif
