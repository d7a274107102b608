#include "isobif/config.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace isobif {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::invalid_argument("config: '" + std::string(key) + "' expects a number, got '" + s + "'");
  return v;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("config: '" + std::string(key) + "' expects an integer, got '" +
                                std::string(text) + "'");
  return v;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void validate(const RunConfig& config) {
  const Numerics& n = config.numerics;
  for (const double v : {n.tol_ode, n.tol_newton, n.delta_endpoint_factor, n.max_step_fraction, n.overflow_cap,
                         n.dedup_eps, n.census_floor})
    if (!(v > 0.0)) throw std::invalid_argument("config: tolerances and caps must be positive");
  if (n.grid_n < 8) throw std::invalid_argument("config: grid_n must be >= 8");
  if (n.fine_n < 8) throw std::invalid_argument("config: fine_n must be >= 8");
  if (config.worker_count < 1) throw std::invalid_argument("config: workers must be >= 1");
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  Numerics& n = config.numerics;
  value = trim(value);
  if (key == "tol_ode") n.tol_ode = parse_double(key, value);
  else if (key == "tol_newton") n.tol_newton = parse_double(key, value);
  else if (key == "delta_endpoint_factor") n.delta_endpoint_factor = parse_double(key, value);
  else if (key == "max_step_fraction") n.max_step_fraction = parse_double(key, value);
  else if (key == "grid_n") n.grid_n = parse_int<int>(key, value);
  else if (key == "fine_n") n.fine_n = parse_int<int>(key, value);
  else if (key == "overflow_cap") n.overflow_cap = parse_double(key, value);
  else if (key == "dedup_eps") n.dedup_eps = parse_double(key, value);
  else if (key == "census_floor") n.census_floor = parse_double(key, value);
  else if (key == "workers") config.worker_count = parse_int<int>(key, value);
  else if (key == "seed") config.seed = parse_int<std::uint64_t>(key, value);
  else if (key == "output_dir") config.output_dir = std::string(value);
  else throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
}

void load_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config: " + path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    apply_setting(config, trim(s.substr(0, eq)), s.substr(eq + 1));
  }
}

int default_worker_count() {
  if (const char* env = std::getenv("ISOBIF_WORKERS"); env && *env) {
    const int v = parse_int<int>("ISOBIF_WORKERS", env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string canonical_text(const RunConfig& config) {
  const Numerics& n = config.numerics;
  std::ostringstream os;
  os << "tol_ode=" << fmt17(n.tol_ode) << "\n"
     << "tol_newton=" << fmt17(n.tol_newton) << "\n"
     << "delta_endpoint_factor=" << fmt17(n.delta_endpoint_factor) << "\n"
     << "max_step_fraction=" << fmt17(n.max_step_fraction) << "\n"
     << "grid_n=" << n.grid_n << "\n"
     << "fine_n=" << n.fine_n << "\n"
     << "overflow_cap=" << fmt17(n.overflow_cap) << "\n"
     << "dedup_eps=" << fmt17(n.dedup_eps) << "\n"
     << "census_floor=" << fmt17(n.census_floor) << "\n"
     << "seed=" << config.seed << "\n";
  return os.str();
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : canonical_text(config)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace isobif
