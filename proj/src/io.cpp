#include "isobif/io.hpp"

#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace isobif {

namespace {

std::mutex& file_mutex() {
  static std::mutex m;
  return m;
}

Json number_or_inf(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

}  // namespace

std::string fmt17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string spectrum_csv(const std::vector<EigenResult>& results, const std::string& hash) {
  std::ostringstream os;
  os << "# config_hash=" << hash << "\n";
  os << "k,mu_numeric,mu_closed,rel_err,n_k,u_at_tstar\n";
  for (const EigenResult& r : results)
    os << r.k << ',' << fmt17(r.mu_numeric) << ',' << fmt17(r.mu_closed) << ',' << fmt17(r.rel_err()) << ','
       << r.zero_count << ',' << fmt17(r.u_at_tstar) << '\n';
  return os.str();
}

std::string branch_csv(const Branch& branch, const std::string& hash) {
  std::ostringstream os;
  os << "# config_hash=" << hash << "\n";
  os << "branch_k,step,lambda,alpha,beta,sup_dist,zero_count,residual\n";
  for (const BranchPoint& p : branch.points)
    os << branch.k << ',' << p.direction * p.step << ',' << fmt17(p.lambda) << ',' << fmt17(p.alpha) << ','
       << fmt17(p.beta) << ',' << fmt17(p.sup_dist) << ',' << p.zero_count << ',' << fmt17(p.residual) << '\n';
  return os.str();
}

std::string branch_plot_csv(const Branch& branch, const std::string& hash) {
  std::ostringstream os;
  os << "# config_hash=" << hash << "\n";
  os << "lambda,sup_dist\n";
  int direction = 0;
  for (const BranchPoint& p : branch.points) {
    if (direction != 0 && p.direction != direction) os << '\n';
    direction = p.direction;
    os << fmt17(p.lambda) << ',' << fmt17(p.sup_dist) << '\n';
  }
  return os.str();
}

std::string trace_csv(std::span<const TracePoint> samples, const std::string& hash) {
  std::ostringstream os;
  os << "# config_hash=" << hash << "\n";
  os << "t,phi,dphi\n";
  for (const TracePoint& p : samples) os << fmt17(p.t) << ',' << fmt17(p.phi) << ',' << fmt17(p.dphi) << '\n';
  return os.str();
}

Json entry_json(const GeometryEntry& e) {
  Json j;
  j["id"] = e.id;
  j["g"] = e.profile.degree();
  j["N"] = e.profile.sphere_dim();
  j["mults"] = e.profile.multiplicities();
  j["base_dim"] = e.base_dim;
  j["fiber_dim"] = e.fiber_dim;
  j["d_at_0"] = e.d_at_0;
  j["d_at_tstar"] = e.d_at_tstar;
  j["p_f"] = number_or_inf(e.p_f);
  j["description"] = e.description;
  return j;
}

Json catalog_json(const std::vector<GeometryEntry>& entries) {
  Json j = Json::array();
  for (const auto& e : entries) j.push_back(entry_json(e));
  return j;
}

Json census_json(const Census& c, const std::string& hash) {
  Json j;
  j["entry"] = c.params.entry.id;
  j["q"] = c.params.q;
  j["lambda"] = c.params.lambda;
  j["bound_A"] = c.bound_A;
  Json sols = Json::array();
  for (const CensusSolution& s : c.solutions) {
    Json o;
    o["alpha"] = s.alpha;
    o["beta"] = s.beta;
    o["residual"] = s.residual;
    o["zero_count"] = s.zero_count;
    o["sup_dist"] = s.sup_dist;
    o["sup_phi"] = s.sup_phi;
    sols.push_back(o);
  }
  j["solutions"] = sols;
  j["method"] = c.method;
  j["grid_n"] = c.grid_n;
  j["certificate"] = {{"mu_1", c.mu_1},
                      {"rule", "q lambda A^(q-1) <= lambda + mu_1"},
                      {"trivial_only", c.trivial_only_certificate}};
  j["config_hash"] = hash;
  return j;
}

Json metrics_json(const HopfMetric& metric, const std::optional<Prediction>& prediction, const std::string& hash) {
  Json j;
  j["family"] = to_string(metric.family);
  j["n"] = metric.n;
  j["N"] = metric.dimension();
  j["scales"] = metric.scales;
  const double s = scalar_curvature(metric);
  j["s"] = s;
  j["lambda"] = s > 0.0 ? Json(yamabe_lambda(metric)) : Json(nullptr);
  Json curv = Json::array();
  for (const CurvatureTerm& t : sectional_curvatures(metric))
    curv.push_back({{"name", t.name}, {"value", t.value}, {"weight", t.weight}});
  j["sectional_curvatures"] = curv;
  if (prediction) {
    j["q"] = prediction->q;
    j["k"] = prediction->k;
    j["thresholds"] = prediction->thresholds;
    Json b = Json::array();
    for (const auto& item : prediction->breakdown) b.push_back({{"action", item.action}, {"count", item.count}});
    j["breakdown"] = b;
    j["total_cor17"] = prediction->total_cor17;
    j["total_cor19"] = prediction->total_cor19;
  }
  j["config_hash"] = hash;
  return j;
}

Json poly_json(const PolyReport& r, const std::string& hash) {
  Json j;
  j["which"] = r.which;
  j["n"] = r.n;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["max_grad_residual"] = r.cm.max_grad_residual;
  j["c_estimate"] = r.cm.c_estimate;
  j["c_nearest"] = r.cm.c_nearest;
  j["c_deviation"] = r.cm.c_deviation;
  j["c_expected"] = r.c_expected;
  j["invariance_residuals"] = r.invariance_residuals;
  if (r.which == "fkm") {
    j["clifford_residual"] = r.clifford_residual;
    j["forms_agreement"] = r.forms_agreement;
    j["grad_fd_agreement"] = r.grad_fd_agreement;
  } else {
    j["normalization"] = r.normalization;
    j["printed_grad_residual"] = r.printed_grad_residual;
  }
  j["passed"] = r.passed;
  j["config_hash"] = hash;
  return j;
}

Json manifest_json(const RunConfig& config, const std::string& subcommand, const std::vector<std::string>& args,
                   const std::vector<std::string>& outputs, double wall_seconds, int exit_code) {
  const Numerics& n = config.numerics;
  Json j;
  j["subcommand"] = subcommand;
  j["args"] = args;
  j["config"] = {{"tol_ode", n.tol_ode},
                 {"tol_newton", n.tol_newton},
                 {"delta_endpoint_factor", n.delta_endpoint_factor},
                 {"max_step_fraction", n.max_step_fraction},
                 {"grid_n", n.grid_n},
                 {"fine_n", n.fine_n},
                 {"overflow_cap", n.overflow_cap},
                 {"dedup_eps", n.dedup_eps},
                 {"census_floor", n.census_floor},
                 {"workers", config.worker_count},
                 {"seed", config.seed},
                 {"output_dir", config.output_dir.string()}};
  j["config_hash"] = config_hash(config);
  j["versions"] = {{"isobif", "1.0.0"},
                   {"compiler", __VERSION__},
                   {"cxx_standard", static_cast<long>(__cplusplus)},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  j["outputs"] = outputs;
  j["wall_seconds"] = wall_seconds;
  j["exit_code"] = exit_code;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::lock_guard lock(file_mutex());
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_json(const std::filesystem::path& path, const Json& json) { write_file(path, json.dump(2) + "\n"); }

}  // namespace isobif
