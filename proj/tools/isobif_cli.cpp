#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "isobif/acceptance.hpp"
#include "isobif/bifurcation.hpp"
#include "isobif/config.hpp"
#include "isobif/geometry.hpp"
#include "isobif/io.hpp"
#include "isobif/metrics.hpp"
#include "isobif/polynomials.hpp"
#include "isobif/spectrum.hpp"

namespace fs = std::filesystem;
using namespace isobif;

namespace {

// Raised when a computed result violates a checked property.
struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Session {
  RunConfig config;
  std::string hash;
  std::vector<std::string> outputs;

  fs::path path(const std::string& name) const { return config.output_dir / name; }

  void text(const std::string& name, const std::string& content) {
    write_file(path(name), content);
    outputs.push_back(name);
  }
  void json(const std::string& name, const Json& j) {
    write_json(path(name), j);
    outputs.push_back(name);
  }
};

std::string file_tag(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s;
}

std::string number_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return file_tag(buf);
}

struct SpectrumArgs {
  std::string entry;
  int count = 6;
};

void run_spectrum(Session& s, const SpectrumArgs& a) {
  const GeometryEntry entry = find_entry(a.entry);
  const auto results = find_eigenvalues(entry, a.count, ode_options(s.config.numerics), s.config.worker_count);
  s.text("spectrum_" + file_tag(entry.id) + ".csv", spectrum_csv(results, s.hash));
  for (const auto& r : results)
    std::printf("k=%d mu=%.12g closed=%.12g rel_err=%.2e n_k=%d\n", r.k, r.mu_numeric, r.mu_closed, r.rel_err(),
                r.zero_count);
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].rel_err() > 1e-6)
      throw AssertionFailure("mu_" + std::to_string(results[i].k) + " differs from the closed form by rel " +
                             std::to_string(results[i].rel_err()));
    if (i > 0 && results[i].zero_count <= results[i - 1].zero_count)
      throw AssertionFailure("zero counts not strictly increasing at k=" + std::to_string(results[i].k));
  }
}

struct BranchArgs {
  std::string entry;
  double q = 3.0;
  int k = 1;
  double lambda_max = 40.0;
  int max_steps = 5000;
};

void run_branch(Session& s, const BranchArgs& a) {
  const GeometryEntry entry = find_entry(a.entry);
  if (!validate_exponent(entry, a.q))
    throw std::invalid_argument("q = " + std::to_string(a.q) + " is not admissible for " + entry.id);
  const Branch b =
      continue_branch(entry, a.q, a.k, a.lambda_max, a.max_steps, solver_options(s.config.numerics, s.config.worker_count));
  const std::string stem = "branch_" + file_tag(entry.id) + "_k" + std::to_string(a.k);
  s.text(stem + ".csv", branch_csv(b, s.hash));
  s.text(stem + "_plot.csv", branch_plot_csv(b, s.hash));
  std::printf("branch k=%d lambda_k=%.10g n_k=%d points=%zu ends=(%s, %s)\n", b.k, b.lambda_k, b.expected_zero_count,
              b.points.size(), to_string(b.ends[0]), to_string(b.ends[1]));
  if (!b.diagnostics.empty()) std::printf("%s\n", b.diagnostics.c_str());
  for (const BranchPoint& p : b.points)
    if (p.zero_count != b.expected_zero_count)
      throw AssertionFailure("zero count " + std::to_string(p.zero_count) + " at lambda " + std::to_string(p.lambda) +
                             " differs from n_k = " + std::to_string(b.expected_zero_count));
}

struct CensusArgs {
  std::string entry;
  double q = 3.0;
  double lambda = 0.0;
};

void run_census(Session& s, const CensusArgs& a) {
  const GeometryEntry entry = find_entry(a.entry);
  const EquationParams params{entry, a.q, a.lambda};
  const SolverOptions so = solver_options(s.config.numerics, s.config.worker_count);
  const Census c = census(params, s.config.numerics.grid_n, so);
  const std::string stem = "census_" + file_tag(entry.id) + "_q" + number_tag(a.q) + "_lambda" + number_tag(a.lambda);
  s.json(stem + ".json", census_json(c, s.hash));
  for (std::size_t i = 0; i < c.solutions.size(); ++i) {
    const auto& sol = c.solutions[i];
    if (const auto tr = glue(params, sol.alpha, sol.beta, so.ode))
      s.text(stem + "_trace" + std::to_string(i + 1) + ".csv", trace_csv(*tr, s.hash));
  }
  std::printf("census %s q=%g lambda=%g: A=%g, %zu nontrivial solutions\n", entry.id.c_str(), a.q, a.lambda, c.bound_A,
              c.solutions.size());
  for (const auto& sol : c.solutions)
    std::printf("  alpha=%.10g beta=%.10g zeros=%d residual=%.2e\n", sol.alpha, sol.beta, sol.zero_count, sol.residual);
  for (const auto& sol : c.solutions)
    if (sol.residual > s.config.numerics.tol_newton)
      throw AssertionFailure("census residual " + std::to_string(sol.residual) + " above tol_newton");
  if (c.trivial_only_certificate && !c.solutions.empty())
    throw AssertionFailure("nontrivial solutions found although the a-priori certificate rules them out");
}

struct MetricArgs {
  std::string family = "sp";
  int n = 1;
  std::vector<double> x;
  std::optional<double> q;
};

HopfMetric make_metric(const MetricArgs& a) {
  HopfMetric m;
  m.family = parse_family(a.family);
  m.n = a.n;
  m.scales = a.x;
  if (m.scales.empty()) m.scales.assign(m.family == MetricFamily::sp ? 3 : 1, 1.0);
  validate(m);
  return m;
}

void run_metrics(Session& s, const MetricArgs& a, bool predict) {
  const HopfMetric m = make_metric(a);
  std::optional<Prediction> p;
  if (predict) {
    if (m.family != MetricFamily::sp) throw std::invalid_argument("predict supports --family sp only");
    p = predict_counts(m, a.q);
  }
  const Json j = metrics_json(m, p, s.hash);
  const std::string stem = std::string(predict ? "predict_" : "metrics_") + to_string(m.family) + "_n" +
                           std::to_string(m.n);
  s.json(stem + ".json", j);
  std::printf("%s\n", j.dump(2).c_str());
  const double sc = scalar_curvature(m);
  double sum = 0.0;
  for (const auto& t : sectional_curvatures(m)) sum += t.weight * t.value;
  if (!std::isfinite(sc) || std::abs(2 * sum - sc) > 1e-10 * std::max(1.0, std::abs(sc)))
    throw AssertionFailure("sectional curvatures do not sum to s/2");
}

struct PolyArgs {
  std::string which = "fkm";
  int n = 1;
  int samples = 100;
};

void run_verify_poly(Session& s, const PolyArgs& a) {
  if (a.which != "fkm" && a.which != "ot") throw std::invalid_argument("--which must be fkm or ot");
  const PolyReport r = a.which == "fkm" ? verify_fkm(a.n, a.samples, s.config.seed) : verify_ot(a.n, a.samples, s.config.seed);
  const Json j = poly_json(r, s.hash);
  s.json("verify_poly_" + a.which + "_n" + std::to_string(a.n) + ".json", j);
  std::printf("%s\n", j.dump(2).c_str());
  if (!r.passed) throw AssertionFailure(a.which + " polynomial failed verification");
}

void run_acceptance_cmd(Session& s) {
  std::ostringstream log;
  struct Tee : std::streambuf {
    std::streambuf* a;
    std::streambuf* b;
    int overflow(int c) override {
      if (c == EOF) return 0;
      a->sputc(static_cast<char>(c));
      b->sputc(static_cast<char>(c));
      return c;
    }
    int sync() override { return a->pubsync() | b->pubsync(); }
  } tee;
  tee.a = std::cout.rdbuf();
  tee.b = log.rdbuf();
  std::ostream out(&tee);
  const auto results = run_acceptance(out, s.config);
  int failed = 0;
  for (const auto& r : results) failed += !r.passed;
  out << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << " (" << results.size() << " criteria)"
      << std::endl;
  s.text("acceptance.txt", "# config_hash=" + s.hash + "\n" + log.str());
  if (failed) throw AssertionFailure(std::to_string(failed) + " acceptance criteria failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bifurcation and multiplicity of isoparametric solutions of the Yamabe-type equation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::string out_dir = ".";
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> settings;
  app.add_option("--config", config_file, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");
  app.add_option("--set", settings, "override a config key, key=value")->allow_extra_args(false);

  SpectrumArgs sa;
  auto* c_spec = app.add_subcommand("spectrum", "invariant eigenvalues of a catalog entry");
  c_spec->add_option("--entry", sa.entry, "catalog entry, e.g. s3_torus or cpn_un(2)")->required();
  c_spec->add_option("--count", sa.count, "number of eigenvalues")->check(CLI::Range(1, 200));

  BranchArgs br;
  auto* c_branch = app.add_subcommand("branch", "continue the k-th bifurcation branch");
  c_branch->add_option("--entry", br.entry)->required();
  c_branch->add_option("--q", br.q, "exponent");
  c_branch->add_option("--k", br.k)->check(CLI::Range(1, 50));
  c_branch->add_option("--lambda-max", br.lambda_max);
  c_branch->add_option("--max-steps", br.max_steps)->check(CLI::PositiveNumber);

  CensusArgs ce;
  auto* c_census = app.add_subcommand("census", "all positive solutions at fixed lambda");
  c_census->add_option("--entry", ce.entry)->required();
  c_census->add_option("--q", ce.q);
  c_census->add_option("--lambda", ce.lambda)->required();

  MetricArgs pr;
  auto* c_predict = app.add_subcommand("predict", "solution-count prediction for a Sp(n+1) metric");
  c_predict->add_option("--family", pr.family)->check(CLI::IsMember({"sp"}));
  c_predict->add_option("--n", pr.n)->check(CLI::PositiveNumber);
  c_predict->add_option("--x", pr.x, "fibre scales a,b,c")->delimiter(',');
  c_predict->add_option("--q", pr.q);

  MetricArgs me;
  auto* c_metrics = app.add_subcommand("metrics", "curvature of a homogeneous metric");
  c_metrics->add_option("--family", me.family)->required()->check(CLI::IsMember({"u", "sp", "spin9"}, CLI::ignore_case));
  c_metrics->add_option("--n", me.n)->check(CLI::PositiveNumber);
  c_metrics->add_option("--x", me.x, "fibre scales")->delimiter(',');

  PolyArgs po;
  auto* c_poly = app.add_subcommand("verify-poly", "check the Cartan-Munzner equations for FKM or OT");
  c_poly->add_option("--which", po.which)->required()->check(CLI::IsMember({"fkm", "ot"}));
  c_poly->add_option("--n", po.n)->check(CLI::Range(1, 6));
  c_poly->add_option("--samples", po.samples)->check(CLI::Range(1, 100000));

  auto* c_accept = app.add_subcommand("acceptance", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Session s;
  try {
    s.config.worker_count = default_worker_count();
    if (!config_file.empty()) load_config_file(s.config, config_file);
    for (const std::string& kv : settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got " + kv);
      apply_setting(s.config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (app.get_option("--out")->count()) s.config.output_dir = out_dir;
    if (workers) s.config.worker_count = *workers;
    if (seed) s.config.seed = *seed;
    validate(s.config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  }
  s.hash = config_hash(s.config);

  const std::vector<std::string> args(argv + 1, argv + argc);
  std::string name;
  const auto start = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (*c_spec) name = "spectrum", run_spectrum(s, sa);
    else if (*c_branch) name = "branch", run_branch(s, br);
    else if (*c_census) name = "census", run_census(s, ce);
    else if (*c_predict) name = "predict", run_metrics(s, pr, true);
    else if (*c_metrics) name = "metrics", run_metrics(s, me, false);
    else if (*c_poly) name = "verify-poly", run_verify_poly(s, po);
    else if (*c_accept) name = "acceptance", run_acceptance_cmd(s);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    rc = 1;
    const std::string diag = "diagnostic_" + file_tag(name) + ".txt";
    try {
      s.text(diag, "# config_hash=" + s.hash + "\nsubcommand: " + name + "\nerror: " + e.what() + "\n");
    } catch (const std::exception&) {
    }
    std::cerr << "failure: " << e.what() << " (see " << (s.config.output_dir / diag).string() << ")\n";
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    write_json(s.path("manifest_" + file_tag(name) + ".json"), manifest_json(s.config, name, args, s.outputs, wall, rc));
  } catch (const std::exception& e) {
    std::cerr << "cannot write manifest: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
