#include "isobif/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "isobif/bifurcation.hpp"
#include "isobif/geometry.hpp"
#include "isobif/metrics.hpp"
#include "isobif/polynomials.hpp"
#include "isobif/spectrum.hpp"

namespace isobif {

namespace {

struct Verdict {
  bool passed;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<GeometryEntry> spectrum_entries() {
  return {s3_torus(), s4_o3o2(), cpn_un(2), cpn_son1(2), hpn_spn(2), hpn_un1(2)};
}

Verdict spectrum_exactness(const RunConfig& cfg) {
  const OdeOptions ode = ode_options(cfg.numerics);
  double worst = 0.0;
  std::string worst_at;
  for (const auto& e : spectrum_entries())
    for (const EigenResult& r : find_eigenvalues(e, 6, ode, cfg.worker_count))
      if (r.rel_err() >= worst) {
        worst = r.rel_err();
        worst_at = e.id + " k=" + std::to_string(r.k);
      }
  return {worst <= 1e-6, fmt("max rel err %.3g at %s (tol 1e-6)", worst, worst_at.c_str())};
}

Verdict zero_count_monotone(const RunConfig& cfg) {
  const OdeOptions ode = ode_options(cfg.numerics);
  std::string counts;
  bool ok = true;
  for (const auto& e : spectrum_entries()) {
    const auto rs = find_eigenvalues(e, 6, ode, cfg.worker_count);
    counts += (counts.empty() ? "" : " ") + e.id + "=";
    for (std::size_t i = 0; i < rs.size(); ++i) {
      counts += std::to_string(rs[i].zero_count);
      if (i > 0 && rs[i].zero_count <= rs[i - 1].zero_count) ok = false;
    }
  }
  return {ok, "n_1..n_6: " + counts};
}

Verdict bifurcation_constants(const RunConfig& cfg) {
  const auto l = bifurcation_lambdas(s3_torus(), 3.0, 3, ode_options(cfg.numerics));
  const double expected[3] = {4.0, 12.0, 24.0};
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) worst = std::max(worst, rel(l[k], expected[k]));
  return {worst <= 1e-6, fmt("lambda = (%.10g, %.10g, %.10g), max rel err %.3g (tol 1e-6)", l[0], l[1], l[2], worst)};
}

Verdict multiplicity_floor(const RunConfig& cfg) {
  const SolverOptions so = solver_options(cfg.numerics, cfg.worker_count);
  const auto torus = s3_torus();
  const double lambdas[3] = {4.5, 13.0, 25.0};
  bool ok = true;
  std::string detail;
  for (int k = 1; k <= 3; ++k) {
    const EquationParams params{torus, 3.0, lambdas[k - 1]};
    const Census c = census(params, cfg.numerics.grid_n, so);
    const int oracle = count_oracle(params, cfg.numerics.fine_n, so);
    std::set<int> counts;
    double worst = 0.0;
    for (const auto& s : c.solutions) {
      counts.insert(s.zero_count);
      worst = std::max(worst, s.residual);
    }
    const int found = static_cast<int>(c.solutions.size());
    ok = ok && found >= k && static_cast<int>(counts.size()) >= k && found >= oracle && worst <= 1e-8;
    detail += fmt("%slambda=%g: %d solutions, %zu zero counts, oracle %d, max residual %.2g",
                  k > 1 ? "; " : "", lambdas[k - 1], found, counts.size(), oracle, worst);
  }
  return {ok, detail};
}

Verdict small_lambda_uniqueness(const RunConfig& cfg) {
  const SolverOptions so = solver_options(cfg.numerics, cfg.worker_count);
  const auto sphere = s4_o3o2();
  const double lambda1 = bifurcation_lambdas(sphere, 3.0, 1, so.ode)[0];
  const EquationParams cases[2] = {{s3_torus(), 3.0, 2.0}, {sphere, 3.0, 0.5 * lambda1}};
  bool ok = true;
  std::string detail;
  for (const auto& params : cases) {
    const Census c = census(params, cfg.numerics.grid_n, so);
    const int oracle = count_oracle(params, cfg.numerics.fine_n, so);
    ok = ok && c.solutions.empty() && oracle == 0;
    detail += fmt("%s%s lambda=%g: census %zu, oracle %d", detail.empty() ? "" : "; ", params.entry.id.c_str(),
                  params.lambda, c.solutions.size(), oracle);
  }
  return {ok, detail};
}

Verdict branch_globality(const RunConfig& cfg) {
  const SolverOptions so = solver_options(cfg.numerics, cfg.worker_count);
  const auto torus = s3_torus();
  const Branch b = continue_branch(torus, 3.0, 1, 40.0, 5000, so);
  bool constant = true;
  double closest = kInfinity;
  double lmax[2] = {0.0, 0.0};
  for (const BranchPoint& p : b.points) {
    constant = constant && p.zero_count == b.expected_zero_count;
    closest = std::min(closest, std::max(std::abs(p.alpha - 1.0), std::abs(p.beta - 1.0)));
    double& m = lmax[p.direction > 0 ? 0 : 1];
    m = std::max(m, p.lambda);
  }
  // Every branch point at these lambdas must be one of the census solutions.
  double cross = 0.0;
  for (double lambda : {13.0, 25.0, 40.0}) {
    const Census c = census({torus, 3.0, lambda}, cfg.numerics.grid_n, so);
    for (int direction : {1, -1}) {
      const auto p = branch_point_at(b, torus, 3.0, lambda, direction, so);
      double gap = kInfinity;
      if (p)
        for (const auto& s : c.solutions)
          gap = std::min(gap, std::max(std::abs(s.alpha - p->alpha), std::abs(s.beta - p->beta)));
      cross = std::max(cross, gap);
    }
  }
  const bool ok = b.reached(40.0) && constant && closest > 1e-3 && cross <= 1e-6;
  return {ok, fmt("%zu points, lambda reached (%.4g, %.4g), zero_count %s n_1=%d, min dist to (1,1) %.3g (tol 1e-3), "
                  "census gap at lambda 13/25/40 %.2g (tol 1e-6)",
                  b.points.size(), lmax[0], lmax[1], constant ? "constant =" : "varies, expected", b.expected_zero_count,
                  closest, cross)};
}

Verdict rescaling_law(const RunConfig& cfg) {
  const OdeOptions ode = ode_options(cfg.numerics);
  const EquationParams params{s3_torus(), 3.0, 4.0};
  const double limit = limit_profile(1.0, 3.0);
  bool ok = true;
  std::string values;
  for (double alpha : {1e2, 1e3, 1e4}) {
    const double r = rescaled_first_zero(params, alpha, ode);
    ok = ok && rel(r, limit) <= 0.05;
    values += fmt(" %.7g", r);
  }
  return {ok, fmt("limit %.7g, rescaled zeros%s (tol 5%%)", limit, values.c_str())};
}

Verdict curvature_identities(const RunConfig& cfg) {
  double round_err = 0.0;
  const HopfMetric rounds[3] = {{MetricFamily::u, 3, {1.0}}, {MetricFamily::sp, 2, {1.0, 1.0, 1.0}},
                                {MetricFamily::spin9, 1, {1.0}}};
  for (const auto& m : rounds) {
    const int N = m.dimension();
    round_err = std::max(round_err, rel(scalar_curvature(m), N * (N - 1.0)));
  }
  double sp_err = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (double t : {0.3, 1.0, 2.0}) {
      const HopfMetric m{MetricFamily::sp, n, {t * t, t * t, t * t}};
      sp_err = std::max(sp_err, rel(scalar_curvature(m), 6 / (t * t) - 12 * n * t * t + 16.0 * n * n + 32 * n));
    }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> scale(0.2, 3.0);
  double sum_err = 0.0;
  for (int i = 0; i < 20; ++i) {
    HopfMetric m;
    m.family = static_cast<MetricFamily>(i % 3);
    m.n = 1 + i % 4;
    m.scales = m.family == MetricFamily::sp ? std::vector<double>{scale(rng), scale(rng), scale(rng)}
                                            : std::vector<double>{scale(rng)};
    double sum = 0.0;
    for (const auto& term : sectional_curvatures(m)) sum += term.weight * term.value;
    const double s = scalar_curvature(m);
    sum_err = std::max(sum_err, std::abs(2 * sum - s) / std::max(1.0, std::abs(s)));
  }
  const bool ok = round_err <= 1e-15 && sp_err <= 1e-12 && sum_err <= 1e-10;
  return {ok, fmt("round rel err %.2g, Sp fibre formula %.2g (tol 1e-12), sectional sums %.2g (tol 1e-10)", round_err,
                  sp_err, sum_err)};
}

Verdict polynomial_verification(const RunConfig& cfg) {
  bool ok = true;
  std::string detail;
  for (int n = 1; n <= 3; ++n) {
    const PolyReport r = verify_fkm(n, 100, cfg.seed);
    ok = ok && r.passed;
    detail += fmt("fkm n=%d c=%.6f %s; ", n, r.cm.c_estimate, r.passed ? "ok" : "bad");
  }
  for (int n = 1; n <= 2; ++n) {
    const PolyReport r = verify_ot(n, 100, cfg.seed);
    ok = ok && r.passed;
    detail += fmt("ot n=%d c=%.6f grad %.2g [%s] %s%s", n, r.cm.c_estimate, r.cm.max_grad_residual,
                  r.normalization.c_str(), r.passed ? "ok" : "bad", n < 2 ? "; " : "");
  }
  return {ok, detail};
}

Verdict predictor(const RunConfig&) {
  const int n = 2;
  const double q = critical_exponent(4 * n + 3);
  const int coefficient = 2 * ((n + 1) / 2) + 1;
  bool ok = true;
  std::string detail;
  for (int k = 1; k <= 2; ++k) {
    const double lambda = sp_threshold(n, k, q) * (1.0 + 1e-6);
    const Prediction p = predict_counts_at(n, lambda);
    ok = ok && p.k == k && p.total_cor17 == coefficient * k;
    detail += fmt("just above alpha_%d: k=%d total %d; ", k, p.k, p.total_cor17);
  }
  int last_k = 0, last_total = 0;
  bool monotone = true;
  for (int i = 1; i <= 400; ++i) {
    const Prediction p = predict_counts_at(n, 0.5 * i);
    monotone = monotone && p.k >= last_k && p.total_cor17 >= last_total;
    last_k = p.k;
    last_total = p.total_cor17;
  }
  ok = ok && monotone;
  detail += monotone ? "monotone on lambda in (0, 200]" : "not monotone";
  return {ok, detail};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& out, const RunConfig& config) {
  const std::pair<const char*, std::function<Verdict(const RunConfig&)>> criteria[] = {
      {"spectrum exactness", spectrum_exactness},
      {"zero-count monotonicity", zero_count_monotone},
      {"bifurcation constants", bifurcation_constants},
      {"multiplicity floor", multiplicity_floor},
      {"small-lambda uniqueness", small_lambda_uniqueness},
      {"branch globality", branch_globality},
      {"rescaling law", rescaling_law},
      {"curvature identities", curvature_identities},
      {"polynomial verification", polynomial_verification},
      {"predictor", predictor},
  };
  std::vector<CriterionResult> results;
  int id = 0;
  for (const auto& [name, run] : criteria) {
    CriterionResult r;
    r.id = ++id;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Verdict v = run(config);
      r.passed = v.passed;
      r.detail = v.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail
        << fmt(" (%.1fs)", r.seconds) << std::endl;
    results.push_back(r);
  }
  return results;
}

}  // namespace isobif
