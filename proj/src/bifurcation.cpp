#include "isobif/bifurcation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "isobif/parallel.hpp"

namespace isobif {

namespace {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat23 = Eigen::Matrix<double, 2, 3>;

EquationParams at_lambda(const EquationParams& params, double lambda) {
  EquationParams p = params;
  p.lambda = lambda;
  return p;
}

std::optional<Vec2> miss_at(const EquationParams& params, const Vec3& x, const OdeOptions& ode) {
  const auto m = miss(at_lambda(params, x[2]), std::exp(x[0]), std::exp(x[1]), ode);
  if (!m) return std::nullopt;
  return Vec2((*m)[0], (*m)[1]);
}

double lambda_step(const SolverOptions& o, double lambda) { return o.fd_step * std::max(1.0, std::abs(lambda)); }

// Central-difference Jacobian of miss with respect to (ln alpha, ln beta, lambda).
std::optional<Mat23> jacobian3(const EquationParams& params, const Vec3& x, const SolverOptions& o) {
  Mat23 J;
  for (int c = 0; c < 3; ++c) {
    const double h = c == 2 ? lambda_step(o, x[2]) : o.fd_step;
    Vec3 xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const auto fp = miss_at(params, xp, o.ode);
    const auto fm = miss_at(params, xm, o.ode);
    if (!fp || !fm) return std::nullopt;
    J.col(c) = (*fp - *fm) / (2.0 * h);
  }
  return J;
}

std::optional<Vec3> null_direction(const Mat23& J) {
  Vec3 t = Vec3(J.row(0)).cross(Vec3(J.row(1)));
  const double n = t.norm();
  if (!(n > 0.0) || !std::isfinite(n)) return std::nullopt;
  return t / n;
}

}  // namespace

const char* to_string(BranchEnd end) {
  switch (end) {
    case BranchEnd::lambda_max: return "lambda_max";
    case BranchEnd::left_box: return "left_box";
    case BranchEnd::steps_exhausted: return "steps_exhausted";
    case BranchEnd::stalled: return "stalled";
  }
  return "?";
}

bool Branch::reached(double lambda_max) const {
  return std::any_of(points.begin(), points.end(), [&](const BranchPoint& p) { return p.lambda >= lambda_max; });
}

SolverOptions solver_options(const Numerics& numerics, int workers) {
  SolverOptions o;
  o.ode = ode_options(numerics);
  o.tol_newton = numerics.tol_newton;
  o.dedup_eps = numerics.dedup_eps;
  o.floor = numerics.census_floor;
  o.workers = workers;
  return o;
}

std::vector<double> bifurcation_lambdas(const GeometryEntry& entry, double q, int count, const OdeOptions& options) {
  if (!validate_exponent(entry, q))
    throw std::invalid_argument("bifurcation_lambdas: exponent outside (1, p_f) for " + entry.id);
  std::vector<double> out;
  for (const EigenResult& r : find_eigenvalues(entry, count, options)) out.push_back(r.mu_numeric / (q - 1.0));
  return out;
}

std::optional<BranchPoint> evaluate_point(const EquationParams& params, double alpha, double beta,
                                          const OdeOptions& options) {
  const auto m = miss(params, alpha, beta, options);
  if (!m) return std::nullopt;
  const auto trace = glue(params, alpha, beta, options);
  if (!trace) return std::nullopt;
  BranchPoint p;
  p.lambda = params.lambda;
  p.alpha = alpha;
  p.beta = beta;
  p.residual = std::max(std::abs((*m)[0]), std::abs((*m)[1]));
  p.sup_dist = std::max(std::abs(alpha - 1.0), std::abs(beta - 1.0));
  for (const TracePoint& s : *trace) p.sup_dist = std::max(p.sup_dist, std::abs(s.phi - 1.0));
  p.zero_count = count_zeros(*trace, 1.0);
  return p;
}

std::optional<BranchPoint> solve_point(const EquationParams& params, double alpha0, double beta0,
                                       const SolverOptions& options) {
  if (!(alpha0 > 0.0 && beta0 > 0.0)) return std::nullopt;
  Vec3 x(std::log(alpha0), std::log(beta0), params.lambda);
  auto F = miss_at(params, x, options.ode);
  if (!F) return std::nullopt;
  const double log_floor = std::log(options.floor);
  double r = F->lpNorm<Eigen::Infinity>();

  for (int it = 0; it < options.max_newton && r > 1e-12; ++it) {
    Eigen::Matrix2d J;
    for (int c = 0; c < 2; ++c) {
      Vec3 xp = x, xm = x;
      xp[c] += options.fd_step;
      xm[c] -= options.fd_step;
      const auto fp = miss_at(params, xp, options.ode);
      const auto fm = miss_at(params, xm, options.ode);
      if (!fp || !fm) return std::nullopt;
      J.col(c) = (*fp - *fm) / (2.0 * options.fd_step);
    }
    Vec2 d = J.fullPivLu().solve(-*F);
    if (!d.allFinite()) return std::nullopt;
    if (const double len = d.lpNorm<Eigen::Infinity>(); len > 1.0) d /= len;

    bool moved = false;
    for (double t = 1.0; t > 1e-3; t *= 0.5) {
      Vec3 xn = x;
      xn.head<2>() += t * d;
      const auto Fn = miss_at(params, xn, options.ode);
      if (!Fn) continue;
      const double rn = Fn->lpNorm<Eigen::Infinity>();
      if (rn < r) {
        x = xn;
        F = Fn;
        r = rn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
    if (std::min(x[0], x[1]) < log_floor - 3.0) return std::nullopt;
    if ((d.lpNorm<Eigen::Infinity>()) < 1e-14) break;
  }
  if (!(r <= options.tol_newton)) return std::nullopt;
  if (std::min(x[0], x[1]) < log_floor) return std::nullopt;
  auto p = evaluate_point(params, std::exp(x[0]), std::exp(x[1]), options.ode);
  if (p) p->residual = r;
  return p;
}

std::array<BranchPoint, 2> seed_branch(const GeometryEntry& entry, double q, int k, double s0,
                                       const SolverOptions& options) {
  if (!validate_exponent(entry, q)) throw std::invalid_argument("seed_branch: exponent outside (1, p_f)");
  if (!(s0 > 0.0 && s0 < 0.5)) throw std::invalid_argument("seed_branch: s0 must lie in (0, 0.5)");
  const auto eig = find_eigenvalues(entry, k, options.ode);
  const double lambda_k = eig[k - 1].mu_numeric / (q - 1.0);
  const double u_star = eig[k - 1].u_at_tstar;
  const EquationParams base{entry, q, lambda_k};

  std::array<BranchPoint, 2> out;
  for (int s = 0; s < 2; ++s) {
    const int sign = s == 0 ? 1 : -1;
    const double ln_alpha = std::log1p(sign * s0);
    const double beta0 = 1.0 + sign * s0 * u_star;
    if (!(beta0 > 0.0)) throw std::runtime_error("seed_branch: predictor leaves beta > 0; reduce s0");
    Vec3 x(ln_alpha, std::log(beta0), lambda_k);
    auto F = miss_at(base, x, options.ode);
    bool ok = false;
    for (int it = 0; it < 20 && F; ++it) {
      if (F->lpNorm<Eigen::Infinity>() <= 0.01 * options.tol_newton) {
        ok = true;
        break;
      }
      const auto J = jacobian3(base, x, options);
      if (!J) break;
      Eigen::Matrix2d Jr;
      Jr << (*J)(0, 1), (*J)(0, 2), (*J)(1, 1), (*J)(1, 2);
      const Vec2 d = Jr.fullPivLu().solve(-*F);
      if (!d.allFinite()) break;
      x[1] += d[0];
      x[2] += d[1];
      F = miss_at(base, x, options.ode);
    }
    if (F && F->lpNorm<Eigen::Infinity>() <= options.tol_newton) ok = true;
    if (!ok)
      throw std::runtime_error("seed_branch: Newton correction failed for " + entry.id + ", k = " +
                               std::to_string(k) + (sign > 0 ? ", s > 0" : ", s < 0"));
    auto p = evaluate_point(at_lambda(base, x[2]), std::exp(x[0]), std::exp(x[1]), options.ode);
    if (!p) throw std::runtime_error("seed_branch: corrected seed has no glued trace");
    p->direction = sign;
    p->step = 0;
    out[s] = *p;
  }
  return out;
}

namespace {

struct SubBranch {
  std::vector<BranchPoint> points;
  BranchEnd end = BranchEnd::stalled;
  std::string note;
};

SubBranch run_sub_branch(const EquationParams& base, const BranchPoint& seed, double lambda_k, double lambda_max,
                         int max_steps, double bound_A, const SolverOptions& o) {
  SubBranch out;
  out.points.push_back(seed);
  const int zero_count = seed.zero_count;
  const double lo = std::log(o.floor), hi = std::log(2.0 * bound_A);

  Vec3 x(std::log(seed.alpha), std::log(seed.beta), seed.lambda);
  auto J = jacobian3(base, x, o);
  if (!J) {
    out.note = "no Jacobian at seed";
    return out;
  }
  auto tangent = null_direction(*J);
  if (!tangent) {
    out.note = "degenerate tangent at seed";
    return out;
  }
  if (tangent->dot(x - Vec3(0.0, 0.0, lambda_k)) < 0.0) *tangent = -*tangent;

  double ds = 0.05;
  int streak = 0;
  int accepted = 0;
  while (true) {
    if (accepted >= max_steps) {
      out.end = BranchEnd::steps_exhausted;
      return out;
    }
    const Vec3 predicted = x + ds * *tangent;
    Vec3 y = predicted;
    Eigen::Matrix3d A;
    A.topRows<2>() = *J;
    A.row(2) = tangent->transpose();
    const auto lu = A.fullPivLu();
    bool converged = false;
    std::optional<Vec2> F;
    for (int it = 0; it < 12; ++it) {
      F = miss_at(base, y, o.ode);
      if (!F) break;
      if (F->lpNorm<Eigen::Infinity>() <= 0.01 * o.tol_newton) {
        converged = true;
        break;
      }
      Vec3 rhs;
      rhs << -(*F)[0], -(*F)[1], -tangent->dot(y - predicted);
      const Vec3 d = lu.solve(rhs);
      if (!d.allFinite()) break;
      y += d;
    }
    if (!converged && F && F->lpNorm<Eigen::Infinity>() <= o.tol_newton) converged = true;

    std::optional<BranchPoint> p;
    std::optional<Mat23> Jn;
    std::optional<Vec3> tn;
    if (converged && (y - x).norm() <= 2.0 * ds) {
      p = evaluate_point(at_lambda(base, y[2]), std::exp(y[0]), std::exp(y[1]), o.ode);
      if (p && p->zero_count == zero_count) {
        Jn = jacobian3(base, y, o);
        if (Jn) tn = null_direction(*Jn);
      }
    }
    if (!tn) {
      ds *= 0.5;
      streak = 0;
      if (ds < 1e-4) {
        std::ostringstream os;
        os << "corrector stall at lambda = " << x[2] << ", alpha = " << std::exp(x[0])
           << ", beta = " << std::exp(x[1]);
        out.note = os.str();
        out.end = BranchEnd::stalled;
        return out;
      }
      continue;
    }

    if (y[0] <= lo || y[1] <= lo || y[0] >= hi || y[1] >= hi) {
      out.end = BranchEnd::left_box;
      return out;
    }
    if (tn->dot(*tangent) < 0.0) *tn = -*tn;
    p->residual = F->lpNorm<Eigen::Infinity>();
    p->direction = seed.direction;
    p->step = ++accepted;
    out.points.push_back(*p);
    x = y;
    J = Jn;
    tangent = tn;
    if (++streak >= 3) {
      ds = std::min(0.5, ds * 1.3);
      streak = 0;
    }
    if (x[2] > lambda_max) {
      out.end = BranchEnd::lambda_max;
      return out;
    }
  }
}

}  // namespace

Branch continue_branch(const GeometryEntry& entry, double q, int k, double lambda_max, int max_steps,
                       const SolverOptions& options, double s0) {
  const auto seeds = seed_branch(entry, q, k, s0, options);
  const auto eig = find_eigenvalues(entry, k, options.ode);
  Branch b;
  b.k = k;
  b.lambda_k = eig[k - 1].mu_numeric / (q - 1.0);
  b.expected_zero_count = eig[k - 1].zero_count;
  const EquationParams base{entry, q, b.lambda_k};
  b.bound_A = apriori_bound(base, options.ode);

  std::array<SubBranch, 2> subs;
  SolverOptions inner = options;
  inner.workers = 1;
  parallel_for(2, options.workers, [&](std::size_t i) {
    subs[i] = run_sub_branch(base, seeds[i], b.lambda_k, lambda_max, max_steps, b.bound_A, inner);
  });
  for (int i = 0; i < 2; ++i) {
    b.points.insert(b.points.end(), subs[i].points.begin(), subs[i].points.end());
    b.ends[i] = subs[i].end;
    if (!subs[i].note.empty())
      b.diagnostics += std::string(i == 0 ? "s > 0: " : "s < 0: ") + subs[i].note + "\n";
  }
  return b;
}

std::optional<BranchPoint> branch_point_at(const Branch& branch, const GeometryEntry& entry, double q,
                                           double lambda, int direction, const SolverOptions& options) {
  const BranchPoint* prev = nullptr;
  for (const BranchPoint& p : branch.points) {
    if (p.direction != direction) continue;
    if (prev && (prev->lambda - lambda) * (p.lambda - lambda) <= 0.0 && prev->lambda != p.lambda) {
      const double w = (lambda - prev->lambda) / (p.lambda - prev->lambda);
      const double a = std::exp((1 - w) * std::log(prev->alpha) + w * std::log(p.alpha));
      const double b = std::exp((1 - w) * std::log(prev->beta) + w * std::log(p.beta));
      return solve_point(EquationParams{entry, q, lambda}, a, b, options);
    }
    prev = &p;
  }
  return std::nullopt;
}

double limit_profile(double m0, double q) {
  if (!(q > 1.0) || !((m0 + 1.0) / 2.0 < (q + 1.0) / (q - 1.0)))
    throw std::invalid_argument("limit_profile: requires (m0 + 1)/2 < (q + 1)/(q - 1)");
  const detail::SignedPower power(q);
  auto coefficient = [m0](double t) { return m0 / t; };
  auto source = [&](double w) { return power(w); };
  detail::ShootSetup setup;
  setup.t_begin = 0.0;
  setup.direction = 1.0;
  setup.t_end = 1e3;
  setup.start_value = 1.0;
  setup.m_side = m0;
  setup.delta_base = 1e-4;
  setup.max_step = 0.05;
  OdeOptions o;
  o.tolerance = 1e-12;
  o.record_samples = false;
  const IvpTrace tr = detail::shoot(coefficient, source, setup, o);
  if (tr.status != TraceStatus::hit_zero)
    throw std::runtime_error("limit_profile: no zero before t = 1e3");
  return tr.event_t;
}

double rescaled_first_zero(const EquationParams& params, double alpha, const OdeOptions& options) {
  OdeOptions o = options;
  o.record_samples = false;
  const double ts = params.entry.profile.t_star();
  const IvpTrace tr = integrate(params, alpha, Side::left, ts * (1.0 - o.delta_factor), o);
  if (tr.status != TraceStatus::hit_zero)
    throw std::runtime_error("rescaled_first_zero: trace has no zero on (0, t*)");
  return std::pow(alpha, 0.5 * (params.q - 1.0)) * std::sqrt(params.lambda) * tr.event_t;
}

}  // namespace isobif
