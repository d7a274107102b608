#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "isobif/ode.hpp"
#include "isobif/spectrum.hpp"

namespace isobif {

struct SolverOptions {
  OdeOptions ode;
  double tol_newton = 1e-8;
  double fd_step = 1e-6;  // central differences in log coordinates
  double dedup_eps = 1e-4;
  double floor = 1e-6;  // smallest alpha, beta considered positive
  int max_newton = 40;
  int workers = 1;
};

SolverOptions solver_options(const Numerics& numerics, int workers = 1);

struct BranchPoint {
  double lambda = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double sup_dist = 0.0;  // max |phi - 1| over the glued trace
  int zero_count = 0;     // sign changes of phi - 1 on (0, t*)
  double residual = 0.0;  // max-norm of the miss vector
  int direction = 0;      // sub-branch: +1 starts with alpha > 1, -1 with alpha < 1
  int step = 0;
};

enum class BranchEnd { lambda_max, left_box, steps_exhausted, stalled };
const char* to_string(BranchEnd end);

struct Branch {
  int k = 0;
  double lambda_k = 0.0;
  int expected_zero_count = 0;  // n_k from the spectrum
  double bound_A = 0.0;
  std::vector<BranchPoint> points;  // sub-branch +1 then sub-branch -1
  std::array<BranchEnd, 2> ends{BranchEnd::stalled, BranchEnd::stalled};
  std::string diagnostics;

  bool reached(double lambda_max) const;
};

struct CensusSolution {
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 0.0;
  int zero_count = 0;
  double sup_dist = 0.0;
  double sup_phi = 0.0;
};

struct Census {
  EquationParams params;
  double bound_A = 0.0;
  std::vector<CensusSolution> solutions;  // sorted by (alpha, beta)
  std::string method = "newton_grid";
  int grid_n = 0;
  // q lambda A^(q-1) <= lambda + mu_1: only the constant solution can exist.
  bool trivial_only_certificate = false;
  double mu_1 = 0.0;
};

// mu_k / (q - 1) for k = 1..count, with mu_k from find_eigenvalues.
std::vector<double> bifurcation_lambdas(const GeometryEntry& entry, double q, int count,
                                        const OdeOptions& options = {});

// Glues the solution through (alpha, beta) and fills sup_dist, zero_count
// and residual. Empty when no positive solution passes through the pair.
std::optional<BranchPoint> evaluate_point(const EquationParams& params, double alpha, double beta,
                                          const OdeOptions& options = {});

// Damped Newton on miss in (ln alpha, ln beta) at fixed lambda. Returns the
// converged point when the residual is within tol_newton.
std::optional<BranchPoint> solve_point(const EquationParams& params, double alpha0, double beta0,
                                       const SolverOptions& options = {});

// Two points near (1, 1, lambda_k): alpha = 1 +- s0 is held fixed while
// (beta, lambda) are Newton-corrected from (1 +- s0 u_k(t*), lambda_k).
// Throws std::runtime_error when either correction fails within 20 steps.
std::array<BranchPoint, 2> seed_branch(const GeometryEntry& entry, double q, int k, double s0,
                                       const SolverOptions& options = {});

// Pseudo-arclength continuation of both sub-branches in (ln alpha, ln beta,
// lambda) up to lambda_max or max_steps accepted points per sub-branch.
Branch continue_branch(const GeometryEntry& entry, double q, int k, double lambda_max, int max_steps,
                       const SolverOptions& options = {}, double s0 = 1e-2);

// The branch solution at a given lambda: interpolates between the bracketing
// accepted points of the given sub-branch and corrects at fixed lambda.
std::optional<BranchPoint> branch_point_at(const Branch& branch, const GeometryEntry& entry, double q,
                                           double lambda, int direction, const SolverOptions& options = {});

// Smallest doubling a >= 2 such that a 10^(j/7), j = 0..7, all develop a
// zero on (0, t*); returns 2a, the max over both endpoints. Throws
// std::runtime_error beyond 1e12.
double apriori_bound(const EquationParams& params, const OdeOptions& options = {});

Census census(const EquationParams& params, int grid_n, const SolverOptions& options = {});

// Independent lower bound on the number of nontrivial solutions: clusters of
// fine_n x fine_n cells where both miss components change sign, counted when
// the miss map winds around the cluster. The trivial cluster is excluded.
int count_oracle(const EquationParams& params, int fine_n, const SolverOptions& options = {});

// First zero of w'' + (m0/t) w' + w^q = 0, w(0) = 1, w'(0) = 0. Throws
// std::runtime_error if there is none before t = 1e3.
double limit_profile(double m0, double q);

// phi(0)^((q-1)/2) sqrt(lambda) t_z for the left trace started at alpha.
// Throws std::runtime_error if the trace has no zero.
double rescaled_first_zero(const EquationParams& params, double alpha, const OdeOptions& options = {});

}  // namespace isobif
