#pragma once

#include <span>
#include <vector>

#include "isobif/geometry.hpp"
#include "isobif/ode.hpp"

namespace isobif {

struct EigenResult {
  int k = 0;
  double mu_numeric = 0.0;
  double mu_closed = 0.0;
  int zero_count = 0;
  double u_at_tstar = 0.0;  // with u(0) = 1
  IvpTrace trace;           // glued eigenfunction on [delta, t* - delta]

  double rel_err() const { return std::abs(mu_numeric - mu_closed) / mu_closed; }
};

// u_L u_R' - u_L' u_R at t*/2, both sides started from u = 1, u' = 0.
double wronskian(const MunznerProfile& profile, double mu, const OdeOptions& options = {});

// First `count` invariant eigenvalues, found by scanning the Wronskian over
// (0, closed_form_mu(count + 1)) and refining each sign change. Throws
// std::runtime_error if fewer than `count` roots are found or the scan sees
// a double touch.
std::vector<EigenResult> find_eigenvalues(const GeometryEntry& entry, int count, const OdeOptions& options = {},
                                          int workers = 1);

// Sign changes of (phi - offset) across consecutive samples. Values within
// 1e-12 of the offset are skipped rather than counted.
int count_zeros(std::span<const TracePoint> samples, double offset = 0.0);
inline int count_zeros(const IvpTrace& trace, double offset = 0.0) { return count_zeros(trace.samples, offset); }

}  // namespace isobif
