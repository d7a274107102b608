#include "isobif/spectrum.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <stdexcept>
#include <string>

#include "isobif/parallel.hpp"

namespace isobif {

namespace {

struct SidePair {
  IvpTrace left;
  IvpTrace right;
};

SidePair shoot_both(const MunznerProfile& profile, double mu, const OdeOptions& options) {
  const double tm = 0.5 * profile.t_star();
  return {integrate_linearized(profile, mu, Side::left, tm, options),
          integrate_linearized(profile, mu, Side::right, tm, options)};
}

double wronskian_of(const SidePair& s) {
  const TracePoint& l = s.left.last();
  const TracePoint& r = s.right.last();
  return l.phi * r.dphi - l.dphi * r.phi;
}

EigenResult assemble(const GeometryEntry& entry, int k, double mu, const OdeOptions& options) {
  OdeOptions o = options;
  o.record_samples = true;
  const SidePair s = shoot_both(entry.profile, mu, o);
  const TracePoint& l = s.left.last();
  const TracePoint& r = s.right.last();
  // u_L = c u_R at an eigenvalue; least squares over value and slope.
  const double c = (l.phi * r.phi + l.dphi * r.dphi) / (r.phi * r.phi + r.dphi * r.dphi);

  EigenResult out;
  out.k = k;
  out.mu_numeric = mu;
  out.mu_closed = closed_form_mu(entry, k);
  out.u_at_tstar = c;
  out.trace.side = Side::left;
  out.trace.start_value = 1.0;
  out.trace.samples = s.left.samples;
  for (auto it = s.right.samples.rbegin(); it != s.right.samples.rend(); ++it)
    if (it->t > out.trace.samples.back().t) out.trace.samples.push_back({it->t, c * it->phi, c * it->dphi});
  out.zero_count = count_zeros(out.trace);
  return out;
}

}  // namespace

double wronskian(const MunznerProfile& profile, double mu, const OdeOptions& options) {
  OdeOptions o = options;
  o.record_samples = false;
  return wronskian_of(shoot_both(profile, mu, o));
}

std::vector<EigenResult> find_eigenvalues(const GeometryEntry& entry, int count, const OdeOptions& options,
                                          int workers) {
  if (count < 1) throw std::invalid_argument("find_eigenvalues: count >= 1");
  const double upper = closed_form_mu(entry, count + 1);
  const int points = 40 * count;
  std::vector<double> mus(points), ws(points);
  for (int i = 0; i < points; ++i) mus[i] = upper * (i + 1) / points;
  parallel_for(points, workers, [&](std::size_t i) { ws[i] = wronskian(entry.profile, mus[i], options); });

  for (int i = 1; i + 1 < points; ++i) {
    const double a = std::abs(ws[i - 1]), b = std::abs(ws[i]), c = std::abs(ws[i + 1]);
    const bool same_sign = (ws[i - 1] > 0) == (ws[i] > 0) && (ws[i] > 0) == (ws[i + 1] > 0);
    if (same_sign && b < 1e-6 * std::min(a, c))
      throw std::runtime_error("find_eigenvalues: Wronskian touches zero without a sign change near mu = " +
                               std::to_string(mus[i]) + " (double root)");
  }

  std::vector<std::pair<double, double>> brackets;
  for (int i = 0; i + 1 < points && static_cast<int>(brackets.size()) < count; ++i) {
    if (ws[i] == 0.0) {
      brackets.emplace_back(mus[i], mus[i]);
    } else if ((ws[i] > 0) != (ws[i + 1] > 0) && ws[i + 1] != 0.0) {
      brackets.emplace_back(mus[i], mus[i + 1]);
    }
  }
  if (static_cast<int>(brackets.size()) < count)
    throw std::runtime_error("find_eigenvalues: found " + std::to_string(brackets.size()) + " of " +
                             std::to_string(count) + " eigenvalues for " + entry.id);

  std::vector<EigenResult> out(count);
  parallel_for(count, workers, [&](std::size_t j) {
    auto [lo, hi] = brackets[j];
    double mu = lo;
    if (hi > lo) {
      auto f = [&](double m) { return wronskian(entry.profile, m, options); };
      auto tol = [](double x, double y) { return std::abs(y - x) <= 1e-11 * std::abs(x); };
      boost::uintmax_t iters = 200;
      const auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
      mu = 0.5 * (r.first + r.second);
    }
    out[j] = assemble(entry, static_cast<int>(j) + 1, mu, options);
  });
  return out;
}

int count_zeros(std::span<const TracePoint> samples, double offset) {
  int zeros = 0;
  int last_sign = 0;
  for (const TracePoint& p : samples) {
    const double v = p.phi - offset;
    if (std::abs(v) <= 1e-12) continue;
    const int s = v > 0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++zeros;
    last_sign = s;
  }
  return zeros;
}

}  // namespace isobif
