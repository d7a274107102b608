#include "isobif/ode.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <stdexcept>

namespace isobif {

namespace {

detail::ShootSetup make_setup(const MunznerProfile& profile, Side side, double t_end, double start_value,
                              const OdeOptions& options) {
  detail::ShootSetup setup;
  const double ts = profile.t_star();
  setup.t_begin = side == Side::left ? 0.0 : ts;
  setup.direction = side == Side::left ? 1.0 : -1.0;
  setup.t_end = t_end;
  setup.start_value = start_value;
  setup.m_side = profile.m_side(side == Side::right);
  setup.delta_base = options.delta_factor * ts;
  setup.max_step = options.max_step_fraction * ts;
  return setup;
}

void check_t_end(const MunznerProfile& profile, double t_end) {
  if (!(t_end > 0.0 && t_end < profile.t_star()))
    throw std::domain_error("t_end must lie strictly inside (0, t*)");
}

}  // namespace

OdeOptions ode_options(const Numerics& numerics) {
  OdeOptions o;
  o.tolerance = numerics.tol_ode;
  o.delta_factor = numerics.delta_endpoint_factor;
  o.max_step_fraction = numerics.max_step_fraction;
  o.overflow_cap = numerics.overflow_cap;
  return o;
}

double endpoint_accel(const EquationParams& params, double value, Side side) {
  const int m = params.entry.profile.m_side(side == Side::right);
  return params.lambda * (value - detail::SignedPower(params.q)(value)) / (1.0 + m);
}

IvpTrace integrate(const EquationParams& params, double start_value, Side side, double t_end,
                   const OdeOptions& options) {
  const MunznerProfile& profile = params.entry.profile;
  check_t_end(profile, t_end);
  if (!(start_value > 0.0)) throw std::domain_error("integrate: start value must be positive");
  const detail::SignedPower power(params.q);
  const double lambda = params.lambda;
  auto coefficient = [&profile](double t) { return profile.mean_curvature(t); };
  auto source = [&](double phi) { return lambda * (power(phi) - phi); };
  const auto setup = make_setup(profile, side, t_end, start_value, options);
  return detail::shoot(coefficient, source, setup, options);
}

IvpTrace integrate_linearized(const MunznerProfile& profile, double mu, Side side, std::optional<double> t_end,
                              const OdeOptions& options) {
  const double ts = profile.t_star();
  const double offset = options.delta_factor * ts;
  const double end = t_end.value_or(side == Side::left ? ts - offset : offset);
  check_t_end(profile, end);
  auto coefficient = [&profile](double t) { return profile.mean_curvature(t); };
  auto source = [mu](double u) { return mu * u; };
  auto setup = make_setup(profile, side, end, 1.0, options);
  setup.stop_on_zero = false;
  return detail::shoot(coefficient, source, setup, options);
}

std::optional<MissValue> miss(const EquationParams& params, double alpha, double beta, const OdeOptions& options) {
  OdeOptions o = options;
  o.record_samples = false;
  const double tm = 0.5 * params.entry.profile.t_star();
  const IvpTrace left = integrate(params, alpha, Side::left, tm, o);
  if (left.status != TraceStatus::ok) return std::nullopt;
  const IvpTrace right = integrate(params, beta, Side::right, tm, o);
  if (right.status != TraceStatus::ok) return std::nullopt;
  return MissValue{left.last().phi - right.last().phi, left.last().dphi - right.last().dphi};
}

std::optional<std::vector<TracePoint>> glue(const EquationParams& params, double alpha, double beta,
                                            const OdeOptions& options) {
  OdeOptions o = options;
  o.record_samples = true;
  const double tm = 0.5 * params.entry.profile.t_star();
  const IvpTrace left = integrate(params, alpha, Side::left, tm, o);
  if (left.status != TraceStatus::ok) return std::nullopt;
  const IvpTrace right = integrate(params, beta, Side::right, tm, o);
  if (right.status != TraceStatus::ok) return std::nullopt;
  std::vector<TracePoint> out(left.samples.begin(), left.samples.end());
  // Right samples run from t* down to tm; skip the duplicate matching point.
  for (auto it = right.samples.rbegin(); it != right.samples.rend(); ++it)
    if (it->t > out.back().t) out.push_back(*it);
  return out;
}

namespace detail {

double hermite_zero(double t0, double p0, double d0, double t1, double p1, double d1) {
  if (p0 == 0.0) return t0;
  if (p1 == 0.0) return t1;
  const double h = t1 - t0;
  auto cubic = [&](double s) {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * p1 +
           (s3 - s2) * h * d1;
  };
  boost::uintmax_t iters = 100;
  const auto tol = boost::math::tools::eps_tolerance<double>(50);
  const auto [lo, hi] = boost::math::tools::toms748_solve(cubic, 0.0, 1.0, p0, p1, tol, iters);
  return t0 + 0.5 * (lo + hi) * h;
}

}  // namespace detail
}  // namespace isobif
