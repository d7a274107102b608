#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <algorithm>
#include <vector>

#include "isobif/config.hpp"
#include "isobif/geometry.hpp"

namespace isobif {

enum class Side { left, right };
enum class TraceStatus { ok, hit_zero, overflow };

struct TracePoint {
  double t;
  double phi;
  double dphi;
};

struct IvpTrace {
  Side side = Side::left;
  double start_value = 1.0;
  std::vector<TracePoint> samples;  // ordered in integration direction
  TraceStatus status = TraceStatus::ok;
  double event_t = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> zeros;  // sign changes passed through (linear traces only)

  const TracePoint& last() const { return samples.back(); }
};

struct EquationParams {
  GeometryEntry entry;
  double q = 3.0;
  double lambda = 1.0;
};

struct OdeOptions {
  double tolerance = 1e-10;
  double delta_factor = 1e-4;
  double max_step_fraction = 1.0 / 50.0;
  double overflow_cap = 1e12;
  bool record_samples = true;
};

OdeOptions ode_options(const Numerics& numerics);

// phi'' at a focal endpoint: lambda (value - value^q)/(1 + m_side).
double endpoint_accel(const EquationParams& params, double value, Side side);

// Integrates phi'' + h phi' + lambda (phi^q - phi) = 0 from the endpoint on
// `side` with phi = start_value, phi' = 0 until t_end. Stops at the first
// sign change of phi (hit_zero) or when |phi| exceeds the overflow cap.
IvpTrace integrate(const EquationParams& params, double start_value, Side side, double t_end,
                   const OdeOptions& options = {});

// u'' + h u' + mu u = 0 with u = 1, u' = 0 at the endpoint; zeros are
// recorded but never stop the integration. t_end defaults to the far
// endpoint minus the offset.
IvpTrace integrate_linearized(const MunznerProfile& profile, double mu, Side side,
                              std::optional<double> t_end = std::nullopt, const OdeOptions& options = {});

using MissValue = std::array<double, 2>;

// (phi_L - phi_R, phi_L' - phi_R') at t*/2. Empty when either side stops
// early: no positive solution passes through (alpha, beta).
std::optional<MissValue> miss(const EquationParams& params, double alpha, double beta,
                              const OdeOptions& options = {});

// Full solution through (alpha, beta) on [delta, t* - delta], left half then
// right half, ordered in t. Empty under the same condition as miss().
std::optional<std::vector<TracePoint>> glue(const EquationParams& params, double alpha, double beta,
                                            const OdeOptions& options = {});

namespace detail {

// sign(x)|x|^q. Intermediate Runge-Kutta stages can dip below zero just
// before a sign change is detected; the odd extension keeps them finite.
struct SignedPower {
  double q;
  int integer_q;

  explicit SignedPower(double exponent)
      : q(exponent), integer_q(exponent == std::floor(exponent) && exponent <= 16 ? static_cast<int>(exponent) : 0) {}

  double operator()(double x) const {
    if (integer_q == 3) return x * x * x;
    if (integer_q == 2) return x * std::abs(x);
    if (integer_q > 0) {
      double r = x;
      for (int i = 1; i < integer_q; ++i) r *= x;
      return (integer_q % 2 == 0 && x < 0.0) ? -r : r;
    }
    return x >= 0.0 ? std::pow(x, q) : -std::pow(-x, q);
  }
};

// Setup for phi'' + coefficient(t) phi' + source(phi) = 0 leaving a regular
// singular point where coefficient ~ m_side / (t - t_begin).
struct ShootSetup {
  double t_begin = 0.0;
  double direction = 1.0;  // +1 forward in t, -1 backward
  double t_end = 1.0;
  double start_value = 1.0;
  double m_side = 1.0;
  double delta_base = 1e-4;  // offset cap before the scale-based shrink
  double max_step = 0.02;
  bool stop_on_zero = true;
};

// Localizes the zero of the cubic Hermite interpolant of (t0, p0, d0),
// (t1, p1, d1); requires p0 * p1 <= 0.
double hermite_zero(double t0, double p0, double d0, double t1, double p1, double d1);

template <class Coefficient, class Source>
IvpTrace shoot(const Coefficient& coefficient, const Source& source, const ShootSetup& setup,
               const OdeOptions& options) {
  using State = std::array<double, 2>;
  IvpTrace trace;
  trace.start_value = setup.start_value;
  trace.side = setup.direction > 0 ? Side::left : Side::right;

  const double accel = -source(setup.start_value) / (1.0 + setup.m_side);
  double delta = setup.delta_base;
  if (accel != 0.0) {
    const double scale = std::sqrt(std::abs(setup.start_value / accel));
    delta = std::min(delta, 1e-3 * scale);
  }
  const double span = std::abs(setup.t_end - setup.t_begin);
  delta = std::min(delta, 0.5 * span);

  auto rhs = [&](double t, const State& y) -> State {
    return {y[1], -coefficient(t) * y[1] - source(y[0])};
  };

  const double dir = setup.direction;
  double t = setup.t_begin + dir * delta;
  State y{setup.start_value + 0.5 * accel * delta * delta, dir * accel * delta};
  trace.samples.push_back({t, y[0], y[1]});

  // Dormand-Prince 5(4) tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double tol = options.tolerance;
  double h = std::min(delta, setup.max_step);
  State k1 = rhs(t, y);
  long guard = 0;

  while ((setup.t_end - t) * dir > 0.0) {
    if (++guard > 2000000) {
      trace.status = TraceStatus::overflow;
      trace.event_t = t;
      break;
    }
    h = std::min({h, setup.max_step, std::abs(setup.t_end - t)});
    const double hs = dir * h;
    State s, k2, k3, k4, k5, k6;
    for (int i = 0; i < 2; ++i) s[i] = y[i] + hs * a21 * k1[i];
    k2 = rhs(t + c2 * hs, s);
    for (int i = 0; i < 2; ++i) s[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(t + c3 * hs, s);
    for (int i = 0; i < 2; ++i) s[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(t + c4 * hs, s);
    for (int i = 0; i < 2; ++i) s[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(t + c5 * hs, s);
    for (int i = 0; i < 2; ++i)
      s[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = rhs(t + hs, s);
    State y_new;
    for (int i = 0; i < 2; ++i)
      y_new[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const double t_new = (std::abs(setup.t_end - t) <= h) ? setup.t_end : t + hs;
    const State k7 = rhs(t_new, y_new);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(0.5 * err);
    if (!std::isfinite(err)) err = 1e10;

    if (err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < 1e-15 * std::max(1.0, std::abs(t))) {
        trace.status = TraceStatus::overflow;
        trace.event_t = t;
        break;
      }
      continue;
    }

    if (!std::isfinite(y_new[0]) || !std::isfinite(y_new[1]) || std::abs(y_new[0]) > options.overflow_cap) {
      trace.status = TraceStatus::overflow;
      trace.event_t = t_new;
      break;
    }

    if ((y[0] > 0.0 && y_new[0] <= 0.0) || (y[0] < 0.0 && y_new[0] >= 0.0)) {
      const double tz = hermite_zero(t, y[0], y[1], t_new, y_new[0], y_new[1]);
      if (setup.stop_on_zero) {
        const double w = (tz - t) / (t_new - t);
        trace.samples.push_back({tz, 0.0, (1.0 - w) * y[1] + w * y_new[1]});
        trace.status = TraceStatus::hit_zero;
        trace.event_t = tz;
        return trace;
      }
      trace.zeros.push_back(tz);
    }

    t = t_new;
    y = y_new;
    k1 = k7;
    if (options.record_samples || (setup.t_end - t) * dir <= 0.0) trace.samples.push_back({t, y[0], y[1]});
    h *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
  }
  if (trace.samples.back().t != t) trace.samples.push_back({t, y[0], y[1]});
  return trace;
}

}  // namespace detail
}  // namespace isobif
