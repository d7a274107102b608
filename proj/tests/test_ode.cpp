#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isobif/bifurcation.hpp"
#include "isobif/ode.hpp"

using namespace isobif;

namespace {

double max_error(const IvpTrace& trace, auto exact) {
  double err = 0.0;
  for (const auto& p : trace.samples) err = std::max(err, std::abs(p.phi - exact(p.t)));
  return err;
}

}  // namespace

TEST_CASE("endpoint acceleration") {
  const EquationParams p{s3_torus(), 3.0, 4.0};
  CHECK(endpoint_accel(p, 1.0, Side::left) == 0.0);
  CHECK(endpoint_accel(p, 2.0, Side::left) == doctest::Approx(-12.0));
  CHECK(std::abs(endpoint_accel(p, 1e-12, Side::right)) < 1e-10);
}

TEST_CASE("constant solution") {
  const EquationParams p{s4_o3o2(), 3.0, 7.0};
  const double ts = p.entry.profile.t_star();
  for (Side side : {Side::left, Side::right}) {
    const auto tr = integrate(p, 1.0, side, side == Side::left ? 0.9 * ts : 0.1 * ts);
    CHECK(tr.status == TraceStatus::ok);
    for (const auto& s : tr.samples) {
      CHECK(s.phi == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(s.dphi) < 1e-12);
    }
  }
  const auto m = miss(p, 1.0, 1.0);
  REQUIRE(m);
  CHECK(std::abs((*m)[0]) < 1e-14);
  CHECK(std::abs((*m)[1]) < 1e-14);
}

TEST_CASE("linearized equation reproduces the torus eigenfunction cos 2t") {
  const auto e = s3_torus();
  const auto tr = integrate_linearized(e.profile, 8.0, Side::left);
  CHECK(max_error(tr, [](double t) { return std::cos(2 * t); }) < 1e-7);
  CHECK(std::abs(tr.last().dphi) < 1e-3);
  CHECK(tr.zeros.size() == 1);
  CHECK(tr.zeros[0] == doctest::Approx(std::numbers::pi / 4).epsilon(1e-8));
}

TEST_CASE("linearized equation reproduces (cos 2t + a)/(1 + a) on the O(3)xO(2) sphere") {
  const auto e = s4_o3o2();
  // u = cos 2t + a solves u'' + (m0 cot t - m1 tan t) u' + 10 u = 0 iff a = (m0 - m1)/5.
  const double a = (e.profile.m_left() - e.profile.m_right()) / 5.0;
  const auto tr = integrate_linearized(e.profile, 10.0, Side::left);
  CHECK(max_error(tr, [a](double t) { return (std::cos(2 * t) + a) / (1 + a); }) < 1e-7);
  const auto right = integrate_linearized(e.profile, 10.0, Side::right);
  // From the right end u(t*) = 1 so the same function divided by (a - 1)/(1 + a).
  CHECK(max_error(right, [a](double t) { return (std::cos(2 * t) + a) / (a - 1); }) < 1e-7);
}

TEST_CASE("zero mu leaves u constant") {
  const auto tr = integrate_linearized(cpn_un(2).profile, 0.0, Side::left);
  CHECK(max_error(tr, [](double) { return 1.0; }) < 1e-14);
}

TEST_CASE("error shrinks as the tolerance is tightened") {
  const auto e = s3_torus();
  double prev = kInfinity;
  for (double tol : {1e-5, 1e-7, 1e-9, 1e-11}) {
    OdeOptions o;
    o.tolerance = tol;
    const double err = max_error(integrate_linearized(e.profile, 8.0, Side::left, std::nullopt, o),
                                 [](double t) { return std::cos(2 * t); });
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-9);
}

TEST_CASE("large start values hit zero before the midpoint") {
  const EquationParams p{s3_torus(), 3.0, 4.0};
  const double ts = p.entry.profile.t_star();
  const auto tr = integrate(p, 1e3, Side::left, ts * (1 - 1e-4));
  CHECK(tr.status == TraceStatus::hit_zero);
  CHECK(tr.event_t <= ts / 2);
}

TEST_CASE("reflection symmetry of the torus miss map") {
  // h(t* - t) = -h(t): the right trace from b is the mirror of the left one.
  const EquationParams p{s3_torus(), 3.0, 6.0};
  for (auto [a, b] : {std::pair{0.7, 1.3}, {0.4, 0.9}, {1.2, 1.5}}) {
    const auto ab = miss(p, a, b), ba = miss(p, b, a);
    REQUIRE(ab);
    REQUIRE(ba);
    CHECK((*ab)[0] == doctest::Approx(-(*ba)[0]).epsilon(1e-8));
    CHECK((*ab)[1] == doctest::Approx((*ba)[1]).epsilon(1e-8));
    const auto aa = miss(p, a, a);
    REQUIRE(aa);
    CHECK(std::abs((*aa)[0]) < 1e-14);
  }
}

TEST_CASE("left and right traces match at a census root") {
  const EquationParams p{s3_torus(), 3.0, 4.5};
  const auto c = census(p, 40);
  REQUIRE_FALSE(c.solutions.empty());
  const auto& s = c.solutions.front();
  const double tm = p.entry.profile.t_star() / 2;
  const auto left = integrate(p, s.alpha, Side::left, tm);
  const auto right = integrate(p, s.beta, Side::right, tm);
  CHECK(std::abs(left.last().phi - right.last().phi) < 1e-8);
  CHECK(std::abs(left.last().dphi - right.last().dphi) < 1e-8);
  const auto m = miss(p, s.alpha, s.beta);
  REQUIRE(m);
  CHECK(std::max(std::abs((*m)[0]), std::abs((*m)[1])) < 1e-8);
}

TEST_CASE("integrate rejects bad input") {
  const EquationParams p{s3_torus(), 3.0, 4.0};
  CHECK_THROWS_AS(integrate(p, 0.0, Side::left, 0.5), std::domain_error);
  CHECK_THROWS_AS(integrate(p, 1.0, Side::left, 2.0), std::domain_error);
}

TEST_CASE("signed power") {
  const detail::SignedPower cube(3.0), frac(2.5);
  CHECK(cube(-2.0) == doctest::Approx(-8.0));
  CHECK(frac(4.0) == doctest::Approx(32.0));
  CHECK(frac(-4.0) == doctest::Approx(-32.0));
}
