#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isobif/geometry.hpp"

using namespace isobif;
using std::numbers::pi;

TEST_CASE("torus profile") {
  const auto e = s3_torus();
  CHECK(e.profile.degree() == 2);
  CHECK(e.profile.multiplicities() == std::vector<int>{1, 1});
  CHECK(e.profile.t_star() == doctest::Approx(pi / 2));
  CHECK(std::isinf(e.p_f));
  CHECK(std::abs(h_eval(e.profile, pi / 4)) < 1e-15);
  CHECK(h_eval(e.profile, pi / 6) == doctest::Approx(2 / std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("critical exponents of the focal data") {
  CHECK(s4_o3o2().p_f == doctest::Approx(5.0));
  for (int n = 2; n <= 4; ++n) {
    const auto e = hpn_un1(n);
    CHECK(e.p_f == doctest::Approx((n + 1.0) / (n - 1.0)));
  }
  CHECK(critical_exponent(4) == doctest::Approx(3.0));
  CHECK(std::isinf(critical_exponent(2)));
}

TEST_CASE("mean curvature blows up like m/t at both ends") {
  for (const auto& e : catalog()) {
    CAPTURE(e.id);
    const auto& p = e.profile;
    const double ts = p.t_star();
    double prev_left = kInfinity, prev_right = kInfinity;
    for (double t = ts / 10; t > 1e-6 * ts; t /= 4) {
      const double left = std::abs(t * h_eval(p, t) - p.m_left());
      const double right = std::abs(-t * h_eval(p, ts - t) - p.m_right());
      CHECK(left <= prev_left);
      CHECK(right <= prev_right);
      prev_left = left;
      prev_right = right;
    }
    CHECK(prev_left < 1e-6);
    CHECK(prev_right < 1e-6);
  }
  const auto ball = sphere_radial(3);
  CHECK(1e-7 * h_eval(ball.profile, 1e-7) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("h_eval rejects the endpoints") {
  const auto e = s3_torus();
  CHECK_THROWS_AS(h_eval(e.profile, 0.0), std::domain_error);
  CHECK_THROWS_AS(h_eval(e.profile, e.profile.t_star()), std::domain_error);
}

TEST_CASE("closed-form invariant eigenvalues") {
  CHECK(closed_form_mu(s3_torus(), 1) == doctest::Approx(8));
  CHECK(closed_form_mu(cpn_son1(2), 1) == doctest::Approx(32));
  for (int n = 2; n <= 4; ++n) CHECK(closed_form_mu(hpn_un1(n), 1) == doctest::Approx(4.0 * (4 + 4 * n + 2)));
}

TEST_CASE("exponent admissibility") {
  CHECK(validate_exponent(s3_torus(), 10.0));
  CHECK_FALSE(validate_exponent(s4_o3o2(), 5.0));
  CHECK(validate_exponent(s4_o3o2(), 4.9));
  CHECK_FALSE(validate_exponent(sphere_radial(4), 3.0));
  CHECK_FALSE(validate_exponent(s3_torus(), 1.0));
}

TEST_CASE("catalog lookup") {
  CHECK(find_entry("cpn_un(2)").id == cpn_un(2).id);
  CHECK(find_entry("cpn_un:2").id == cpn_un(2).id);
  CHECK(find_entry("hpn_spkspl(3,2,2)").profile.sphere_dim() == hpn_spkspl(3, 2, 2).profile.sphere_dim());
  CHECK_THROWS_AS(find_entry("nope"), std::invalid_argument);
  CHECK_THROWS_AS(find_entry("cpn_un(0)"), std::invalid_argument);
  for (const auto& e : catalog()) {
    CAPTURE(e.id);
    CHECK(find_entry(e.id).profile.multiplicities() == e.profile.multiplicities());
    CHECK(e.p_f > 1.0);
  }
}
