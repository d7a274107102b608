#include "doctest.h"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "isobif/bifurcation.hpp"

using namespace isobif;

TEST_CASE("bifurcation values") {
  const auto l = bifurcation_lambdas(s3_torus(), 3.0, 3);
  CHECK(l[0] == doctest::Approx(4).epsilon(1e-8));
  CHECK(l[1] == doctest::Approx(12).epsilon(1e-8));
  CHECK(l[2] == doctest::Approx(24).epsilon(1e-8));
  CHECK(bifurcation_lambdas(s3_torus(), 2.0, 1)[0] == doctest::Approx(8).epsilon(1e-8));
  CHECK(bifurcation_lambdas(s4_o3o2(), 3.0, 1)[0] == doctest::Approx(5).epsilon(1e-8));
}

TEST_CASE("seed points leave the constant solution on the first branch") {
  const auto seeds = seed_branch(s3_torus(), 3.0, 1, 1e-2);
  for (const auto& s : seeds) {
    CHECK(s.residual <= 1e-8);
    CHECK(s.zero_count == 1);
    CHECK(s.lambda == doctest::Approx(4.0).epsilon(1e-2));
  }
  CHECK(seeds[0].alpha > 1.0);
  CHECK(seeds[1].alpha < 1.0);
  const auto tiny = seed_branch(s3_torus(), 3.0, 1, 1e-5);
  CHECK(tiny[0].lambda == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(tiny[0].beta == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("no nontrivial solution below the first bifurcation value") {
  const EquationParams p{s3_torus(), 3.0, 2.0};
  CHECK(census(p, 40).solutions.empty());
  CHECK(count_oracle(p, 120) == 0);
}

TEST_CASE("census just past the first bifurcation value") {
  const EquationParams p{s3_torus(), 3.0, 4.5};
  const auto c = census(p, 40);
  REQUIRE(c.solutions.size() >= 1);
  for (const auto& s : c.solutions) {
    CHECK(s.residual <= 1e-8);
    CHECK(s.alpha < c.bound_A);
    CHECK(s.beta < c.bound_A);
    // The mirror image (beta, alpha) is a solution too.
    bool mirrored = false;
    for (const auto& t : c.solutions)
      mirrored = mirrored || (std::abs(t.alpha - s.beta) < 1e-6 && std::abs(t.beta - s.alpha) < 1e-6);
    CHECK(mirrored);
  }
  CHECK(count_oracle(p, 120) >= 1);
}

TEST_CASE("census between the second and third bifurcation values") {
  const EquationParams p{s3_torus(), 3.0, 13.0};
  const auto c = census(p, 40);
  std::set<int> counts;
  for (const auto& s : c.solutions) {
    counts.insert(s.zero_count);
    CHECK(s.alpha < c.bound_A);
    CHECK(s.beta < c.bound_A);
  }
  CHECK(counts.size() >= 2);
  CHECK(static_cast<int>(c.solutions.size()) >= count_oracle(p, 200));
}

TEST_CASE("first branch: constant zero count and agreement with the census") {
  const auto e = s3_torus();
  const Branch b = continue_branch(e, 3.0, 1, 14.0, 2000);
  CHECK(b.reached(14.0));
  for (const auto& p : b.points) CHECK(p.zero_count == b.expected_zero_count);
  const auto c = census({e, 3.0, 13.0}, 40);
  for (int direction : {1, -1}) {
    const auto p = branch_point_at(b, e, 3.0, 13.0, direction);
    REQUIRE(p);
    double gap = kInfinity;
    for (const auto& s : c.solutions)
      gap = std::min(gap, std::max(std::abs(s.alpha - p->alpha), std::abs(s.beta - p->beta)));
    CHECK(gap < 1e-6);
  }
}

TEST_CASE("trivial-only certificate") {
  // Small lambda with a small bound: q lambda A^(q-1) <= lambda + mu_1.
  const auto c = census({s3_torus(), 1.5, 0.5}, 16);
  if (c.trivial_only_certificate) CHECK(c.solutions.empty());
  CHECK(c.mu_1 == doctest::Approx(8).epsilon(1e-8));
}

TEST_CASE("limit profile against the elliptic integral for m0 = 0") {
  // w'' + w^3 = 0, w(0) = 1: first zero at sqrt(2) Gamma(1/4) Gamma(1/2) / (4 Gamma(3/4)).
  const double exact = std::sqrt(2.0) * std::tgamma(0.25) * std::tgamma(0.5) / (4 * std::tgamma(0.75));
  CHECK(limit_profile(0.0, 3.0) == doctest::Approx(exact).epsilon(1e-8));
  CHECK(limit_profile(1.0, 3.0) > exact);
}

TEST_CASE("rescaled first zero converges to the limit profile") {
  const EquationParams p{s3_torus(), 3.0, 4.0};
  const double limit = limit_profile(1.0, 3.0);
  double prev = kInfinity;
  for (double alpha : {1e2, 1e3, 1e4}) {
    const double gap = std::abs(rescaled_first_zero(p, alpha) / limit - 1.0);
    CHECK(gap < 0.05);
    CHECK(gap <= prev);
    prev = gap;
  }
}

TEST_CASE("census rejects inadmissible input") {
  CHECK_THROWS_AS(census({s4_o3o2(), 5.0, 3.0}, 40), std::invalid_argument);
  CHECK_THROWS_AS(census({s3_torus(), 3.0, -1.0}, 40), std::invalid_argument);
  CHECK_THROWS_AS(census({s3_torus(), 3.0, 4.0}, 4), std::invalid_argument);
}
