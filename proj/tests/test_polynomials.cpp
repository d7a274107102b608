#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "isobif/polynomials.hpp"

using namespace isobif;

TEST_CASE("Clifford system") {
  const auto c = build_clifford(1);
  REQUIRE(c.P.size() == 3);
  const Eigen::VectorXd d = c.P[0].diagonal();
  const double expected[8] = {1, 1, -1, -1, 1, 1, -1, -1};
  for (int i = 0; i < 8; ++i) CHECK(d[i] == expected[i]);
  for (int n = 1; n <= 4; ++n) {
    const auto s = build_clifford(n);
    CHECK(clifford_residual(s) == 0.0);
    for (const auto& P : s.P) CHECK((P * P - Eigen::MatrixXd::Identity(P.rows(), P.cols())).norm() == 0.0);
  }
}

TEST_CASE("FKM polynomial at a basis vector and its two forms") {
  const auto c = build_clifford(2);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(12);
  e1[0] = 1;
  CHECK(fkm_eval(c, e1) == doctest::Approx(-1.0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd x(12);
    for (auto& v : x) v = g(rng);
    CHECK(fkm2_eval(x) == doctest::Approx(fkm_eval(c, x)).epsilon(1e-12));
    const Eigen::VectorXd fd = central_gradient([&](const Eigen::VectorXd& y) { return fkm_eval(c, y); }, x, 1e-5);
    CHECK((fd - fkm_grad(c, x)).norm() <= 1e-6 * fkm_grad(c, x).norm());
  }
  CHECK_THROWS_AS(fkm_eval(c, Eigen::VectorXd::Zero(5)), std::invalid_argument);
}

TEST_CASE("Ozeki-Takeuchi polynomial at a basis vector") {
  // v = 0 and u = (1, 0): every term of F0 vanishes, so F = ||x||^4 = 1.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(16);
  x[0] = 1;
  CHECK(ot_eval(x) == doctest::Approx(1.0));
  CHECK(ot_eval_printed(x, 1) == doctest::Approx(1.0));
}

TEST_CASE("degree-two Cartan-Munzner check") {
  for (auto [p, q] : {std::pair{3, 3}, {2, 5}}) {
    auto F = [p = p](const Eigen::VectorXd& x) { return x.head(p).squaredNorm() - x.tail(x.size() - p).squaredNorm(); };
    const auto r = verify_cm(F, p + q, 2, 50, 11);
    CHECK(r.max_grad_residual < 1e-8);
    CHECK(r.c_nearest == p - q);
    CHECK(r.c_deviation < 1e-3);
  }
}

TEST_CASE("FKM verification") {
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const auto r = verify_fkm(n, 100, 42);
    CHECK(r.passed);
    CHECK(r.c_expected == 2 * n - 3);
    CHECK(r.cm.c_nearest == 2 * n - 3);
    CHECK(r.cm.max_grad_residual <= 1e-9);
    for (const auto& [name, v] : r.invariance_residuals) {
      CAPTURE(name);
      CHECK(v <= 1e-9);
    }
  }
}

TEST_CASE("OT verification") {
  for (int n = 1; n <= 2; ++n) {
    CAPTURE(n);
    const auto r = verify_ot(n, 100, 42);
    CHECK(r.passed);
    CHECK(r.cm.max_grad_residual <= 1e-5);
    CHECK(r.printed_grad_residual > 1e-5);
    CHECK(r.normalization.find("homogenized") != std::string::npos);
  }
}

TEST_CASE("quaternion arithmetic") {
  const Quaternion i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
  const Quaternion ij = i * j, ji = j * i;
  CHECK(ij.z == 1.0);
  CHECK(ji.z == -1.0);
  const Quaternion p{1, 2, 3, 4};
  const Quaternion n = p * p.conj();
  CHECK(n.w == doctest::Approx(p.norm2()));
  CHECK(n.x == 0.0);
  CHECK((i * j * k).w == -1.0);
}
