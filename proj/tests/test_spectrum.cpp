#include "doctest.h"

#include <stdexcept>

#include "isobif/spectrum.hpp"

using namespace isobif;

namespace {

std::vector<double> mus(const GeometryEntry& e, int count) {
  std::vector<double> out;
  for (const auto& r : find_eigenvalues(e, count)) out.push_back(r.mu_numeric);
  return out;
}

}  // namespace

TEST_CASE("Wronskian vanishes only at eigenvalues") {
  const auto p = s3_torus().profile;
  CHECK(std::abs(wronskian(p, 8.0)) <= 1e-6);
  CHECK(std::abs(wronskian(p, 4.0)) >= 1e-2);
}

TEST_CASE("eigenvalues of the examples") {
  const auto torus = mus(s3_torus(), 3);
  CHECK(torus[0] == doctest::Approx(8).epsilon(1e-8));
  CHECK(torus[1] == doctest::Approx(24).epsilon(1e-8));
  CHECK(torus[2] == doctest::Approx(48).epsilon(1e-8));
  const auto sphere = mus(s4_o3o2(), 2);
  CHECK(sphere[0] == doctest::Approx(10).epsilon(1e-8));
  CHECK(sphere[1] == doctest::Approx(28).epsilon(1e-8));
  const auto cp = mus(cpn_un(2), 2);
  CHECK(cp[0] == doctest::Approx(12).epsilon(1e-8));
  CHECK(cp[1] == doctest::Approx(32).epsilon(1e-8));
}

TEST_CASE("every catalog entry matches the closed form with increasing zero counts") {
  for (const auto& e : catalog()) {
    CAPTURE(e.id);
    const auto rs = find_eigenvalues(e, 4);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      CHECK(rs[i].rel_err() < 1e-8);
      if (i > 0) CHECK(rs[i].zero_count > rs[i - 1].zero_count);
    }
  }
}

TEST_CASE("glued eigenfunction") {
  const auto rs = find_eigenvalues(s3_torus(), 2);
  CHECK(rs[0].zero_count == 1);
  CHECK(rs[1].zero_count == 2);
  // cos 2kt at t* = pi/2 is (-1)^k.
  CHECK(rs[0].u_at_tstar == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(rs[1].u_at_tstar == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("parallel and serial scans agree exactly") {
  const auto a = find_eigenvalues(hpn_spn(2), 5, {}, 1);
  const auto b = find_eigenvalues(hpn_spn(2), 5, {}, 3);
  for (int i = 0; i < 5; ++i) CHECK(a[i].mu_numeric == b[i].mu_numeric);
}

TEST_CASE("count_zeros") {
  std::vector<TracePoint> flat{{0.1, 1, 0}, {0.2, 1, 0}};
  CHECK(count_zeros(flat) == 0);
  CHECK(count_zeros(flat, 1.0) == 0);
  std::vector<TracePoint> wave{{0, 1, 0}, {1, -1, 0}, {2, 0, 0}, {3, -1, 0}, {4, 2, 0}};
  CHECK(count_zeros(wave) == 2);
}
