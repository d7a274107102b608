#include "doctest.h"

#include <random>
#include <stdexcept>

#include "isobif/geometry.hpp"
#include "isobif/metrics.hpp"

using namespace isobif;

TEST_CASE("round spheres") {
  CHECK(scalar_curvature({MetricFamily::u, 1, {1.0}}) == doctest::Approx(6));
  CHECK(scalar_curvature({MetricFamily::sp, 1, {1.0, 1.0, 1.0}}) == doctest::Approx(42));
  CHECK(scalar_curvature({MetricFamily::spin9, 1, {1.0}}) == doctest::Approx(210));
  for (int n = 1; n <= 5; ++n) {
    const HopfMetric u{MetricFamily::u, n, {1.0}}, sp{MetricFamily::sp, n, {1.0, 1.0, 1.0}};
    CHECK(scalar_curvature(u) == u.dimension() * (u.dimension() - 1.0));
    CHECK(scalar_curvature(sp) == sp.dimension() * (sp.dimension() - 1.0));
  }
  for (const auto& t : sectional_curvatures({MetricFamily::sp, 2, {1.0, 1.0, 1.0}})) CHECK(t.value == doctest::Approx(1));
}

TEST_CASE("Sp metric with equal fibre scales") {
  for (int n = 1; n <= 4; ++n)
    for (double t : {0.3, 1.0, 2.0}) {
      const double x = t * t;
      CHECK(scalar_curvature({MetricFamily::sp, n, {x, x, x}}) ==
            doctest::Approx(6 / x - 12 * n * x + 16.0 * n * n + 32 * n).epsilon(1e-12));
      CHECK(sp_round_fibre_scalar(n, t) == doctest::Approx(scalar_curvature({MetricFamily::sp, n, {x, x, x}})));
    }
  const double t = sp_round_fibre_scale(2, 12.0);
  CHECK(sp_round_fibre_scalar(2, t) / yamabe_constant(11) == doctest::Approx(12.0).epsilon(1e-10));
}

TEST_CASE("U family sectional curvatures") {
  const auto terms = sectional_curvatures({MetricFamily::u, 2, {0.5}});
  REQUIRE(terms.size() == 3);
  CHECK(terms[0].value == doctest::Approx(0.5));
  CHECK(terms[1].value == doctest::Approx(2.5));
  CHECK(terms[2].value == doctest::Approx(1.0));
}

TEST_CASE("weighted sectional curvatures sum to half the scalar curvature") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> scale(0.1, 4.0);
  for (int i = 0; i < 60; ++i) {
    HopfMetric m;
    m.family = static_cast<MetricFamily>(i % 3);
    m.n = 1 + i % 5;
    m.scales = m.family == MetricFamily::sp ? std::vector<double>{scale(rng), scale(rng), scale(rng)}
                                            : std::vector<double>{scale(rng)};
    double sum = 0.0, pairs = 0.0;
    for (const auto& t : sectional_curvatures(m)) {
      sum += t.weight * t.value;
      pairs += t.weight;
    }
    const int N = m.dimension();
    CHECK(pairs == doctest::Approx(N * (N - 1) / 2.0));
    CHECK(2 * sum == doctest::Approx(scalar_curvature(m)).epsilon(1e-10));
  }
}

TEST_CASE("Yamabe parameter") {
  CHECK(yamabe_lambda({MetricFamily::sp, 1, {1.0, 1.0, 1.0}}) == doctest::Approx(8.75));
  // Round S^5: s = 20, a_5 = 16/3.
  CHECK(yamabe_lambda({MetricFamily::u, 2, {1.0}}) == doctest::Approx(3.75));
  CHECK_THROWS_AS(yamabe_lambda({MetricFamily::u, 1, {5.0}}), std::domain_error);
}

TEST_CASE("metric validation") {
  CHECK_THROWS_AS(validate({MetricFamily::sp, 1, {1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate({MetricFamily::u, 1, {-1.0}}), std::invalid_argument);
  CHECK(parse_family("SPIN9") == MetricFamily::spin9);
  CHECK_THROWS_AS(parse_family("so"), std::invalid_argument);
}

TEST_CASE("count prediction") {
  const double q2 = critical_exponent(11);
  const double a1 = sp_threshold(2, 1, q2), a2 = sp_threshold(2, 2, q2);
  CHECK(a1 == doctest::Approx(4.0 * 14 / (q2 - 1)));
  CHECK(predict_counts_at(2, 0.99 * a1).total_cor17 == 0);
  const auto p1 = predict_counts_at(2, a1 * 1.001);
  CHECK(p1.k == 1);
  CHECK(p1.total_cor17 >= 3);
  CHECK(predict_counts_at(2, a2 * 1.001).total_cor17 == 6);
  const double q4 = critical_exponent(19);
  const auto p4 = predict_counts_at(4, sp_threshold(4, 2, q4) * 1.001);
  CHECK(p4.k == 2);
  CHECK(p4.total_cor17 >= 10);
  int sum = 0;
  for (const auto& item : p4.breakdown) sum += item.count;
  CHECK(sum == p4.total_cor17);
  CHECK_THROWS_AS(predict_counts_at(2, 10.0, 3.0), std::invalid_argument);
}
