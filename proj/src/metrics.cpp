#include "isobif/metrics.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "isobif/geometry.hpp"

namespace isobif {

const char* to_string(MetricFamily family) {
  switch (family) {
    case MetricFamily::u: return "u";
    case MetricFamily::sp: return "sp";
    case MetricFamily::spin9: return "spin9";
  }
  return "?";
}

MetricFamily parse_family(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "u") return MetricFamily::u;
  if (s == "sp") return MetricFamily::sp;
  if (s == "spin9") return MetricFamily::spin9;
  throw std::invalid_argument("unknown metric family '" + std::string(name) + "' (expected u, sp, spin9)");
}

int HopfMetric::dimension() const {
  switch (family) {
    case MetricFamily::u: return 2 * n + 1;
    case MetricFamily::sp: return 4 * n + 3;
    case MetricFamily::spin9: return 15;
  }
  return 0;
}

void validate(const HopfMetric& metric) {
  const std::size_t want = metric.family == MetricFamily::sp ? 3 : 1;
  if (metric.scales.size() != want)
    throw std::invalid_argument(std::string("family ") + to_string(metric.family) + " takes " +
                                std::to_string(want) + " scale(s)");
  for (const double x : metric.scales)
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("metric scales must be positive");
  if (metric.family != MetricFamily::spin9 && metric.n < 1) throw std::invalid_argument("metric: n >= 1");
}

double scalar_curvature(const HopfMetric& metric) {
  validate(metric);
  const double n = metric.n;
  switch (metric.family) {
    case MetricFamily::u: {
      const double x = metric.scales[0];
      return 4 * n * n + 4 * n - 2 * n * x;
    }
    case MetricFamily::sp: {
      const double x1 = metric.scales[0], x2 = metric.scales[1], x3 = metric.scales[2];
      const double inner = x1 * x1 + x2 * x2 + x3 * x3 - (x2 - x3) * (x2 - x3) - (x3 - x1) * (x3 - x1) -
                           (x1 - x2) * (x1 - x2);
      return 2.0 / (x1 * x2 * x3) * inner - 4 * n * (x1 + x2 + x3) + 16 * n * n + 32 * n;
    }
    case MetricFamily::spin9: {
      const double x = metric.scales[0];
      return 42.0 / x - 56.0 * x + 224.0;
    }
  }
  return 0.0;
}

std::vector<CurvatureTerm> sectional_curvatures(const HopfMetric& metric) {
  validate(metric);
  const double n = metric.n;
  std::vector<CurvatureTerm> out;
  switch (metric.family) {
    case MetricFamily::u: {
      const double x = metric.scales[0];
      out.push_back({"K(X,Y_a)", x, 2 * n});
      out.push_back({"K(Y_a,iY_a)", 4 - 3 * x, n});
      out.push_back({"K(Y_a,Y_b)", 1.0, 2 * n * (n - 1)});
      break;
    }
    case MetricFamily::sp: {
      const auto& x = metric.scales;
      const double prod = x[0] * x[1] * x[2];
      for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        const double v =
            (-3 * x[k] * x[k] + 2 * x[i] * x[k] + 2 * x[j] * x[k] + (x[j] - x[i]) * (x[j] - x[i])) / prod;
        out.push_back({"K(X_" + std::to_string(i + 1) + ",X_" + std::to_string(j + 1) + ")", v, 1.0});
      }
      for (int i = 0; i < 3; ++i)
        out.push_back({"K(X_" + std::to_string(i + 1) + ",Y_a)", x[i], 4 * n});
      // (Y_a, Y_ai) and (Y_aj, Y_ak) for each a.
      for (int i = 0; i < 3; ++i)
        out.push_back({"K(Y_a,Y_a" + std::to_string(i + 1) + ")", 4 - 3 * x[i], 2 * n});
      out.push_back({"K(Y_a,Y_b)", 1.0, 8 * n * n - 8 * n});
      break;
    }
    case MetricFamily::spin9: {
      const double x = metric.scales[0];
      out.push_back({"K(X_i,X_j)", 1.0 / x, 21});
      out.push_back({"K(Y_a,Y_b)", 4 - 3 * x, 28});
      out.push_back({"K(X_i,Y_a)", x, 56});
      break;
    }
  }
  return out;
}

double yamabe_constant(int dimension) { return 4.0 * (dimension - 1) / (dimension - 2); }

double yamabe_lambda(const HopfMetric& metric) {
  const double s = scalar_curvature(metric);
  if (!(s > 0.0))
    throw std::domain_error("yamabe_lambda: scalar curvature must be positive (s = " + std::to_string(s) + ")");
  return s / yamabe_constant(metric.dimension());
}

double sp_threshold(int n, int k, double q) { return 4.0 * k * (4.0 * k + 4.0 * n + 2.0) / (q - 1.0); }

Prediction predict_counts_at(int n, double lambda, std::optional<double> q) {
  if (n < 1) throw std::invalid_argument("predict_counts: n >= 1");
  Prediction p;
  p.n = n;
  p.q = q.value_or(critical_exponent(4 * n + 3));
  if (!(p.q > 1.0) || !(p.q <= critical_exponent(4 * n)))
    throw std::invalid_argument("predict_counts: q must lie in (1, p_{4n}]");
  p.lambda = lambda;
  while (sp_threshold(n, p.k + 1, p.q) < lambda) ++p.k;
  for (int k = 1; k <= p.k + 1; ++k) p.thresholds.push_back(sp_threshold(n, k, p.q));

  const int half = (n + 1) / 2;
  const int k = p.k;
  p.breakdown.push_back({"Sp(n)", 2 * k});
  for (int l = 2; l <= half; ++l)
    p.breakdown.push_back({"Sp(" + std::to_string(n + 1 - l) + ")xSp(" + std::to_string(l) + ")", 2 * k});
  p.breakdown.push_back({"U(n+1)", k});
  p.total_cor17 = (2 * half + 1) * k;
  p.total_cor19 = 2 * (half + 1) * k;
  return p;
}

Prediction predict_counts(const HopfMetric& metric, std::optional<double> q) {
  if (metric.family != MetricFamily::sp) throw std::invalid_argument("predict_counts: Sp family only");
  return predict_counts_at(metric.n, yamabe_lambda(metric), q);
}

double sp_round_fibre_scalar(int n, double t) {
  return 6.0 / (t * t) - 12.0 * n * t * t + 16.0 * n * n + 32.0 * n;
}

double sp_round_fibre_scale(int n, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("sp_round_fibre_scale: lambda must be positive");
  const double target = lambda * yamabe_constant(4 * n + 3);
  auto f = [&](double t) { return sp_round_fibre_scalar(n, t) - target; };
  double lo = 1.0, hi = 1.0;
  while (f(lo) < 0.0) lo *= 0.5;
  while (f(hi) > 0.0) hi *= 2.0;
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace isobif
