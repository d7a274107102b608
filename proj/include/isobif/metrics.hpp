#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace isobif {

enum class MetricFamily { u, sp, spin9 };

const char* to_string(MetricFamily family);
// Accepts "u", "sp", "spin9" (case-insensitive). Throws std::invalid_argument.
MetricFamily parse_family(std::string_view name);

// Homogeneous metric on S^N obtained by scaling the Hopf fibres: U(n+1) on
// S^{2n+1} (one scale), Sp(n+1) on S^{4n+3} (three scales), Spin(9) on S^15
// (one scale, n unused).
struct HopfMetric {
  MetricFamily family = MetricFamily::sp;
  int n = 1;
  std::vector<double> scales{1.0, 1.0, 1.0};

  int dimension() const;
};

// Checks scale count and positivity; throws std::invalid_argument.
void validate(const HopfMetric& metric);

double scalar_curvature(const HopfMetric& metric);

struct CurvatureTerm {
  std::string name;
  double value;
  double weight;  // number of orthonormal pairs with this curvature
};

// Sum of weight * value equals scalar_curvature / 2.
std::vector<CurvatureTerm> sectional_curvatures(const HopfMetric& metric);

// 4 (N - 1)/(N - 2)
double yamabe_constant(int dimension);

// s / a_N. Throws std::domain_error when s <= 0.
double yamabe_lambda(const HopfMetric& metric);

struct PredictionItem {
  std::string action;
  int count;
};

struct Prediction {
  int n = 0;
  double q = 0.0;
  double lambda = 0.0;
  int k = 0;  // lambda in (alpha_k, alpha_{k+1}]; 0 below alpha_1
  std::vector<double> thresholds;  // alpha_1 .. alpha_{k+1}
  std::vector<PredictionItem> breakdown;
  int total_cor17 = 0;  // (2[(n+1)/2] + 1) k
  int total_cor19 = 0;  // 2([(n+1)/2] + 1) k
};

// alpha_k = 4k(4k + 4n + 2)/(q - 1).
double sp_threshold(int n, int k, double q);

// Multiplicity prediction for the Sp family on S^{4n+3} at a given lambda.
// q defaults to p_{4n+3}; throws std::invalid_argument unless q is in
// (1, p_{4n}].
Prediction predict_counts_at(int n, double lambda, std::optional<double> q = std::nullopt);
Prediction predict_counts(const HopfMetric& metric, std::optional<double> q = std::nullopt);

// s at x = (t^2, t^2, t^2): 6/t^2 - 12 n t^2 + 16 n^2 + 32 n.
double sp_round_fibre_scalar(int n, double t);

// The t > 0 with s(t^2, t^2, t^2)/a_{4n+3} = lambda (s is decreasing in t).
double sp_round_fibre_scale(int n, double lambda);

}  // namespace isobif
