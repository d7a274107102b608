#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isobif/quaternion.hpp"

namespace isobif {

struct CliffordSystem {
  int m = 0;
  int l = 0;
  std::vector<Eigen::MatrixXd> P;  // m + 1 symmetric matrices of size 2l
};

// P_0, P_1, P_2 = diag(A_k, ..., A_k) with n + 1 blocks: m = 2, l = 2n + 2.
CliffordSystem build_clifford(int n);

// max |P_i P_j + P_j P_i - 2 delta_ij I| and max asymmetry.
double clifford_residual(const CliffordSystem& system);

// ||x||^4 - 2 sum <P_i x, x>^2. Throws std::invalid_argument on size mismatch.
double fkm_eval(const CliffordSystem& system, const Eigen::VectorXd& x);
Eigen::VectorXd fkm_grad(const CliffordSystem& system, const Eigen::VectorXd& x);

// The same polynomial in real block coordinates: each 4-block of x is
// (x_2j, x_2j+1, y_2j, y_2j+1) and F = ||x||^4 - 2((|X|^2 - |Y|^2)^2
// + 4<X,Y>^2 + 4<iX,Y>^2).
double fkm2_eval(const Eigen::VectorXd& x);

// Right multiplication by the unit quaternion p on every 4-block (H^{n+1}
// identified with R^{4n+4}), as cos/sin combinations of P_1P_2, P_1P_0, P_2P_0.
Eigen::MatrixXd sp1_right_matrix(const CliffordSystem& system, const Quaternion& p);

// Complex structure of R^{4n+4}: z_j = x_4j + i x_4j+1, w_j = x_4j+2 + i x_4j+3.
// Applies the unitary U of C^{n+1} to z and w simultaneously.
Eigen::VectorXd apply_unitary(const Eigen::MatrixXcd& U, const Eigen::VectorXd& x);

// Ozeki-Takeuchi: u, v in H^{n+1}.
double ot_f0(std::span<const Quaternion> u, std::span<const Quaternion> v);
// ||(u,v)||^4 - 2 F0.
double ot_eval(std::span<const Quaternion> u, std::span<const Quaternion> v);
// Packs x in R^{8n+8} as (u, v) with 4 reals per quaternion.
double ot_eval(const Eigen::VectorXd& x);
double ot_eval_printed(const Eigen::VectorXd& x, int n);  // n^4 - 2 F0
Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& F, const Eigen::VectorXd& x,
                                 double h = 1e-5);

struct CmReport {
  int degree = 0;
  int samples = 0;
  double max_grad_residual = 0.0;  // max | |grad F|^2 - k^2 |x|^(2k-2) | / |x|^(2k-2)
  double c_estimate = 0.0;         // mean of Delta F / (k^2/2 |x|^(k-2))
  double c_spread = 0.0;           // max deviation of the per-sample estimate from the mean
  long c_nearest = 0;
  double c_deviation = 0.0;
};

// Checks |grad F|^2 = k^2 |x|^(2k-2) and estimates c in Delta F = c k^2/2 |x|^(k-2)
// (finite-difference Laplacian, step 1e-3) at `samples` random points.
// `grad` defaults to central differences with step 1e-5.
CmReport verify_cm(const std::function<double(const Eigen::VectorXd&)>& F, int dimension, int degree, int samples,
                   std::uint64_t seed,
                   const std::optional<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>>& grad = std::nullopt);

struct PolyReport {
  std::string which;  // "fkm" or "ot"
  int n = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  CmReport cm;
  long c_expected = 0;  // m2 - m1
  std::map<std::string, double> invariance_residuals;
  double clifford_residual = 0.0;   // fkm only
  double forms_agreement = 0.0;     // fkm only: max rel gap between the two forms
  double grad_fd_agreement = 0.0;   // fkm only: analytic vs central-difference gradient
  std::string normalization;        // ot only: which constant passed
  double printed_grad_residual = 0.0;  // ot only: residual of n^4 - 2 F0
  bool passed = false;
};

PolyReport verify_fkm(int n, int samples, std::uint64_t seed);
PolyReport verify_ot(int n, int samples, std::uint64_t seed);

}  // namespace isobif
