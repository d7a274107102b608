#include "isobif/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

namespace isobif {

namespace {

Eigen::Matrix4d block(int which) {
  Eigen::Matrix4d A;
  switch (which) {
    case 0:
      A << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1;
      break;
    case 1:
      A << 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0;
      break;
    default:
      A << 0, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, 0;
      break;
  }
  return A;
}

void check_size(const CliffordSystem& s, const Eigen::VectorXd& x) {
  if (x.size() != 2 * s.l)
    throw std::invalid_argument("FKM: vector of size " + std::to_string(x.size()) + ", expected " +
                                std::to_string(2 * s.l));
}

Eigen::VectorXd random_point(int dimension, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> radius(0.5, 1.5);
  Eigen::VectorXd x(dimension);
  for (int i = 0; i < dimension; ++i) x[i] = normal(rng);
  return x * (radius(rng) / x.norm());
}

Quaternion random_unit_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Quaternion p{normal(rng), normal(rng), normal(rng), normal(rng)};
  const double r = std::sqrt(p.norm2());
  return {p.w / r, p.x / r, p.y / r, p.z / r};
}

// Composition of random complex Givens rotations and phases.
Eigen::MatrixXcd random_unitary(int size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.141592653589793);
  std::uniform_int_distribution<int> index(0, size - 1);
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(size, size);
  for (int r = 0; r < 3 * size + 2; ++r) {
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Identity(size, size);
    const int a = index(rng), b = index(rng);
    const double theta = angle(rng), phi = angle(rng), psi = angle(rng);
    if (a == b) {
      G(a, a) = std::polar(1.0, theta);
    } else {
      G(a, a) = std::polar(std::cos(theta), phi);
      G(a, b) = -std::polar(std::sin(theta), psi);
      G(b, a) = std::polar(std::sin(theta), -psi);
      G(b, b) = std::polar(std::cos(theta), -phi);
    }
    U = G * U;
  }
  return U;
}

double pow_norm(const Eigen::VectorXd& x, int power) { return std::pow(x.norm(), power); }

std::vector<Quaternion> to_quaternions(const Eigen::VectorXd& x, int offset, int count) {
  std::vector<Quaternion> out(count);
  for (int i = 0; i < count; ++i) {
    const int b = offset + 4 * i;
    out[i] = {x[b], x[b + 1], x[b + 2], x[b + 3]};
  }
  return out;
}

}  // namespace

CliffordSystem build_clifford(int n) {
  if (n < 1) throw std::invalid_argument("build_clifford: n >= 1");
  CliffordSystem s;
  s.m = 2;
  s.l = 2 * n + 2;
  const int size = 4 * n + 4;
  for (int k = 0; k < 3; ++k) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(size, size);
    const Eigen::Matrix4d A = block(k);
    for (int b = 0; b <= n; ++b) P.block<4, 4>(4 * b, 4 * b) = A;
    s.P.push_back(P);
  }
  return s;
}

double clifford_residual(const CliffordSystem& system) {
  const int size = 2 * system.l;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(size, size);
  double r = 0.0;
  for (std::size_t i = 0; i < system.P.size(); ++i) {
    r = std::max(r, (system.P[i] - system.P[i].transpose()).cwiseAbs().maxCoeff());
    for (std::size_t j = 0; j < system.P.size(); ++j) {
      const Eigen::MatrixXd E = system.P[i] * system.P[j] + system.P[j] * system.P[i] - (i == j ? 2.0 : 0.0) * I;
      r = std::max(r, E.cwiseAbs().maxCoeff());
    }
  }
  return r;
}

double fkm_eval(const CliffordSystem& system, const Eigen::VectorXd& x) {
  check_size(system, x);
  const double r2 = x.squaredNorm();
  double sum = 0.0;
  for (const auto& P : system.P) {
    const double v = x.dot(P * x);
    sum += v * v;
  }
  return r2 * r2 - 2.0 * sum;
}

Eigen::VectorXd fkm_grad(const CliffordSystem& system, const Eigen::VectorXd& x) {
  check_size(system, x);
  Eigen::VectorXd g = 4.0 * x.squaredNorm() * x;
  for (const auto& P : system.P) {
    const Eigen::VectorXd Px = P * x;
    g -= 8.0 * x.dot(Px) * Px;
  }
  return g;
}

double fkm2_eval(const Eigen::VectorXd& x) {
  if (x.size() % 4 != 0 || x.size() == 0) throw std::invalid_argument("fkm2_eval: size must be a multiple of 4");
  double xx = 0.0, yy = 0.0, xy = 0.0, xperp_y = 0.0;
  for (int b = 0; b < x.size(); b += 4) {
    const double x0 = x[b], x1 = x[b + 1], y0 = x[b + 2], y1 = x[b + 3];
    xx += x0 * x0 + x1 * x1;
    yy += y0 * y0 + y1 * y1;
    xy += x0 * y0 + x1 * y1;
    xperp_y += -x1 * y0 + x0 * y1;
  }
  const double r2 = xx + yy;
  return r2 * r2 - 2.0 * ((xx - yy) * (xx - yy) + 4.0 * xy * xy + 4.0 * xperp_y * xperp_y);
}

Eigen::MatrixXd sp1_right_matrix(const CliffordSystem& system, const Quaternion& p) {
  const auto& P = system.P;
  const int size = 2 * system.l;
  return p.w * Eigen::MatrixXd::Identity(size, size) + p.x * (P[1] * P[2]) + p.y * (P[1] * P[0]) +
         p.z * (P[2] * P[0]);
}

Eigen::VectorXd apply_unitary(const Eigen::MatrixXcd& U, const Eigen::VectorXd& x) {
  const int m = static_cast<int>(U.rows());
  if (x.size() != 4 * m) throw std::invalid_argument("apply_unitary: size mismatch");
  Eigen::VectorXcd z(m), w(m);
  for (int j = 0; j < m; ++j) {
    z[j] = {x[4 * j], x[4 * j + 1]};
    w[j] = {x[4 * j + 2], x[4 * j + 3]};
  }
  const Eigen::VectorXcd Uz = U * z, Uw = U * w;
  Eigen::VectorXd out(x.size());
  for (int j = 0; j < m; ++j) {
    out[4 * j] = Uz[j].real();
    out[4 * j + 1] = Uz[j].imag();
    out[4 * j + 2] = Uw[j].real();
    out[4 * j + 3] = Uw[j].imag();
  }
  return out;
}

double ot_f0(std::span<const Quaternion> u, std::span<const Quaternion> v) {
  if (u.size() != v.size() || u.empty()) throw std::invalid_argument("ot_f0: u and v must have equal length >= 1");
  Quaternion inner;
  for (std::size_t i = 0; i < u.size(); ++i) inner += u[i] * v[i].conj();
  double u1 = 0.0, v1 = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    u1 += u[i].norm2();
    v1 += v[i].norm2();
  }
  const Quaternion cross = u[0] * v[0].conj() + v[0] * u[0].conj();
  const double t = u1 - v1 + cross.w;
  return 4.0 * inner.imag().norm2() + t * t;
}

double ot_eval(std::span<const Quaternion> u, std::span<const Quaternion> v) {
  double r2 = 0.0;
  for (const auto& a : u) r2 += a.norm2();
  for (const auto& a : v) r2 += a.norm2();
  return r2 * r2 - 2.0 * ot_f0(u, v);
}

double ot_eval(const Eigen::VectorXd& x) {
  if (x.size() % 8 != 0 || x.size() == 0) throw std::invalid_argument("ot_eval: size must be 8(n+1)");
  const int count = static_cast<int>(x.size() / 8);
  const auto u = to_quaternions(x, 0, count), v = to_quaternions(x, 4 * count, count);
  return ot_eval(u, v);
}

double ot_eval_printed(const Eigen::VectorXd& x, int n) {
  if (x.size() != 8 * (n + 1)) throw std::invalid_argument("ot_eval_printed: size must be 8(n+1)");
  const int count = n + 1;
  const auto u = to_quaternions(x, 0, count), v = to_quaternions(x, 4 * count, count);
  return std::pow(static_cast<double>(n), 4) - 2.0 * ot_f0(u, v);
}

Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& F, const Eigen::VectorXd& x,
                                 double h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd y = x;
  for (int i = 0; i < x.size(); ++i) {
    y[i] = x[i] + h;
    const double fp = F(y);
    y[i] = x[i] - h;
    const double fm = F(y);
    y[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

CmReport verify_cm(const std::function<double(const Eigen::VectorXd&)>& F, int dimension, int degree, int samples,
                   std::uint64_t seed,
                   const std::optional<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>>& grad) {
  if (degree != 2 && degree != 4) throw std::invalid_argument("verify_cm: degree must be 2 or 4");
  if (samples < 10) throw std::invalid_argument("verify_cm: samples >= 10");
  std::mt19937_64 rng(seed);
  CmReport r;
  r.degree = degree;
  r.samples = samples;
  const double k2 = static_cast<double>(degree) * degree;
  const double h = 1e-3;
  std::vector<double> estimates;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = random_point(dimension, rng);
    const Eigen::VectorXd g = grad ? (*grad)(x) : central_gradient(F, x);
    const double scale = pow_norm(x, 2 * degree - 2);
    r.max_grad_residual = std::max(r.max_grad_residual, std::abs(g.squaredNorm() - k2 * scale) / scale);

    const double f0 = F(x);
    double lap = 0.0;
    Eigen::VectorXd y = x;
    for (int i = 0; i < dimension; ++i) {
      y[i] = x[i] + h;
      const double fp = F(y);
      y[i] = x[i] - h;
      const double fm = F(y);
      y[i] = x[i];
      lap += (fp - 2.0 * f0 + fm) / (h * h);
    }
    estimates.push_back(lap / (0.5 * k2 * pow_norm(x, degree - 2)));
  }
  double sum = 0.0;
  for (const double e : estimates) sum += e;
  r.c_estimate = sum / samples;
  for (const double e : estimates) r.c_spread = std::max(r.c_spread, std::abs(e - r.c_estimate));
  r.c_nearest = std::lround(r.c_estimate);
  r.c_deviation = std::abs(r.c_estimate - static_cast<double>(r.c_nearest));
  return r;
}

PolyReport verify_fkm(int n, int samples, std::uint64_t seed) {
  const CliffordSystem sys = build_clifford(n);
  const int dim = 2 * sys.l;
  PolyReport rep;
  rep.which = "fkm";
  rep.n = n;
  rep.samples = samples;
  rep.seed = seed;
  rep.clifford_residual = clifford_residual(sys);
  rep.c_expected = (sys.l - sys.m - 1) - sys.m;

  auto F = [&sys](const Eigen::VectorXd& x) { return fkm_eval(sys, x); };
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> G = [&sys](const Eigen::VectorXd& x) {
    return fkm_grad(sys, x);
  };
  rep.cm = verify_cm(F, dim, 4, samples, seed, G);

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  double sp1 = 0.0, un = 0.0, flow = 0.0, forms = 0.0, gfd = 0.0;
  for (int s = 0; s < std::max(samples, 1000); ++s) {
    const Eigen::VectorXd x = random_point(dim, rng);
    const double f = F(x), scale = pow_norm(x, 4);
    forms = std::max(forms, std::abs(f - fkm2_eval(x)) / scale);
    if (s >= samples) continue;
    sp1 = std::max(sp1, std::abs(F(sp1_right_matrix(sys, random_unit_quaternion(rng)) * x) - f) / scale);
    un = std::max(un, std::abs(F(apply_unitary(random_unitary(n + 1, rng), x)) - f) / scale);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const double t = angle(rng);
        const Eigen::MatrixXd R = std::cos(t) * Eigen::MatrixXd::Identity(dim, dim) + std::sin(t) * sys.P[i] * sys.P[j];
        flow = std::max(flow, std::abs(F(R * x) - f) / scale);
      }
    gfd = std::max(gfd, (G(x) - central_gradient(F, x, 1e-6)).cwiseAbs().maxCoeff() / pow_norm(x, 3));
  }
  rep.invariance_residuals = {{"sp1_right", sp1}, {"u_n_plus_1", un}, {"clifford_flow", flow}};
  rep.forms_agreement = forms;
  rep.grad_fd_agreement = gfd;
  rep.passed = rep.clifford_residual == 0.0 && rep.cm.max_grad_residual <= 1e-9 && sp1 <= 1e-9 && un <= 1e-9 &&
               flow <= 1e-9 && rep.cm.c_deviation <= 1e-3 && rep.cm.c_nearest == rep.c_expected &&
               forms <= 1e-12 && gfd <= 1e-6;
  return rep;
}

PolyReport verify_ot(int n, int samples, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("verify_ot: n >= 1");
  const int dim = 8 * (n + 1);
  PolyReport rep;
  rep.which = "ot";
  rep.n = n;
  rep.samples = samples;
  rep.seed = seed;
  rep.c_expected = 4 * n - 3;

  auto F = [](const Eigen::VectorXd& x) { return ot_eval(x); };
  auto Fp = [n](const Eigen::VectorXd& x) { return ot_eval_printed(x, n); };
  rep.cm = verify_cm(F, dim, 4, samples, seed);
  rep.printed_grad_residual = verify_cm(Fp, dim, 4, samples, seed).max_grad_residual;
  rep.normalization = rep.cm.max_grad_residual <= 1e-5 ? "homogenized ||(u,v)||^4 - 2 F0"
                      : rep.printed_grad_residual <= 1e-5 ? "printed n^4 - 2 F0"
                                                          : "neither";

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  double sp1 = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = random_point(dim, rng);
    auto u = to_quaternions(x, 0, n + 1), v = to_quaternions(x, 4 * (n + 1), n + 1);
    const Quaternion p = random_unit_quaternion(rng);
    const double f = ot_eval(u, v);
    for (auto& a : u) a = a * p;
    for (auto& a : v) a = a * p;
    sp1 = std::max(sp1, std::abs(ot_eval(u, v) - f) / pow_norm(x, 4));
  }
  rep.invariance_residuals = {{"sp1_right", sp1}};
  rep.passed = sp1 <= 1e-9 && rep.cm.max_grad_residual <= 1e-5 && rep.cm.c_deviation <= 1e-3 &&
               rep.cm.c_nearest == rep.c_expected;
  return rep;
}

}  // namespace isobif
