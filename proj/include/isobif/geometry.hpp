#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace isobif {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Sphere-level isoparametric family of degree g on S^N. The level
// hypersurfaces have g principal curvatures with alternating multiplicities
// (m_even, m_odd), and arc length between the focal sets is t* = pi/g.
class MunznerProfile {
 public:
  MunznerProfile(int degree, int sphere_dim, int m_even, int m_odd);

  int degree() const { return degree_; }
  int sphere_dim() const { return sphere_dim_; }
  int multiplicity(int k) const { return (k % 2 == 0) ? m_even_ : m_odd_; }
  std::vector<int> multiplicities() const;

  // Endpoint multiplicities: t h(t) -> m_left at 0, (t - t*) h(t) -> m_right at t*.
  int m_left() const { return m_even_; }
  int m_right() const { return multiplicity(degree_ - 1); }
  int m_side(bool right) const { return right ? m_right() : m_left(); }

  double t_star() const { return t_star_; }

  // Mean curvature sum_k m_k cot(t + k pi/g). No domain check; hot path of
  // every integration.
  double mean_curvature(double t) const;

 private:
  int degree_;
  int sphere_dim_;
  int m_even_;
  int m_odd_;
  double t_star_;
};

// Checked evaluation; throws std::domain_error outside (0, t*).
double h_eval(const MunznerProfile& profile, double t);

struct GeometryEntry {
  std::string id;
  int base_dim = 0;
  int fiber_dim = 0;  // 0 = the sphere itself, 1 = complex Hopf, 3 = quaternionic Hopf
  MunznerProfile profile{1, 3, 2, 2};
  int d_at_0 = 0;
  int d_at_tstar = 0;
  double p_f = kInfinity;
  std::string description;

  int focal_dim_min() const { return d_at_0 < d_at_tstar ? d_at_0 : d_at_tstar; }
};

// Builds an entry and checks every consistency invariant (submersion
// dimension count, endpoint multiplicities vs focal dimensions, properness).
// p_f is derived from the focal data. Throws std::invalid_argument.
GeometryEntry make_entry(std::string id, int base_dim, int fiber_dim,
                         MunznerProfile profile, int d_at_0, int d_at_tstar,
                         std::string description);

// Named constructors for the worked examples.
GeometryEntry sphere_radial(int n);
GeometryEntry s3_torus();
GeometryEntry s4_o3o2();
GeometryEntry cpn_un(int n);
GeometryEntry cpn_ukul(int k, int l);
GeometryEntry cpn_son1(int n);
GeometryEntry hpn_spn(int n);
GeometryEntry hpn_spkspl(int n, int k, int l);
GeometryEntry hpn_un1(int n);
GeometryEntry hp_ot(int n);

// Default instance of every family.
std::vector<GeometryEntry> catalog();

// Accepts "s3_torus", "cpn_un(2)", "cpn_un:2", "hpn_spkspl(3,2,2)".
// Throws std::invalid_argument on unknown names or bad parameters.
GeometryEntry find_entry(std::string_view name);

// g i (g i + N - 1): the i-th invariant eigenvalue on the sphere level.
double closed_form_mu(const GeometryEntry& entry, int i);

// True iff 1 < q < p_f and the oscillation condition
// (m_side + 1)/2 < (q + 1)/(q - 1) holds at both endpoints.
bool validate_exponent(const GeometryEntry& entry, double q);

// Critical Sobolev exponent p_n = (n + 2)/(n - 2).
inline double critical_exponent(int n) {
  return n <= 2 ? kInfinity : static_cast<double>(n + 2) / (n - 2);
}

}  // namespace isobif
