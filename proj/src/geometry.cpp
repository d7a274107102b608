#include "isobif/geometry.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace isobif {

MunznerProfile::MunznerProfile(int degree, int sphere_dim, int m_even, int m_odd)
    : degree_(degree),
      sphere_dim_(sphere_dim),
      m_even_(m_even),
      m_odd_(degree == 1 ? m_even : m_odd),
      t_star_(std::numbers::pi / degree) {
  if (degree < 1) throw std::invalid_argument("MunznerProfile: degree must be >= 1");
  if (m_even_ < 1 || m_odd_ < 1)
    throw std::invalid_argument("MunznerProfile: endpoint multiplicities must be >= 1");
  if (degree % 2 == 1 && m_even_ != m_odd_)
    throw std::invalid_argument("MunznerProfile: odd degree requires equal multiplicities");
  int sum = 0;
  for (int k = 0; k < degree; ++k) sum += multiplicity(k);
  if (sum != sphere_dim - 1)
    throw std::invalid_argument("MunznerProfile: multiplicities must sum to N - 1");
}

std::vector<int> MunznerProfile::multiplicities() const {
  std::vector<int> out(degree_);
  for (int k = 0; k < degree_; ++k) out[k] = multiplicity(k);
  return out;
}

double MunznerProfile::mean_curvature(double t) const {
  // Pair terms k and k + g/2 collapse for even g: cot(s) + cot(s + pi/2) = 2 cot(2s).
  switch (degree_) {
    case 1:
      return m_even_ / std::tan(t);
    case 2:
      return m_even_ / std::tan(t) - m_odd_ * std::tan(t);
    case 4:
      return 2.0 * (m_even_ / std::tan(2.0 * t) - m_odd_ * std::tan(2.0 * t));
    default: {
      double sum = 0.0;
      for (int k = 0; k < degree_; ++k)
        sum += multiplicity(k) / std::tan(t + k * t_star_);
      return sum;
    }
  }
}

double h_eval(const MunznerProfile& profile, double t) {
  if (!(t > 0.0 && t < profile.t_star()))
    throw std::domain_error("h_eval: t must lie in (0, t*)");
  return profile.mean_curvature(t);
}

GeometryEntry make_entry(std::string id, int base_dim, int fiber_dim, MunznerProfile profile,
                         int d_at_0, int d_at_tstar, std::string description) {
  GeometryEntry e;
  e.id = std::move(id);
  e.base_dim = base_dim;
  e.fiber_dim = fiber_dim;
  e.profile = profile;
  e.d_at_0 = d_at_0;
  e.d_at_tstar = d_at_tstar;
  e.description = std::move(description);

  auto fail = [&](const char* what) {
    throw std::invalid_argument("geometry entry " + e.id + ": " + what);
  };
  if (fiber_dim != 0 && fiber_dim != 1 && fiber_dim != 3) fail("fiber dimension must be 0, 1 or 3");
  if (base_dim != profile.sphere_dim() - fiber_dim) fail("base_dim != N - fiber_dim");
  if (profile.m_left() != base_dim - d_at_0 - 1) fail("m_0 != n - d_at_0 - 1");
  if (profile.m_right() != base_dim - d_at_tstar - 1) fail("m_{g-1} != n - d_at_tstar - 1");
  if (d_at_0 < 0 || d_at_tstar < 0) fail("negative focal dimension");
  if (d_at_0 > base_dim - 2 || d_at_tstar > base_dim - 2) fail("focal variety is not proper");

  const int d = e.focal_dim_min();
  e.p_f = (d == base_dim - 2) ? kInfinity
                              : static_cast<double>(base_dim - d + 2) / (base_dim - d - 2);
  return e;
}

GeometryEntry sphere_radial(int n) {
  if (n < 3) throw std::invalid_argument("sphere_radial: n >= 3");
  return make_entry("sphere_radial(" + std::to_string(n) + ")", n, 0, MunznerProfile(1, n, n - 1, n - 1), 0,
                    0, "O(n) fixing an axis on S^n; radial functions");
}

GeometryEntry s3_torus() {
  return make_entry("s3_torus", 3, 0, MunznerProfile(2, 3, 1, 1), 1, 1,
                    "S^1 x S^1 on S^3; both singular orbits are circles");
}

GeometryEntry s4_o3o2() {
  return make_entry("s4_o3o2", 4, 0, MunznerProfile(2, 4, 1, 2), 2, 1,
                    "O(3) x O(2) on S^4; singular orbits S^2 and S^1");
}

GeometryEntry cpn_un(int n) {
  if (n < 2) throw std::invalid_argument("cpn_un: n >= 2");
  return make_entry("cpn_un(" + std::to_string(n) + ")", 2 * n, 1, MunznerProfile(2, 2 * n + 1, 2 * n - 1, 1),
                    0, 2 * n - 2, "U(n) on CP^n; singular orbits a point and CP^{n-1}");
}

GeometryEntry cpn_ukul(int k, int l) {
  if (l < 2 || k < l) throw std::invalid_argument("cpn_ukul: need k >= l >= 2");
  const int n = k + l - 1;
  return make_entry("cpn_ukul(" + std::to_string(k) + "," + std::to_string(l) + ")", 2 * n, 1,
                    MunznerProfile(2, 2 * n + 1, 2 * l - 1, 2 * k - 1), 2 * k - 2, 2 * l - 2,
                    "U(k) x U(l) on CP^n; singular orbits CP^{k-1} and CP^{l-1}");
}

GeometryEntry cpn_son1(int n) {
  if (n < 2) throw std::invalid_argument("cpn_son1: n >= 2");
  return make_entry("cpn_son1(" + std::to_string(n) + ")", 2 * n, 1, MunznerProfile(4, 2 * n + 1, n - 1, 1), n,
                    2 * n - 2, "SO(n+1) on CP^n; singular orbits RP^n and the oriented 2-plane Grassmannian");
}

GeometryEntry hpn_spn(int n) {
  if (n < 2) throw std::invalid_argument("hpn_spn: n >= 2");
  return make_entry("hpn_spn(" + std::to_string(n) + ")", 4 * n, 3, MunznerProfile(2, 4 * n + 3, 4 * n - 1, 3),
                    0, 4 * n - 4, "Sp(n) on HP^n; singular orbits a point and HP^{n-1}");
}

GeometryEntry hpn_spkspl(int n, int k, int l) {
  if (l < 2 || k < l || k + l != n + 1) throw std::invalid_argument("hpn_spkspl: need k >= l >= 2, k + l = n + 1");
  return make_entry("hpn_spkspl(" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(l) + ")",
                    4 * n, 3, MunznerProfile(2, 4 * n + 3, 4 * l - 1, 4 * k - 1), 4 * k - 4, 4 * l - 4,
                    "Sp(k) x Sp(l) on HP^n; singular orbits HP^{k-1} and HP^{l-1}");
}

GeometryEntry hpn_un1(int n) {
  if (n < 2) throw std::invalid_argument("hpn_un1: n >= 2");
  return make_entry("hpn_un1(" + std::to_string(n) + ")", 4 * n, 3, MunznerProfile(4, 4 * n + 3, 2 * n - 1, 2),
                    2 * n, 4 * n - 3, "U(n+1) on HP^n (FKM, m = 2); singular orbits CP^n and U(n+1)/(U(n-1) x SU(2))");
}

GeometryEntry hp_ot(int n) {
  if (n < 1) throw std::invalid_argument("hp_ot: n >= 1");
  return make_entry("hp_ot(" + std::to_string(n) + ")", 8 * n + 4, 3, MunznerProfile(4, 8 * n + 7, 3, 4 * n),
                    8 * n, 4 * n + 3, "Ozeki-Takeuchi on HP^{2n+1}; inhomogeneous, multiplicities (3, 4n)");
}

std::vector<GeometryEntry> catalog() {
  return {sphere_radial(3), sphere_radial(4), s3_torus(),     s4_o3o2(),           cpn_un(2),
          cpn_un(3),        cpn_ukul(2, 2),   cpn_son1(2),    cpn_son1(3),         hpn_spn(2),
          hpn_spkspl(3, 2, 2), hpn_un1(2),    hpn_un1(3),     hp_ot(1)};
}

namespace {

std::vector<int> parse_args(std::string_view text, std::string_view full) {
  std::vector<int> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view tok = text.substr(0, comma);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw std::invalid_argument("bad entry parameter in '" + std::string(full) + "'");
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

GeometryEntry find_entry(std::string_view name) {
  std::string_view base = name;
  std::vector<int> args;
  if (const auto open = name.find_first_of("(:"); open != std::string_view::npos) {
    base = name.substr(0, open);
    std::string_view rest = name.substr(open + 1);
    if (name[open] == '(') {
      if (rest.empty() || rest.back() != ')') throw std::invalid_argument("unbalanced '(' in entry name");
      rest.remove_suffix(1);
    }
    args = parse_args(rest, name);
  }
  auto want = [&](std::size_t count) {
    if (args.size() != count)
      throw std::invalid_argument("entry '" + std::string(base) + "' takes " + std::to_string(count) +
                                  " parameter(s)");
  };
  if (base == "s3_torus") { want(0); return s3_torus(); }
  if (base == "s4_o3o2") { want(0); return s4_o3o2(); }
  if (base == "sphere_radial") { want(1); return sphere_radial(args[0]); }
  if (base == "cpn_un") { want(1); return cpn_un(args[0]); }
  if (base == "cpn_ukul") { want(2); return cpn_ukul(args[0], args[1]); }
  if (base == "cpn_son1") { want(1); return cpn_son1(args[0]); }
  if (base == "hpn_spn") { want(1); return hpn_spn(args[0]); }
  if (base == "hpn_spkspl") { want(3); return hpn_spkspl(args[0], args[1], args[2]); }
  if (base == "hpn_un1") { want(1); return hpn_un1(args[0]); }
  if (base == "hp_ot") { want(1); return hp_ot(args[0]); }
  throw std::invalid_argument("unknown geometry entry '" + std::string(name) + "'");
}

double closed_form_mu(const GeometryEntry& entry, int i) {
  const double gi = static_cast<double>(entry.profile.degree()) * i;
  return gi * (gi + entry.profile.sphere_dim() - 1);
}

bool validate_exponent(const GeometryEntry& entry, double q) {
  if (!(q > 1.0) || !(q < entry.p_f)) return false;
  const double ratio = (q + 1.0) / (q - 1.0);
  // Implied by q < p_f whenever m_side = n - d_side - 1.
  for (const int m : {entry.profile.m_left(), entry.profile.m_right()})
    if (!((m + 1) / 2.0 < ratio)) return false;
  return true;
}

}  // namespace isobif
