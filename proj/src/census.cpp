#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isobif/bifurcation.hpp"
#include "isobif/parallel.hpp"

namespace isobif {

namespace {

std::vector<double> log_axis(double floor, double upper, int n) {
  std::vector<double> out(n);
  const double a = std::log(floor), b = std::log(upper);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

// Miss values on the tensor grid axis x axis; index (i, j) -> i * n + j with
// alpha = exp(axis[i]), beta = exp(axis[j]).
std::vector<std::optional<MissValue>> miss_grid(const EquationParams& params, const std::vector<double>& axis,
                                                const SolverOptions& o) {
  const std::size_t n = axis.size();
  OdeOptions ode = o.ode;
  ode.record_samples = false;
  std::vector<std::optional<MissValue>> out(n * n);
  parallel_for(n * n, o.workers, [&](std::size_t idx) {
    out[idx] = miss(params, std::exp(axis[idx / n]), std::exp(axis[idx % n]), ode);
  });
  return out;
}

bool both_change_sign(const std::array<const std::optional<MissValue>*, 4>& corners) {
  bool pos[2] = {false, false}, neg[2] = {false, false};
  for (const auto* c : corners) {
    if (!c->has_value()) return false;
    for (int k = 0; k < 2; ++k) {
      pos[k] = pos[k] || (**c)[k] > 0.0;
      neg[k] = neg[k] || (**c)[k] < 0.0;
    }
  }
  return pos[0] && neg[0] && pos[1] && neg[1];
}

}  // namespace

double apriori_bound(const EquationParams& params, const OdeOptions& options) {
  OdeOptions o = options;
  o.record_samples = false;
  const double ts = params.entry.profile.t_star();
  auto side_bound = [&](Side side) {
    const double t_end = side == Side::left ? ts * (1.0 - o.delta_factor) : ts * o.delta_factor;
    for (double a = 2.0; a <= 1e12; a *= 2.0) {
      bool all_zero = true;
      for (int j = 0; j <= 7 && all_zero; ++j) {
        const IvpTrace tr = integrate(params, a * std::pow(10.0, j / 7.0), side, t_end, o);
        all_zero = tr.status == TraceStatus::hit_zero;
      }
      if (all_zero) return 2.0 * a;
    }
    throw std::runtime_error("apriori_bound: no zero below 1e12 for " + params.entry.id +
                             " (is q >= p_f?)");
  };
  return std::max(side_bound(Side::left), side_bound(Side::right));
}

Census census(const EquationParams& params, int grid_n, const SolverOptions& options) {
  if (!validate_exponent(params.entry, params.q))
    throw std::invalid_argument("census: exponent outside (1, p_f) for " + params.entry.id);
  if (!(params.lambda > 0.0)) throw std::invalid_argument("census: lambda must be positive");
  if (grid_n < 8) throw std::invalid_argument("census: grid_n >= 8");

  Census c;
  c.params = params;
  c.grid_n = grid_n;
  c.bound_A = apriori_bound(params, options.ode);
  c.mu_1 = find_eigenvalues(params.entry, 1, options.ode)[0].mu_numeric;
  c.trivial_only_certificate =
      params.q * params.lambda * std::pow(c.bound_A, params.q - 1.0) <= params.lambda + c.mu_1;

  const auto axis = log_axis(options.floor, c.bound_A, grid_n);
  const auto grid = miss_grid(params, axis, options);
  const int n = grid_n;
  std::vector<std::array<double, 2>> seeds;
  for (int idx = 0; idx < n * n; ++idx)
    if (grid[idx]) seeds.push_back({axis[idx / n], axis[idx % n]});
  // Roots can hug the edge of the region where miss is defined, out of reach
  // of every node; also seed from that edge, located by bisection.
  // Diagonals reach roots sitting in a corner of that region.
  std::vector<std::array<int, 2>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& [di, dj] : {std::pair{1, 0}, {0, 1}, {1, 1}, {1, -1}}) {
        const int a = i + di, b = j + dj;
        if (a >= n || b < 0 || b >= n) continue;
        if (grid[i * n + j].has_value() != grid[a * n + b].has_value()) edges.push_back({i * n + j, a * n + b});
      }
  std::vector<std::array<double, 2>> edge_seeds(edges.size());
  OdeOptions quiet = options.ode;
  quiet.record_samples = false;
  parallel_for(edges.size(), options.workers, [&](std::size_t e) {
    auto [a, b] = edges[e];
    if (!grid[a]) std::swap(a, b);
    std::array<double, 2> in{axis[a / n], axis[a % n]}, out{axis[b / n], axis[b % n]};
    const std::array<double, 2> node = in;
    for (int it = 0; it < 30; ++it) {
      const std::array<double, 2> mid{0.5 * (in[0] + out[0]), 0.5 * (in[1] + out[1])};
      (miss(params, std::exp(mid[0]), std::exp(mid[1]), quiet) ? in : out) = mid;
    }
    // Step back inside so the finite-difference Jacobian stays defined.
    edge_seeds[e] = {in[0] + 1e-2 * (node[0] - out[0]), in[1] + 1e-2 * (node[1] - out[1])};
  });
  seeds.insert(seeds.end(), edge_seeds.begin(), edge_seeds.end());

  std::vector<std::optional<BranchPoint>> roots(seeds.size());
  SolverOptions inner = options;
  inner.workers = 1;
  parallel_for(seeds.size(), options.workers, [&](std::size_t s) {
    roots[s] = solve_point(params, std::exp(seeds[s][0]), std::exp(seeds[s][1]), inner);
  });

  std::vector<BranchPoint> found;
  for (const auto& r : roots)
    if (r && r->sup_dist > 1e-4 && std::min(r->alpha, r->beta) >= options.floor) found.push_back(*r);
  std::stable_sort(found.begin(), found.end(),
                   [](const BranchPoint& a, const BranchPoint& b) { return a.residual < b.residual; });
  for (const BranchPoint& r : found) {
    const bool duplicate = std::any_of(c.solutions.begin(), c.solutions.end(), [&](const CensusSolution& s) {
      return std::max(std::abs(s.alpha - r.alpha), std::abs(s.beta - r.beta)) <= options.dedup_eps;
    });
    if (duplicate) continue;
    CensusSolution s;
    s.alpha = r.alpha;
    s.beta = r.beta;
    s.residual = r.residual;
    s.zero_count = r.zero_count;
    s.sup_dist = r.sup_dist;
    s.sup_phi = 0.0;
    if (const auto tr = glue(params, r.alpha, r.beta, options.ode))
      for (const TracePoint& p : *tr) s.sup_phi = std::max(s.sup_phi, p.phi);
    c.solutions.push_back(s);
  }
  std::sort(c.solutions.begin(), c.solutions.end(), [](const CensusSolution& a, const CensusSolution& b) {
    return a.alpha != b.alpha ? a.alpha < b.alpha : a.beta < b.beta;
  });
  return c;
}

int count_oracle(const EquationParams& params, int fine_n, const SolverOptions& options) {
  if (!validate_exponent(params.entry, params.q))
    throw std::invalid_argument("count_oracle: exponent outside (1, p_f) for " + params.entry.id);
  if (fine_n < 8) throw std::invalid_argument("count_oracle: fine_n >= 8");
  const double A = apriori_bound(params, options.ode);
  const auto axis = log_axis(options.floor, A, fine_n);
  const auto grid = miss_grid(params, axis, options);
  const int n = fine_n, cells = n - 1;
  auto at = [&](int i, int j) -> const std::optional<MissValue>& { return grid[i * n + j]; };

  // A cell holds a root when both components change sign over its corners
  // and the miss vector winds around its boundary.
  auto winds = [&](int i, int j) {
    const std::array<const std::optional<MissValue>*, 4> ring{&at(i, j), &at(i, j + 1), &at(i + 1, j + 1),
                                                              &at(i + 1, j)};
    if (!both_change_sign(ring)) return false;
    double turn = 0.0;
    for (int r = 0; r < 4; ++r) {
      const MissValue& p = **ring[r];
      const MissValue& q = **ring[(r + 1) % 4];
      double d = std::atan2(q[1], q[0]) - std::atan2(p[1], p[0]);
      if (d > std::numbers::pi) d -= 2 * std::numbers::pi;
      if (d <= -std::numbers::pi) d += 2 * std::numbers::pi;
      turn += d;
    }
    return std::lround(turn / (2 * std::numbers::pi)) != 0;
  };
  std::vector<char> flagged(cells * cells, 0);
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j) flagged[i * cells + j] = winds(i, j);

  // 8-connected clusters of root cells; the one touching (1, 1) is the
  // constant solution.
  int count = 0;
  std::vector<char> seen(cells * cells, 0);
  for (int s = 0; s < cells * cells; ++s) {
    if (!flagged[s] || seen[s]) continue;
    bool trivial = false;
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const int ci = c / cells, cj = c % cells;
      if (axis[ci] <= 0.0 && 0.0 <= axis[ci + 1] && axis[cj] <= 0.0 && 0.0 <= axis[cj + 1]) trivial = true;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int a = ci + di, b = cj + dj;
          if (a < 0 || b < 0 || a >= cells || b >= cells) continue;
          const int k = a * cells + b;
          if (flagged[k] && !seen[k]) {
            seen[k] = 1;
            stack.push_back(k);
          }
        }
    }
    if (!trivial) ++count;
  }
  return count;
}

}  // namespace isobif
