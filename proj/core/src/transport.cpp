#include "dscert/transport.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dscert {

double CouplingPlan::total_mass() const {
  double t = 0.0;
  for (const CouplingEntry& e : entries) t += e.mass;
  return t;
}

namespace transport_detail {

namespace {

constexpr double kEnterTol = 1e-9;     // reduced costs are exact for integer costs
constexpr double kDegenerate = 1e-15;  // pivot with no mass movement

// Spanning-tree transportation simplex with preallocated scratch. Sinks are
// nodes m..m+n-1. Pricing keeps a queue of negative-reduced-cost candidates
// refreshed by block scans, and falls back to Bland's rule (first negative
// cell in index order) after a degenerate stall, which rules out cycling.
struct TransportSimplex {
  int m, n;
  const std::vector<double>& cost;
  std::vector<int> row, col;
  std::vector<double> flow;
  std::vector<std::vector<int>> adj;
  std::vector<double> pot;
  std::vector<int> order, stack, parent_arc, parent_node, path;
  std::vector<std::pair<int, int>> candidates;
  int scan_row = 0;
  std::uint64_t pivots = 0;

  TransportSimplex(const std::vector<double>& supply, const std::vector<double>& demand,
                   const std::vector<double>& cost_row_major)
      : m(static_cast<int>(supply.size())),
        n(static_cast<int>(demand.size())),
        cost(cost_row_major) {
    adj.resize(m + n);
    pot.resize(m + n);
    parent_arc.assign(m + n, -1);
    parent_node.assign(m + n, -1);
    row.reserve(m + n);
    col.reserve(m + n);
    flow.reserve(m + n);

    // Northwest-corner start: exactly m+n-1 basic arcs forming a tree.
    int i = 0, j = 0;
    double a = supply[0], d = demand[0];
    for (;;) {
      const double f = std::min(a, d);
      add_arc(i, j, f);
      a -= f;
      d -= f;
      if (i == m - 1 && j == n - 1) break;
      if (a <= d && i < m - 1) {
        a = supply[++i];
      } else {
        d = demand[++j];
      }
    }
  }

  void add_arc(int i, int j, double f) {
    const int arc = static_cast<int>(row.size());
    row.push_back(i);
    col.push_back(j);
    flow.push_back(f);
    adj[i].push_back(arc);
    adj[m + j].push_back(arc);
  }

  int other(int arc, int node) const {
    const int src = row[arc];
    const int snk = m + col[arc];
    return node == src ? snk : src;
  }

  void compute_potentials() {
    order.clear();
    order.push_back(0);
    parent_arc.assign(m + n, -1);
    parent_node.assign(m + n, -1);
    parent_node[0] = 0;
    pot[0] = 0.0;
    for (std::size_t head = 0; head < order.size(); ++head) {
      const int node = order[head];
      for (int arc : adj[node]) {
        const int next = other(arc, node);
        if (parent_node[next] >= 0) continue;
        parent_node[next] = node;
        parent_arc[next] = arc;
        // u_i + v_j = c_ij on basic cells (v stored at m + j).
        pot[next] = cost[static_cast<std::size_t>(row[arc]) * n + col[arc]] - pot[node];
        order.push_back(next);
      }
    }
    if (order.size() != static_cast<std::size_t>(m + n))
      throw std::runtime_error("transport: basis is not spanning");
  }

  double reduced(int i, int j) const {
    return cost[static_cast<std::size_t>(i) * n + j] - pot[i] - pot[m + j];
  }

  // Most-negative entering cell from the candidate queue, refreshed by
  // scanning blocks of rows; returns false at optimality.
  bool next_entering(int& ei, int& ej) {
    while (!candidates.empty()) {
      int best = -1;
      double best_r = -kEnterTol;
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        const double r = reduced(candidates[k].first, candidates[k].second);
        if (r < best_r) {
          best_r = r;
          best = static_cast<int>(k);
        }
      }
      if (best >= 0) {
        ei = candidates[best].first;
        ej = candidates[best].second;
        candidates[best] = candidates.back();
        candidates.pop_back();
        return true;
      }
      candidates.clear();
    }
    const int block = std::max(16, m / 4);
    for (int scanned = 0; scanned < m; ) {
      const int stop = std::min(block, m - scanned);
      for (int b = 0; b < stop; ++b) {
        const int i = scan_row;
        scan_row = (scan_row + 1 == m) ? 0 : scan_row + 1;
        const double ui = pot[i];
        const std::size_t base = static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j)
          if (cost[base + j] - ui - pot[m + j] < -kEnterTol) candidates.emplace_back(i, j);
      }
      scanned += stop;
      if (!candidates.empty()) return next_entering(ei, ej);
    }
    return false;
  }

  // Bland's rule: smallest (i, j) with a negative reduced cost.
  bool bland_entering(int& ei, int& ej) {
    for (int i = 0; i < m; ++i) {
      const double ui = pot[i];
      const std::size_t base = static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) {
        if (cost[base + j] - ui - pot[m + j] < -kEnterTol) {
          ei = i;
          ej = j;
          return true;
        }
      }
    }
    return false;
  }

  // Tree path between the endpoints of the entering cell, using the parent
  // pointers of the latest potential computation (rooted at node 0).
  void build_path(int from, int to) {
    // Walk both nodes to the root, marking the first walk.
    stack.clear();  // reused as the from-side arc list
    path.clear();
    static thread_local std::vector<int> mark;
    mark.assign(m + n, 0);
    for (int node = from; node != 0; node = parent_node[node]) mark[node] = 1;
    mark[0] = 1;
    int meet = to;
    while (!mark[meet]) meet = parent_node[meet];
    for (int node = from; node != meet; node = parent_node[node]) stack.push_back(parent_arc[node]);
    // Arcs from `to` up to the meeting node, reversed.
    path.clear();
    for (int node = to; node != meet; node = parent_node[node]) path.push_back(parent_arc[node]);
    std::reverse(path.begin(), path.end());
    // Full path from -> meet -> to: stack arcs then reversed path arcs.
    stack.insert(stack.end(), path.begin(), path.end());
    path = stack;
  }

  void pivot(int ei, int ej) {
    build_path(ei, m + ej);
    double theta = std::numeric_limits<double>::infinity();
    int leave_pos = -1;
    for (std::size_t t = 0; t < path.size(); t += 2) {
      const int arc = path[t];
      const double f = flow[arc];
      if (leave_pos < 0 || f < theta ||
          (f <= theta && static_cast<long long>(row[arc]) * n + col[arc] <
                             static_cast<long long>(row[path[leave_pos]]) * n +
                                 col[path[leave_pos]])) {
        theta = f;
        leave_pos = static_cast<int>(t);
      }
    }
    if (leave_pos < 0) throw std::runtime_error("transport: no leaving arc");

    for (std::size_t t = 0; t < path.size(); ++t)
      flow[path[t]] += (t % 2 == 0) ? -theta : +theta;

    const int leaving = path[leave_pos];
    auto detach = [&](int node, int arc) {
      auto& lst = adj[node];
      lst.erase(std::find(lst.begin(), lst.end(), arc));
    };
    detach(row[leaving], leaving);
    detach(m + col[leaving], leaving);
    row[leaving] = ei;
    col[leaving] = ej;
    flow[leaving] = theta;
    adj[ei].push_back(leaving);
    adj[m + ej].push_back(leaving);
    last_theta = theta;
  }

  double last_theta = 0.0;
};

}  // namespace

DenseSolution solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                              const std::vector<double>& cost) {
  const int m = static_cast<int>(supply.size());
  const int n = static_cast<int>(demand.size());
  if (m == 0 || n == 0) throw std::invalid_argument("transport: empty marginals");
  if (cost.size() != static_cast<std::size_t>(m) * n)
    throw std::invalid_argument("transport: cost matrix shape mismatch");
  if (static_cast<std::size_t>(m) * n > (std::size_t{1} << 24))
    throw std::invalid_argument("transport: support too large");
  double total_s = 0.0, total_d = 0.0;
  for (double x : supply) {
    if (!(x > 0.0)) throw std::invalid_argument("transport: supplies must be positive");
    total_s += x;
  }
  for (double x : demand) {
    if (!(x > 0.0)) throw std::invalid_argument("transport: demands must be positive");
    total_d += x;
  }
  if (std::abs(total_s - total_d) > 1e-9)
    throw std::invalid_argument("transport: marginals are not balanced");

  TransportSimplex simplex(supply, demand, cost);

  const std::uint64_t stall_limit = 4ull * (m + n) + 64;
  std::uint64_t stalled = 0;
  bool bland = false;
  const std::uint64_t pivot_cap = 1'000'000ull + 100ull * (static_cast<std::uint64_t>(m) + n);

  for (;;) {
    simplex.compute_potentials();
    int ei, ej;
    const bool found = bland ? simplex.bland_entering(ei, ej) : simplex.next_entering(ei, ej);
    if (!found) break;  // all reduced costs nonnegative: optimal basis
    if (++simplex.pivots > pivot_cap) throw std::runtime_error("transport: pivot limit exceeded");
    simplex.pivot(ei, ej);
    if (simplex.last_theta <= kDegenerate) {
      if (++stalled > stall_limit) {
        bland = true;
        simplex.candidates.clear();
      }
    } else {
      stalled = 0;
    }
  }

  DenseSolution out;
  out.pivots = simplex.pivots;
  for (std::size_t a = 0; a < simplex.row.size(); ++a) {
    double f = simplex.flow[a];
    if (f < 0.0) {
      if (f < -1e-12) throw std::runtime_error("transport: negative basic flow");
      f = 0.0;
    }
    out.cost += f * cost[static_cast<std::size_t>(simplex.row[a]) * n + simplex.col[a]];
    if (f > 0.0) out.flows.push_back({simplex.row[a], simplex.col[a], f});
  }
  return out;
}

}  // namespace transport_detail

namespace {

int table_volume(const DistributionTable& t) {
  const std::size_t size = t.probabilities.size();
  if (size == 0 || (size & (size - 1)) != 0)
    throw std::invalid_argument("transport: table size must be a power of two");
  return std::countr_zero(size);
}

}  // namespace

TransportSolution kantorovich_exact(const DistributionTable& mu, const DistributionTable& nu,
                                    const MetricSpec& metric) {
  const int vol = table_volume(mu);
  if (nu.probabilities.size() != mu.probabilities.size())
    throw std::invalid_argument("kantorovich_exact: tables over different spaces");
  if (metric.size() != vol)
    throw std::invalid_argument("kantorovich_exact: metric size mismatch");
  for (double w : metric.site_weights)
    if (!(w > 0.0)) throw std::invalid_argument("kantorovich_exact: weights must be positive");

  // The metric cost makes the distance a function of mu - nu alone
  // (Kantorovich-Rubinstein duality), so common mass rides the zero-cost
  // diagonal and only the signed residual goes through the simplex.
  TransportSolution out;
  std::vector<std::uint32_t> sup_mu, sup_nu;
  std::vector<double> mass_mu, mass_nu;
  for (std::uint32_t s = 0; s < mu.probabilities.size(); ++s) {
    const double p = mu.probabilities[s];
    const double q = nu.probabilities[s];
    if (p < 0.0 || q < 0.0) throw std::invalid_argument("kantorovich_exact: negative mass");
    const double common = std::min(p, q);
    if (common > 0.0) out.plan.entries.push_back({s, s, common});
    if (p > q) {
      sup_mu.push_back(s);
      mass_mu.push_back(p - q);
    } else if (q > p) {
      sup_nu.push_back(s);
      mass_nu.push_back(q - p);
    }
  }
  if (sup_mu.size() > 4096 || sup_nu.size() > 4096)
    throw std::invalid_argument("kantorovich_exact: support exceeds 2^12 atoms");
  if (sup_mu.empty() != sup_nu.empty())
    throw std::runtime_error("kantorovich_exact: residual masses are unbalanced");

  if (!sup_mu.empty()) {
    const std::size_t m = sup_mu.size(), n = sup_nu.size();
    std::vector<double> cost(m * n);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        std::uint32_t x = sup_mu[a] ^ sup_nu[b];
        double c = 0.0;
        while (x) {
          c += metric.site_weights[std::countr_zero(x)];
          x &= x - 1;
        }
        cost[a * n + b] = c;
      }
    }

    transport_detail::DenseSolution sol =
        transport_detail::solve_transport(mass_mu, mass_nu, cost);
    out.distance = sol.cost;
    out.pivots = sol.pivots;
    for (const auto& f : sol.flows)
      out.plan.entries.push_back({sup_mu[f.from], sup_nu[f.to], f.mass});
  }

  std::vector<double> row_sum(mu.probabilities.size(), 0.0), col_sum(nu.probabilities.size(), 0.0);
  for (const CouplingEntry& e : out.plan.entries) {
    row_sum[e.from] += e.mass;
    col_sum[e.to] += e.mass;
  }
  for (std::uint32_t s = 0; s < mu.probabilities.size(); ++s) {
    if (std::abs(row_sum[s] - mu.probabilities[s]) > 1e-10)
      throw std::runtime_error("kantorovich_exact: plan row marginal mismatch");
    if (std::abs(col_sum[s] - nu.probabilities[s]) > 1e-10)
      throw std::runtime_error("kantorovich_exact: plan column marginal mismatch");
  }
  return out;
}

double kantorovich_monotone(std::span<const double> magnetization_gap) {
  double total = 0.0;
  for (double g : magnetization_gap) {
    if (g < -1e-9)
      throw std::invalid_argument(
          "kantorovich_monotone: significantly negative gap; pair is not "
          "stochastically ordered, fall back to kantorovich_exact");
    if (g > 0.0) total += g;
  }
  return total;
}

double variational_distance(const DistributionTable& mu, const DistributionTable& nu) {
  if (nu.probabilities.size() != mu.probabilities.size())
    throw std::invalid_argument("variational_distance: tables over different spaces");
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.probabilities.size(); ++i)
    sum += std::abs(mu.probabilities[i] - nu.probabilities[i]);
  return 0.5 * sum;
}

}  // namespace dscert
