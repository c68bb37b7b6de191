#include "pdstat/measure_ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace pdstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename Mass>
bool positive(Mass m) {
  if constexpr (std::is_floating_point_v<Mass>) {
    return m > 1e-15;
  } else {
    return m > 0;
  }
}

// Successive shortest paths with Dijkstra on reduced costs over the dense
// residual network S -> sources -> sinks -> T. Forward edges are
// uncapacitated; backward sink->source edges carry the current flow.
template <typename Mass>
TransportPlan transport(std::span<const Mass> supply, std::span<const Mass> demand, const CostMatrix& cost,
                        double scale) {
  const std::size_t n = supply.size();
  const std::size_t m = demand.size();
  if (cost.rows() != n || cost.cols() != m) throw std::invalid_argument("transport cost matrix has the wrong shape");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!std::isfinite(cost(i, j)) || cost(i, j) < 0.0) {
        throw std::invalid_argument("transport costs must be finite and nonnegative");
      }
    }
  }

  std::vector<Mass> supply_left(supply.begin(), supply.end());
  std::vector<Mass> demand_left(demand.begin(), demand.end());
  std::vector<Mass> flow(n * m, Mass{0});

  // Node layout: sources [0, n), sinks [n, n + m), T = n + m. The source
  // node S is implicit: every source with remaining supply starts at 0.
  const std::size_t v_count = n + m + 1;
  const std::size_t sink_node = n + m;
  std::vector<double> pot(v_count, 0.0), dist(v_count);
  std::vector<std::size_t> parent(v_count);
  std::vector<char> done(v_count);
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  for (;;) {
    bool any_supply = false;
    for (std::size_t i = 0; i < n; ++i) any_supply = any_supply || positive(supply_left[i]);
    if (!any_supply) break;

    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), kNone);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      // Reduced cost of S -> i; pot[S] stays 0 and pot[i] <= 0 while i has supply.
      if (positive(supply_left[i])) dist[i] = -pot[i];
    }
    for (;;) {
      std::size_t u = kNone;
      for (std::size_t v = 0; v < v_count; ++v) {
        if (!done[v] && dist[v] < kInf && (u == kNone || dist[v] < dist[u])) u = v;
      }
      if (u == kNone) break;
      done[u] = 1;
      if (u < n) {
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t v = n + j;
          const double nd = dist[u] + cost(u, j) + pot[u] - pot[v];
          if (!done[v] && nd < dist[v]) {
            dist[v] = nd;
            parent[v] = u;
          }
        }
      } else if (u < sink_node) {
        const std::size_t j = u - n;
        for (std::size_t i = 0; i < n; ++i) {
          if (!positive(flow[i * m + j])) continue;
          const double nd = dist[u] - cost(i, j) + pot[u] - pot[i];
          if (!done[i] && nd < dist[i]) {
            dist[i] = nd;
            parent[i] = u;
          }
        }
        if (positive(demand_left[j])) {
          const double nd = dist[u] + pot[u] - pot[sink_node];
          if (!done[sink_node] && nd < dist[sink_node]) {
            dist[sink_node] = nd;
            parent[sink_node] = u;
          }
        }
      }
    }
    if (dist[sink_node] == kInf) throw std::invalid_argument("transport supplies and demands do not balance");

    double reach = 0.0;
    for (std::size_t v = 0; v < v_count; ++v) {
      if (dist[v] < kInf) reach = std::max(reach, dist[v]);
    }
    for (std::size_t v = 0; v < v_count; ++v) pot[v] += dist[v] < kInf ? dist[v] : reach;

    // Walk back from T to find the bottleneck amount.
    const std::size_t last_sink = parent[sink_node];
    Mass amount = demand_left[last_sink - n];
    std::size_t v = last_sink;
    for (;;) {
      const std::size_t i = parent[v];
      std::size_t prev = parent[i];
      if (prev == kNone) {
        amount = std::min(amount, supply_left[i]);
        break;
      }
      amount = std::min(amount, flow[i * m + (prev - n)]);
      v = prev;
    }

    demand_left[last_sink - n] -= amount;
    v = last_sink;
    for (;;) {
      const std::size_t i = parent[v];
      flow[i * m + (v - n)] += amount;
      const std::size_t prev = parent[i];
      if (prev == kNone) {
        supply_left[i] -= amount;
        break;
      }
      flow[i * m + (prev - n)] -= amount;
      v = prev;
    }
  }

  TransportPlan plan;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!positive(flow[i * m + j])) continue;
      const double mass = static_cast<double>(flow[i * m + j]) / scale;
      plan.flows.push_back({i, j, mass});
      plan.cost += mass * cost(i, j);
    }
  }
  return plan;
}

void check_weights(const DiagramMeasure& mu, const char* name) {
  const double total = mu.total_weight();
  if (mu.atoms.empty() || std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(name) + " weights sum to " + std::to_string(total) + ", expected 1");
  }
  for (const auto& a : mu.atoms) {
    if (!(a.weight >= 0.0)) throw std::invalid_argument(std::string(name) + " has a negative weight");
  }
}

// Integer masses over a common denominator, when both measures are
// Monte-Carlo counts.
bool integral_masses(const DiagramMeasure& mu, long long denominator, std::vector<long long>& out) {
  out.clear();
  long long total = 0;
  for (const auto& a : mu.atoms) {
    const double scaled = a.weight * static_cast<double>(denominator);
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-6) return false;
    out.push_back(static_cast<long long>(rounded));
    total += out.back();
  }
  return total == denominator;
}

}  // namespace

TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              const CostMatrix& cost) {
  return transport<double>(supply, demand, cost, 1.0);
}

TransportPlan solve_transport_integral(std::span<const long long> supply, std::span<const long long> demand,
                                       const CostMatrix& cost, double scale) {
  return transport<long long>(supply, demand, cost, scale);
}

namespace {

std::vector<double> ordering_key(const DiagramMeasure& mu) {
  std::vector<double> key{static_cast<double>(mu.draws), static_cast<double>(mu.atoms.size())};
  for (const auto& atom : mu.atoms) {
    key.push_back(atom.weight);
    key.push_back(static_cast<double>(atom.diagram.size()));
    for (const auto& p : atom.diagram.sorted_points()) {
      key.push_back(p.birth);
      key.push_back(p.death);
    }
  }
  return key;
}

}  // namespace

MeasureDistance measure_wasserstein(const DiagramMeasure& mu, const DiagramMeasure& nu, const MetricParams& params) {
  check_weights(mu, "source measure");
  check_weights(nu, "target measure");
  // Solve every pair in one orientation so the distance is exactly symmetric.
  if (ordering_key(nu) < ordering_key(mu)) {
    auto flipped = measure_wasserstein(nu, mu, params);
    for (auto& f : flipped.plan.flows) std::swap(f.source, f.target);
    return flipped;
  }

  CostMatrix ground(mu.atoms.size(), nu.atoms.size());
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    for (std::size_t j = 0; j < nu.atoms.size(); ++j) {
      const double d = wasserstein(mu.atoms[i].diagram, nu.atoms[j].diagram, params).distance;
      ground(i, j) = d * d;
    }
  }

  MeasureDistance result;
  bool solved = false;
  if (mu.draws > 0 && nu.draws > 0) {
    const auto l = std::lcm(static_cast<long long>(mu.draws), static_cast<long long>(nu.draws));
    std::vector<long long> a, b;
    if (l <= (1LL << 40) && integral_masses(mu, l, a) && integral_masses(nu, l, b)) {
      result.plan = solve_transport_integral(a, b, ground, static_cast<double>(l));
      solved = true;
    }
  }
  if (!solved) {
    std::vector<double> a, b;
    for (const auto& atom : mu.atoms) a.push_back(atom.weight);
    for (const auto& atom : nu.atoms) b.push_back(atom.weight);
    // Absorb rounding in the totals so the flow network balances.
    const double scale_b = std::accumulate(a.begin(), a.end(), 0.0) / std::accumulate(b.begin(), b.end(), 0.0);
    for (auto& w : b) w *= scale_b;
    result.plan = solve_transport(a, b, ground);
  }
  result.distance = std::sqrt(std::max(0.0, result.plan.cost));
  return result;
}

double product_metric(const DiagramSet& x, const DiagramSet& y, const MetricParams& params) {
  if (x.size() != y.size()) throw std::invalid_argument("product metric needs diagram sets of equal size");
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = wasserstein(x[i], y[i], params).distance;
    total += d * d;
  }
  return std::sqrt(total);
}

double holder_constant_c(std::size_t n, double diameter, double alpha) {
  const double nn = static_cast<double>(n);
  const double d2 = diameter * diameter;
  return std::sqrt(2.0 * (1.0 / (nn * nn) + d2 / (alpha * alpha)) + 4.0 * d2 / alpha + 1.0);
}

HolderConstants holder_constants(std::size_t n, const BoxBound& bound, double alpha) {
  if (n == 0 || !(alpha > 0.0)) throw std::invalid_argument("holder constants need N >= 1 and alpha > 0");
  HolderConstants out;
  out.diameter = diameter_bound(BoxBound{bound.max_coord, n * bound.max_points});
  out.c = holder_constant_c(n, out.diameter, alpha);
  out.c_prime = std::max(out.c * std::sqrt(static_cast<double>(n * bound.max_points + 1)), out.diameter);
  return out;
}

ContinuityBound continuity_bound(const DiagramSet& x, const DiagramSet& y, const BoxBound& bound, double alpha) {
  if (x.size() != y.size()) throw std::invalid_argument("continuity bound needs diagram sets of equal size");
  ContinuityBound out;
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto w = wasserstein(x[i], y[i]);
    d2 += w.distance * w.distance;
    for (const auto& pair : w.matching.pairs) {
      if (pair.left && pair.right) out.offdiagonal_motion += distance(x[i][*pair.left], y[i][*pair.right]);
    }
  }
  out.product_distance = std::sqrt(d2);
  out.value = holder_constants(x.size(), bound, alpha).c * std::sqrt(out.offdiagonal_motion + d2);
  return out;
}

double monte_carlo_error(const DiagramMeasure& mu) {
  if (mu.draws == 0) return 0.0;
  double diameter = 0.0;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < mu.atoms.size(); ++j) {
      diameter = std::max(diameter, wasserstein(mu.atoms[i].diagram, mu.atoms[j].diagram).distance);
    }
  }
  const double t = static_cast<double>(mu.draws);
  double expected_tv = 0.0;
  for (const auto& a : mu.atoms) expected_tv += std::sqrt(a.weight * (1.0 - a.weight) / t);
  return diameter * std::sqrt(0.5 * expected_tv);
}

}  // namespace pdstat
