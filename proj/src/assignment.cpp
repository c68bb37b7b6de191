#include "pdstat/assignment.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pdstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double raise(double value, double p) {
  if (p == 1.0) return value;
  if (p == 2.0) return value * value;
  return std::pow(value, p);
}

void check_finite(const CostMatrix& cost) {
  for (std::size_t r = 0; r < cost.rows(); ++r) {
    for (std::size_t c = 0; c < cost.cols(); ++c) {
      if (!std::isfinite(cost(r, c))) {
        throw std::invalid_argument("assignment cost matrix contains a non-finite entry");
      }
    }
  }
}

// Kuhn-Munkres with row/column potentials (shortest augmenting paths).
// Requires rows <= cols; returns the column assigned to each row.
std::vector<std::size_t> hungarian(const CostMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

// Optimal partial matching between `rows` and `cols` (|rows| <= |cols|),
// equivalent to the augmented assignment: a row either takes a column point
// or its own diagonal slot; unmatched column points go to the diagonal.
std::vector<PointRef> reduced_partners(std::span<const PlanePoint> rows,
                                       std::span<const PlanePoint> cols, const MetricParams& params) {
  const std::size_t k = rows.size();
  const std::size_t m = cols.size();
  std::vector<PointRef> partner(k, kDiagonal);
  if (k == 0) return partner;

  std::vector<double> col_diag(m);
  for (std::size_t j = 0; j < m; ++j) col_diag[j] = raise(diagonal_ground_distance(cols[j], params.q), params.p);

  CostMatrix cost(k, m + k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      cost(i, j) = raise(ground_distance(rows[i], cols[j], params.q), params.p) - col_diag[j];
    }
    const double to_diag = raise(diagonal_ground_distance(rows[i], params.q), params.p);
    for (std::size_t s = 0; s < k; ++s) cost(i, m + s) = to_diag;
  }
  const auto row_to_col = hungarian(cost);
  for (std::size_t i = 0; i < k; ++i) {
    if (row_to_col[i] < m) partner[i] = row_to_col[i];
  }
  return partner;
}

// Maximum bipartite matching by augmenting paths (Kuhn).
class BipartiteMatcher {
 public:
  explicit BipartiteMatcher(std::size_t left, std::size_t right) : adj_(left), match_right_(right) {}

  void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

  std::size_t max_matching() {
    std::fill(match_right_.begin(), match_right_.end(), kNone);
    std::size_t size = 0;
    for (std::size_t l = 0; l < adj_.size(); ++l) {
      visited_.assign(match_right_.size(), 0);
      if (augment(l)) ++size;
    }
    return size;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  bool augment(std::size_t l) {
    for (const std::size_t r : adj_[l]) {
      if (visited_[r]) continue;
      visited_[r] = 1;
      if (match_right_[r] == kNone || augment(match_right_[r])) {
        match_right_[r] = l;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_right_;
  std::vector<char> visited_;
};

}  // namespace

void MetricParams::validate() const {
  if (std::isnan(p) || p < 1.0) throw std::invalid_argument("Wasserstein exponent p must be >= 1");
  if (std::isnan(q) || q < 1.0) throw std::invalid_argument("ground norm exponent q must be >= 1");
}

double ground_distance(PlanePoint a, PlanePoint b, double q) {
  const double db = std::abs(a.birth - b.birth);
  const double dd = std::abs(a.death - b.death);
  if (std::isinf(q)) return std::max(db, dd);
  if (q == 2.0) return std::hypot(db, dd);
  if (q == 1.0) return db + dd;
  return std::pow(std::pow(db, q) + std::pow(dd, q), 1.0 / q);
}

double diagonal_ground_distance(PlanePoint a, double q) {
  // The nearest diagonal point under any L_q is the midpoint projection.
  const double gap = a.death - a.birth;
  if (std::isinf(q)) return gap / 2.0;
  return gap * std::pow(2.0, 1.0 / q - 1.0);
}

CostMatrix build_cost_matrix(const Diagram& x, const Diagram& y, const MetricParams& params) {
  params.validate();
  const std::size_t k = x.size();
  const std::size_t m = y.size();
  CostMatrix cost(k + m, k + m, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < m; ++j) cost(i, j) = raise(ground_distance(x[i], y[j], params.q), params.p);
    const double to_diag = raise(diagonal_ground_distance(x[i], params.q), params.p);
    for (std::size_t s = 0; s < k; ++s) cost(i, m + s) = to_diag;
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double to_diag = raise(diagonal_ground_distance(y[j], params.q), params.p);
    for (std::size_t s = 0; s < m; ++s) cost(k + s, j) = to_diag;
  }
  return cost;
}

Assignment solve_assignment(const CostMatrix& cost) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("assignment cost matrix must be square");
  return solve_rectangular_assignment(cost);
}

Assignment solve_rectangular_assignment(const CostMatrix& cost) {
  if (cost.rows() > cost.cols()) {
    throw std::invalid_argument("assignment needs at least as many columns as rows");
  }
  check_finite(cost);
  Assignment result;
  result.row_to_col = hungarian(cost);
  for (std::size_t r = 0; r < cost.rows(); ++r) result.total_cost += cost(r, result.row_to_col[r]);
  return result;
}

PointRef Matching::partner_of_left(std::size_t i) const {
  for (const auto& pair : pairs) {
    if (pair.left == i) return pair.right;
  }
  return kDiagonal;
}

PointRef Matching::partner_of_right(std::size_t j) const {
  for (const auto& pair : pairs) {
    if (pair.right == j) return pair.left;
  }
  return kDiagonal;
}

WassersteinResult wasserstein(const Diagram& x, const Diagram& y, const MetricParams& params) {
  params.validate();
  if (std::isinf(params.p)) {
    throw std::invalid_argument("wasserstein needs finite p; use bottleneck for p = inf");
  }

  // Orient the problem the same way for (x, y) and (y, x) so the distance is
  // exactly symmetric: fewer points on the rows, ties by sorted points.
  const bool x_rows = x.size() != y.size() ? x.size() < y.size() : !(y.sorted_points() < x.sorted_points());
  const auto partners = x_rows ? reduced_partners(x.points(), y.points(), params)
                               : reduced_partners(y.points(), x.points(), params);
  const std::size_t n_other = x_rows ? y.size() : x.size();
  std::vector<char> other_used(n_other, 0);

  WassersteinResult result;
  auto& pairs = result.matching.pairs;
  for (std::size_t i = 0; i < partners.size(); ++i) {
    if (partners[i]) other_used[*partners[i]] = 1;
    pairs.push_back(x_rows ? MatchedPair{i, partners[i]} : MatchedPair{partners[i], i});
  }
  for (std::size_t j = 0; j < n_other; ++j) {
    if (!other_used[j]) pairs.push_back(x_rows ? MatchedPair{kDiagonal, j} : MatchedPair{j, kDiagonal});
  }
  std::sort(pairs.begin(), pairs.end(), [](const MatchedPair& a, const MatchedPair& b) {
    // Left points in index order first, then right-only pairs.
    if (a.left.has_value() != b.left.has_value()) return a.left.has_value();
    if (a.left && b.left) return *a.left < *b.left;
    return a.right < b.right;
  });

  std::vector<double> terms;
  terms.reserve(pairs.size());
  for (const auto& pair : pairs) {
    if (pair.left && pair.right) {
      terms.push_back(raise(ground_distance(x[*pair.left], y[*pair.right], params.q), params.p));
    } else if (pair.left) {
      terms.push_back(raise(diagonal_ground_distance(x[*pair.left], params.q), params.p));
    } else {
      terms.push_back(raise(diagonal_ground_distance(y[*pair.right], params.q), params.p));
    }
  }
  std::sort(terms.begin(), terms.end());
  const double total = std::accumulate(terms.begin(), terms.end(), 0.0);
  result.matching.cost = total;
  result.distance = std::pow(total, 1.0 / params.p);
  return result;
}

double bottleneck(const Diagram& x, const Diagram& y, double q) {
  MetricParams{1.0, q}.validate();
  const std::size_t k = x.size();
  const std::size_t m = y.size();
  if (k + m == 0) return 0.0;

  std::vector<double> dx(k), dy(m);
  std::vector<double> candidates{0.0};
  for (std::size_t i = 0; i < k; ++i) candidates.push_back(dx[i] = diagonal_ground_distance(x[i], q));
  for (std::size_t j = 0; j < m; ++j) candidates.push_back(dy[j] = diagonal_ground_distance(y[j], q));
  CostMatrix pair_cost(k, m);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < m; ++j) candidates.push_back(pair_cost(i, j) = ground_distance(x[i], y[j], q));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Left: x points then m diagonal copies. Right: y points then k copies.
  const auto feasible = [&](double t) {
    BipartiteMatcher matcher(k + m, m + k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (pair_cost(i, j) <= t) matcher.add_edge(i, j);
      }
      if (dx[i] <= t) {
        for (std::size_t s = 0; s < k; ++s) matcher.add_edge(i, m + s);
      }
    }
    for (std::size_t s = 0; s < m; ++s) {
      for (std::size_t j = 0; j < m; ++j) {
        if (dy[j] <= t) matcher.add_edge(k + s, j);
      }
      for (std::size_t r = 0; r < k; ++r) matcher.add_edge(k + s, m + r);
    }
    return matcher.max_matching() == k + m;
  };

  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;  // all-to-diagonal is always feasible here
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

}  // namespace pdstat
