#include "pdstat/grouping.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace pdstat {

namespace {

// Depth-first generation of groupings: the first unassigned point (in
// diagram-major order) opens a new selection, which is then extended through
// every later diagram by one unassigned point or the diagonal. Selections are
// therefore produced in canonical order and each grouping exactly once.
class GroupingWalker {
 public:
  GroupingWalker(const DiagramSet& x, bool prune) : x_(x), prune_(prune), assigned_(x.size()) {
    for (std::size_t i = 0; i < x.size(); ++i) assigned_[i].assign(x[i].size(), 0);
  }

  void enumerate(const std::function<void(const Grouping&)>& visit) {
    visit_ = &visit;
    next_block(0.0);
  }

  GroupingOptimum minimize() {
    next_block(0.0);
    return {best_grouping_, best_cost_};
  }

 private:
  void next_block(double partial) {
    for (std::size_t i = 0; i < x_.size(); ++i) {
      for (std::size_t j = 0; j < x_[i].size(); ++j) {
        if (assigned_[i][j]) continue;
        const std::size_t idx = current_.selections.size();
        current_.selections.push_back(Selection{std::vector<PointRef>(x_.size(), kDiagonal)});
        current_.selections[idx].entries[i] = j;
        assigned_[i][j] = 1;
        extend(idx, i + 1, partial);
        assigned_[i][j] = 0;
        current_.selections.pop_back();
        return;
      }
    }
    complete(partial);
  }

  void extend(std::size_t idx, std::size_t d, double partial) {
    if (d == x_.size()) {
      const double total = partial + selection_cost(current_.selections[idx], x_);
      if (prune_ && total >= best_cost_) return;
      next_block(total);
      return;
    }
    for (std::size_t j = 0; j < x_[d].size(); ++j) {
      if (assigned_[d][j]) continue;
      assigned_[d][j] = 1;
      current_.selections[idx].entries[d] = j;
      extend(idx, d + 1, partial);
      current_.selections[idx].entries[d] = kDiagonal;
      assigned_[d][j] = 0;
    }
    extend(idx, d + 1, partial);
  }

  void complete(double total) {
    if (visit_ != nullptr) {
      (*visit_)(current_);
    } else if (total < best_cost_) {
      best_cost_ = total;
      best_grouping_ = current_;
    }
  }

  const DiagramSet& x_;
  bool prune_;
  std::vector<std::vector<char>> assigned_;
  Grouping current_;
  const std::function<void(const Grouping&)>* visit_ = nullptr;
  Grouping best_grouping_;
  double best_cost_ = std::numeric_limits<double>::infinity();
};

void check_enumerable(const DiagramSet& x, std::size_t max_points) {
  if (x.total_points() > max_points) {
    throw std::invalid_argument("grouping enumeration limited to " + std::to_string(max_points) +
                                " points, got " + std::to_string(x.total_points()));
  }
}

}  // namespace

std::size_t Selection::point_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const PointRef& e) { return e.has_value(); }));
}

std::strong_ordering operator<=>(const Selection& a, const Selection& b) {
  std::size_t ia = 0;
  std::size_t ib = 0;
  const auto skip = [](const Selection& s, std::size_t& i) {
    while (i < s.entries.size() && !s.entries[i]) ++i;
  };
  for (;;) {
    skip(a, ia);
    skip(b, ib);
    const bool end_a = ia >= a.entries.size();
    const bool end_b = ib >= b.entries.size();
    if (end_a || end_b) return end_b <=> end_a;  // exhausted key sorts first
    if (auto c = ia <=> ib; c != 0) return c;
    if (auto c = *a.entries[ia] <=> *b.entries[ib]; c != 0) return c;
    ++ia;
    ++ib;
  }
}

Selection trivial_selection(std::size_t diagram, std::size_t point, const DiagramSet& x) {
  if (diagram >= x.size()) throw std::out_of_range("trivial_selection: diagram index out of range");
  if (point >= x[diagram].size()) throw std::out_of_range("trivial_selection: point index out of range");
  Selection s{std::vector<PointRef>(x.size(), kDiagonal)};
  s.entries[diagram] = point;
  return s;
}

Grouping trivial_grouping(const DiagramSet& x) {
  Grouping g;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x[i].size(); ++j) g.selections.push_back(trivial_selection(i, j, x));
  }
  return g;
}

std::optional<PlanePoint> selection_mean(const Selection& s, const DiagramSet& x) {
  const double n = static_cast<double>(x.size());
  double k = 0.0;
  double sum_birth = 0.0;
  double sum_death = 0.0;
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    if (!s.entries[i]) continue;
    const PlanePoint& p = x[i][*s.entries[i]];
    sum_birth += p.birth;
    sum_death += p.death;
    k += 1.0;
  }
  if (k == 0.0) return std::nullopt;
  const double scale = 1.0 / (2.0 * n * k);
  return PlanePoint{((n + k) * sum_birth + (n - k) * sum_death) * scale,
                    ((n - k) * sum_birth + (n + k) * sum_death) * scale};
}

double selection_cost(const Selection& s, const DiagramSet& x) {
  const auto mean = selection_mean(s, x);
  if (!mean) return 0.0;
  const double to_diag = diagonal_distance(*mean);
  double cost = 0.0;
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    cost += s.entries[i] ? squared_distance(x[i][*s.entries[i]], *mean) : to_diag * to_diag;
  }
  return cost;
}

void validate_grouping(const Grouping& g, const DiagramSet& x) {
  std::vector<std::vector<int>> seen(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) seen[i].assign(x[i].size(), 0);
  for (const auto& s : g.selections) {
    if (s.entries.size() != x.size()) {
      throw std::invalid_argument("selection has " + std::to_string(s.entries.size()) + " entries, expected " +
                                  std::to_string(x.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!s.entries[i]) continue;
      if (*s.entries[i] >= x[i].size()) throw std::invalid_argument("selection references a missing point");
      if (++seen[i][*s.entries[i]] > 1) throw std::invalid_argument("point used by more than one selection");
    }
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x[i].size(); ++j) {
      if (seen[i][j] == 0) {
        throw std::invalid_argument("point " + std::to_string(j) + " of diagram " + std::to_string(i) +
                                    " is not covered by the grouping");
      }
    }
  }
}

Diagram grouping_mean(const Grouping& g, const DiagramSet& x) {
  validate_grouping(g, x);
  std::vector<PlanePoint> points;
  points.reserve(g.selections.size());
  for (const auto& s : g.selections) {
    if (auto m = selection_mean(s, x)) points.push_back(*m);
  }
  return Diagram(std::move(points));
}

double grouping_cost(const Grouping& g, const DiagramSet& x) {
  double total = 0.0;
  for (const auto& s : g.selections) total += selection_cost(s, x);
  return total;
}

Grouping canonicalize(Grouping g) {
  std::erase_if(g.selections, [](const Selection& s) { return s.point_count() == 0; });
  std::sort(g.selections.begin(), g.selections.end());
  return g;
}

double frechet_function(const Diagram& y, const DiagramSet& x, const MetricParams& params) {
  double total = 0.0;
  for (const auto& xi : x) {
    const double d = wasserstein(y, xi, params).distance;
    total += d * d;
  }
  return total;
}

void enumerate_groupings(const DiagramSet& x, const std::function<void(const Grouping&)>& visit,
                         std::size_t max_points) {
  check_enumerable(x, max_points);
  GroupingWalker(x, false).enumerate(visit);
}

std::vector<Grouping> all_groupings(const DiagramSet& x, std::size_t max_points) {
  std::vector<Grouping> out;
  enumerate_groupings(x, [&](const Grouping& g) { out.push_back(g); }, max_points);
  return out;
}

GroupingOptimum min_cost_grouping(const DiagramSet& x, std::size_t max_points) {
  check_enumerable(x, max_points);
  return GroupingWalker(x, true).minimize();
}

}  // namespace pdstat
