#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "pdstat/assignment.hpp"
#include "pdstat/diagram.hpp"

namespace pdstat {

/// One entry per diagram: a point index in that diagram, or the diagonal.
struct Selection {
  std::vector<PointRef> entries;

  [[nodiscard]] std::size_t size() const { return entries.size(); }
  /// Number of off-diagonal entries (k).
  [[nodiscard]] std::size_t point_count() const;

  friend bool operator==(const Selection&, const Selection&) = default;
  /// Canonical order: lexicographic on the (diagram, point) pairs of the
  /// off-diagonal entries.
  friend std::strong_ordering operator<=>(const Selection& a, const Selection& b);
};

/// A family of selections covering every off-diagonal point exactly once.
struct Grouping {
  std::vector<Selection> selections;

  friend bool operator==(const Grouping&, const Grouping&) = default;
  friend auto operator<=>(const Grouping&, const Grouping&) = default;
};

/// Selection choosing `point` in diagram `diagram` and the diagonal elsewhere.
/// Throws std::out_of_range for indices outside `x`.
Selection trivial_selection(std::size_t diagram, std::size_t point, const DiagramSet& x);

/// The grouping made only of trivial selections, in canonical order.
Grouping trivial_grouping(const DiagramSet& x);

/// Minimizer of the summed squared distance to the selection's k points and
/// the diagonal projection taken N - k times. nullopt for an all-diagonal
/// selection.
std::optional<PlanePoint> selection_mean(const Selection& s, const DiagramSet& x);

/// Summed squared distance from the selection mean to its members, with
/// diagonal entries measured to the perpendicular projection.
double selection_cost(const Selection& s, const DiagramSet& x);

/// Diagram with one point at the mean of each selection.
/// Throws std::invalid_argument when `g` is not a valid grouping on `x`.
Diagram grouping_mean(const Grouping& g, const DiagramSet& x);

/// Total selection cost of a grouping; an upper bound on the Frechet
/// function at grouping_mean(g), tight when g is the optimal grouping.
double grouping_cost(const Grouping& g, const DiagramSet& x);

/// Throws std::invalid_argument unless every selection has N entries with
/// valid indices and every point is covered exactly once.
void validate_grouping(const Grouping& g, const DiagramSet& x);

/// Drops all-diagonal selections and sorts the rest. Idempotent.
Grouping canonicalize(Grouping g);

/// Empirical Frechet function: sum over i of W(Y, X_i)^2.
double frechet_function(const Diagram& y, const DiagramSet& x, const MetricParams& params = {});

inline constexpr std::size_t kDefaultEnumerationLimit = 8;

/// Calls `visit` once for every grouping on `x`, in canonical form. Throws
/// std::invalid_argument when x holds more than `max_points` points.
void enumerate_groupings(const DiagramSet& x, const std::function<void(const Grouping&)>& visit,
                         std::size_t max_points = kDefaultEnumerationLimit);

std::vector<Grouping> all_groupings(const DiagramSet& x, std::size_t max_points = kDefaultEnumerationLimit);

struct GroupingOptimum {
  Grouping grouping;
  double cost = 0.0;
};

/// Exact minimum of grouping_cost over all groupings, by branch and bound
/// over the enumeration order. Returns the first minimizer in that order.
GroupingOptimum min_cost_grouping(const DiagramSet& x, std::size_t max_points = kDefaultEnumerationLimit);

}  // namespace pdstat
