#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "pdstat/assignment.hpp"
#include "pdstat/grouping.hpp"

namespace pdstat {

struct FrechetOptions {
  /// Starting candidate: an index into the diagram set or an explicit diagram.
  std::variant<std::size_t, Diagram> init = std::size_t{0};
  /// Draw the starting diagram of every restart at random (seeded).
  bool random_init = false;
  std::uint64_t seed = 0;
  /// Number of runs; runs after the first always start from a seeded random
  /// input diagram. The lowest Frechet value wins, ties keep the earlier run.
  std::size_t restarts = 1;
  std::size_t max_iter = 64;
};

struct FrechetResult {
  Diagram mean;
  Grouping grouping;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Frechet value of the candidate before the first update and after each
  /// iteration, for the winning run.
  std::vector<double> history;
};

/// Turns optimal matchings of Y against each X_i into a grouping: selection j
/// collects the points matched to y_j; X_i points matched to the diagonal
/// become trivial selections. Result is canonical (all-diagonal rows dropped).
/// Throws std::invalid_argument for matchings inconsistent with Y or X.
Grouping matchings_to_grouping(std::span<const Matching> matchings, const Diagram& y, const DiagramSet& x);

/// Local minimum of the Frechet function by alternating W2 matchings and
/// grouping means until the grouping stops changing.
FrechetResult frechet_mean(const DiagramSet& x, const FrechetOptions& options = {});

}  // namespace pdstat
