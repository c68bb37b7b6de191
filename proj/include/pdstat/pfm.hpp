#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pdstat/diagram.hpp"
#include "pdstat/grouping.hpp"
#include "pdstat/random.hpp"

namespace pdstat {

struct PerturbParams {
  double alpha = 0.3;
  std::size_t draws = 100;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless alpha > 0 (finite) and draws >= 1.
  void validate() const;
};

struct PfmOptions {
  /// Draws with at most this many surviving points are grouped exactly.
  std::size_t exact_threshold = kDefaultEnumerationLimit;
  /// Alternating-matching restarts for larger draws.
  std::size_t restarts = 4;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 1;
};

struct LabeledPoint {
  std::size_t original = 0;
  PlanePoint point;
};

/// Surviving perturbed points of each input diagram, tagged with the index of
/// the point they came from.
struct LabeledDraw {
  std::vector<std::vector<LabeledPoint>> diagrams;

  [[nodiscard]] DiagramSet as_set() const;
};

struct MeasureAtom {
  double weight = 0.0;
  Grouping grouping;
  Diagram diagram;
};

/// Finitely supported probability measure over diagrams.
struct DiagramMeasure {
  std::vector<MeasureAtom> atoms;
  /// Sample count behind Monte-Carlo weights (0 when weights are exact).
  std::size_t draws = 0;
  /// False when some draw fell back to the alternating-matching heuristic.
  bool exact = true;

  [[nodiscard]] double total_weight() const;
  static DiagramMeasure dirac(Diagram d);
};

/// One draw from the perturbation kernel of x: uniform in the ball of radius
/// alpha, kept only inside radius r = min(alpha, |x - diagonal|); nullopt
/// stands for the diagonal.
std::optional<PlanePoint> perturb_point(PlanePoint x, double alpha, Rng& rng);

LabeledDraw draw_perturbation(const DiagramSet& x, double alpha, Rng& rng);

struct GroupingSearch {
  Grouping grouping;
  bool exact = true;
};

/// Grouping minimizing the Frechet function of a draw: exhaustive branch and
/// bound up to `exact_threshold` points, otherwise the best of
/// `options.restarts` alternating-matching runs seeded with `seed`.
GroupingSearch optimal_grouping(const DiagramSet& draw, const PfmOptions& options = {}, std::uint64_t seed = 0);

/// Relabels a grouping of the draw onto the original diagrams and appends a
/// trivial selection for every point that fell to the diagonal. Canonical.
/// Throws std::invalid_argument on label inconsistencies.
Grouping lift_grouping(const Grouping& draw_grouping, const LabeledDraw& draw, const DiagramSet& x);

/// Monte-Carlo probabilistic Frechet mean: weight of each grouping is its
/// share of draws. Atoms are sorted by decreasing weight, then grouping.
/// Deterministic given the seed, independent of the thread count.
DiagramMeasure pfm(const DiagramSet& x, const PerturbParams& params, const PfmOptions& options = {});

}  // namespace pdstat
