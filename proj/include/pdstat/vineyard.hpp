#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pdstat/diagram.hpp"
#include "pdstat/measure_ot.hpp"
#include "pdstat/pfm.hpp"

namespace pdstat {

/// Diagram sets sampled at strictly increasing times, with constant N.
struct Vineyard {
  std::vector<double> times;
  std::vector<DiagramSet> frames;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
};

/// One PFM per frame; frame k uses seed derive_seed(params.seed, k).
std::vector<DiagramMeasure> vineyard_pfm(const Vineyard& v, const PerturbParams& params,
                                         const PfmOptions& options = {});

/// Alternating-matching mean of every frame, started from the first diagram.
std::vector<Diagram> frechet_mean_path(const Vineyard& v);

struct ContinuityStep {
  double dt = 0.0;
  double d2 = 0.0;          ///< product-metric step between frames
  double measure_w2 = 0.0;  ///< W2 between consecutive PFMs
  double bound = 0.0;       ///< C' sqrt(d2)
  double slack = 0.0;       ///< three combined Monte-Carlo errors
  bool within_bound = true;
};

struct PowerFit {
  double exponent = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Least-squares slope of log(y) against log(x) over samples with x, y > 0.
/// nullopt with fewer than two usable samples or no spread in x.
std::optional<PowerFit> fit_power_law(std::span<const double> x, std::span<const double> y);

struct ContinuityReport {
  HolderConstants constants;
  std::vector<ContinuityStep> steps;
  std::optional<PowerFit> fit;
  std::size_t violations = 0;

  [[nodiscard]] double max_measure_step() const;
};

/// Per-step distances against the Holder bound. Throws std::invalid_argument
/// for fewer than two frames or measures not aligned with frames.
ContinuityReport continuity_report(std::span<const DiagramMeasure> measures, const Vineyard& v,
                                   const BoxBound& bound, double alpha);

/// Two diagrams of two points whose four points slide along an L-shaped path
/// through the square configuration {(2,6),(4,8)} / {(2,8),(4,6)}: the
/// rectangle's death side shrinks from 3 to 2, then its birth side grows from
/// 2 to 3. With an odd frame count the middle frame is the square.
Vineyard square_crossing_vineyard(std::size_t frames);

}  // namespace pdstat
