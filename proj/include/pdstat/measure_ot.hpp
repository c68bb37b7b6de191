#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdstat/assignment.hpp"
#include "pdstat/diagram.hpp"
#include "pdstat/pfm.hpp"

namespace pdstat {

struct Flow {
  std::size_t source = 0;
  std::size_t target = 0;
  double mass = 0.0;
};

/// Coupling between two finitely supported measures; `cost` is the
/// transported sum of mass * ground cost.
struct TransportPlan {
  std::vector<Flow> flows;
  double cost = 0.0;
};

/// Exact discrete optimal transport for real-valued masses (successive
/// shortest paths). Supplies and demands must have equal totals.
TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              const CostMatrix& cost);

/// Same problem with integer masses; flows are reported divided by `scale`.
TransportPlan solve_transport_integral(std::span<const long long> supply, std::span<const long long> demand,
                                       const CostMatrix& cost, double scale);

struct MeasureDistance {
  double distance = 0.0;
  TransportPlan plan;
};

/// W2 between measures over diagrams with ground metric W(params) between
/// atom diagrams. Monte-Carlo measures (draws > 0) are solved exactly in
/// integer counts over a common denominator.
/// Throws std::invalid_argument if either weight total is off 1 by > 1e-9.
MeasureDistance measure_wasserstein(const DiagramMeasure& mu, const DiagramMeasure& nu,
                                    const MetricParams& params = {});

/// sqrt(sum_i W(X_i, Y_i)^2). Throws std::invalid_argument for unequal N.
double product_metric(const DiagramSet& x, const DiagramSet& y, const MetricParams& params = {});

struct HolderConstants {
  double diameter = 0.0;  ///< coarse diameter of S_{M,NK}
  double c = 0.0;
  double c_prime = 0.0;
};

/// C = sqrt(2 (1/N^2 + D^2/a^2) + 4 D^2/a + 1) for diameter D and radius a.
double holder_constant_c(std::size_t n, double diameter, double alpha);

/// Constants of the Holder bounds with D = diameter_bound(M, N*K) and
/// C' = max(C sqrt(N K + 1), D).
HolderConstants holder_constants(std::size_t n, const BoxBound& bound, double alpha);

/// Right-hand side of the pointwise continuity bound
/// C * (sum over x matched off-diagonal of |x - phi(x)| + d2(X,Y)^2)^(1/2),
/// with phi the optimal W2 matchings X_i -> Y_i.
struct ContinuityBound {
  double offdiagonal_motion = 0.0;
  double product_distance = 0.0;
  double value = 0.0;
};
ContinuityBound continuity_bound(const DiagramSet& x, const DiagramSet& y, const BoxBound& bound, double alpha);

/// Monte-Carlo error scale of a sampled measure: the support diameter times
/// sqrt(E[total variation]), with E[TV] <= 1/2 sum sqrt(p(1-p)/T).
/// Zero for measures with exact weights.
double monte_carlo_error(const DiagramMeasure& mu);

}  // namespace pdstat
