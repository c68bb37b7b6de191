#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pdstat/diagram.hpp"

namespace pdstat {

/// Index of an off-diagonal point, or nullopt for the diagonal.
using PointRef = std::optional<std::size_t>;
inline constexpr std::nullopt_t kDiagonal = std::nullopt;

/// Wasserstein exponent p and ground-norm exponent q, both in [1, inf].
struct MetricParams {
  double p = 2.0;
  double q = 2.0;

  /// Throws std::invalid_argument when p or q is NaN or below 1.
  void validate() const;
};

/// Dense row-major matrix of assignment costs.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// L_q distance between two plane points.
double ground_distance(PlanePoint a, PlanePoint b, double q);
/// L_q distance from a point to the diagonal, (death - birth) * 2^(1/q - 1).
double diagonal_ground_distance(PlanePoint a, double q);

/// The augmented (k+m)x(k+m) cost matrix between X (k points) and Y
/// (m points). Rows are X's points then m diagonal copies; columns are Y's
/// points then k diagonal copies. Entries are ground distances raised to p,
/// with diagonal-to-diagonal entries zero.
CostMatrix build_cost_matrix(const Diagram& x, const Diagram& y, const MetricParams& params = {});

struct Assignment {
  std::vector<std::size_t> row_to_col;
  double total_cost = 0.0;
};

/// Exact min-cost perfect assignment on a square matrix (Kuhn-Munkres with
/// potentials, O(n^3)). Ties resolve towards the lowest column index.
/// Throws std::invalid_argument for non-square or non-finite input.
Assignment solve_assignment(const CostMatrix& cost);

/// Same solver for rows <= cols; every row gets a distinct column.
Assignment solve_rectangular_assignment(const CostMatrix& cost);

struct MatchedPair {
  PointRef left;
  PointRef right;

  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

/// Bijection between the augmented point sets of two diagrams. Each
/// off-diagonal point appears in exactly one pair; diagonal-diagonal pairs
/// are omitted. `cost` is the sum of ground distances raised to p.
struct Matching {
  std::vector<MatchedPair> pairs;
  double cost = 0.0;

  /// right partner of left point i (nullopt when matched to the diagonal).
  [[nodiscard]] PointRef partner_of_left(std::size_t i) const;
  [[nodiscard]] PointRef partner_of_right(std::size_t j) const;
};

struct WassersteinResult {
  double distance = 0.0;
  Matching matching;
};

/// W_p[L_q] between finite diagrams, with an optimal matching. p must be
/// finite; use `bottleneck` for p = inf.
WassersteinResult wasserstein(const Diagram& x, const Diagram& y, const MetricParams& params = {});

/// W_inf[L_q]: smallest threshold admitting a perfect matching of the
/// augmented graph, found by binary search over candidate edge costs.
double bottleneck(const Diagram& x, const Diagram& y, double q = 2.0);

}  // namespace pdstat
