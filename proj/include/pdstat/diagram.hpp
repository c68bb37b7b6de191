#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pdstat {

/// A (birth, death) pair in the upper half plane.
struct PlanePoint {
  double birth = 0.0;
  double death = 0.0;

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
  friend auto operator<=>(const PlanePoint&, const PlanePoint&) = default;
};

/// Coordinates along the diagonal (`along`) and perpendicular to it (`across`).
struct RotatedPoint {
  double along = 0.0;
  double across = 0.0;
};

/// Perpendicular L2 distance to the diagonal, (death - birth) / sqrt(2).
double diagonal_distance(PlanePoint p);

RotatedPoint to_rotated(PlanePoint p);
PlanePoint from_rotated(RotatedPoint r);

/// Euclidean distance in the plane.
double distance(PlanePoint a, PlanePoint b);
double squared_distance(PlanePoint a, PlanePoint b);

/// Finite multiset of off-diagonal points. The diagonal is implicit.
///
/// Construction drops points with death == birth and throws
/// std::invalid_argument for death < birth or non-finite coordinates.
/// Multiplicity is repetition. Equality is exact multiset equality.
class Diagram {
 public:
  Diagram() = default;
  explicit Diagram(std::vector<PlanePoint> points);
  Diagram(std::initializer_list<PlanePoint> points);

  [[nodiscard]] std::span<const PlanePoint> points() const { return points_; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] bool empty() const { return points_.empty(); }
  [[nodiscard]] const PlanePoint& operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] auto begin() const { return points_.begin(); }
  [[nodiscard]] auto end() const { return points_.end(); }

  /// Points in lexicographic (birth, death) order.
  [[nodiscard]] std::vector<PlanePoint> sorted_points() const;

  friend bool operator==(const Diagram& a, const Diagram& b);

 private:
  std::vector<PlanePoint> points_;
};

/// Multiset comparison with a coordinate tolerance: both diagrams sorted
/// lexicographically must agree pointwise within `tol`.
bool approx_equal(const Diagram& a, const Diagram& b, double tol);

/// The bounded subspace S_{M,K}: at most `max_points` off-diagonal points,
/// every coordinate in [0, max_coord].
struct BoxBound {
  double max_coord = 1.0;
  std::size_t max_points = 0;
};

bool in_box(const Diagram& d, const BoxBound& bound);

/// Coarse diameter bound sqrt(2) * K * M of S_{M,K} under W2.
double diameter_bound(const BoxBound& bound);

/// Ordered, non-empty list of diagrams X_1..X_N.
class DiagramSet {
 public:
  DiagramSet() = default;
  explicit DiagramSet(std::vector<Diagram> diagrams);
  DiagramSet(std::initializer_list<Diagram> diagrams);

  [[nodiscard]] std::size_t size() const { return diagrams_.size(); }
  [[nodiscard]] bool empty() const { return diagrams_.empty(); }
  [[nodiscard]] const Diagram& operator[](std::size_t i) const { return diagrams_[i]; }
  [[nodiscard]] auto begin() const { return diagrams_.begin(); }
  [[nodiscard]] auto end() const { return diagrams_.end(); }
  [[nodiscard]] std::span<const Diagram> diagrams() const { return diagrams_; }

  /// Total number of off-diagonal points across all diagrams.
  [[nodiscard]] std::size_t total_points() const;
  /// Largest diagram cardinality.
  [[nodiscard]] std::size_t max_points() const;

  friend bool operator==(const DiagramSet&, const DiagramSet&) = default;

 private:
  std::vector<Diagram> diagrams_;
};

}  // namespace pdstat
