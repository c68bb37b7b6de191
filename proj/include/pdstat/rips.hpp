#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pdstat/diagram.hpp"

namespace pdstat {

inline constexpr std::size_t kMaxRipsPoints = 400;

/// Points in R^d with a common dimension d >= 1 and finite coordinates.
class PointCloud {
 public:
  PointCloud() = default;
  /// Throws std::invalid_argument on mixed dimensions or non-finite values.
  explicit PointCloud(std::vector<std::vector<double>> points);

  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] bool empty() const { return points_.empty(); }
  [[nodiscard]] std::size_t dimension() const { return points_.empty() ? 0 : points_.front().size(); }
  [[nodiscard]] const std::vector<double>& operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] const std::vector<std::vector<double>>& points() const { return points_; }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::vector<std::vector<double>> points_;
};

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b);

struct Simplex {
  std::vector<std::size_t> vertices;  ///< sorted ascending
  double value = 0.0;

  [[nodiscard]] std::size_t dimension() const { return vertices.size() - 1; }
};

/// Simplices ordered by (value, dimension, vertices).
struct FilteredComplex {
  std::vector<Simplex> simplices;
  std::size_t vertex_count = 0;
  double max_radius = 0.0;
};

/// Vietoris-Rips filtration up to `max_dim` (0, 1 or 2): edges at their
/// length, triangles at their longest edge, nothing above `max_radius`.
/// Throws std::length_error above kMaxRipsPoints points and
/// std::invalid_argument for a bad radius or dimension.
FilteredComplex build_rips(const PointCloud& cloud, double max_radius, std::size_t max_dim = 2);

/// Index pair into FilteredComplex::simplices; no death for essential classes.
struct PersistencePair {
  std::size_t dimension = 0;
  std::size_t birth = 0;
  std::optional<std::size_t> death;
};

struct PersistenceResult {
  Diagram h0;
  Diagram h1;
  /// Every pair, including zero-length ones, in order of the birth simplex.
  std::vector<PersistencePair> pairs;
  /// Death value given to essential classes.
  double cap = 0.0;
};

/// Z/2 persistence in dimensions 0 and 1. Essential classes die at the
/// complex's max_radius.
PersistenceResult persistence(const FilteredComplex& complex);

/// n points at uniform angles on a circle of `radius` around the origin,
/// radius jittered uniformly by +-noise.
PointCloud sample_noisy_circle(std::size_t n, double radius, double noise, std::uint64_t seed);

/// n points uniform by area in the annulus inner <= |p - center| <= outer.
PointCloud sample_annulus(std::size_t n, double inner, double outer, double center_x, double center_y,
                          std::uint64_t seed);

/// A large and a small annulus side by side, touching along the x axis.
struct DoubleAnnulus {
  std::size_t large_points = 60;
  double large_inner = 1.8;
  double large_outer = 2.2;
  std::size_t small_points = 40;
  double small_inner = 0.85;
  double small_outer = 1.15;
  double small_center_x = 3.2;
};

PointCloud sample_double_annulus(const DoubleAnnulus& shape, std::uint64_t seed);

/// `count` random subsets of `size` points drawn without replacement.
std::vector<PointCloud> subsample(const PointCloud& cloud, std::size_t size, std::size_t count,
                                  std::uint64_t seed);

}  // namespace pdstat
