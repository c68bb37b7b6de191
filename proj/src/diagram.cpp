#include "pdstat/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pdstat {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

std::vector<PlanePoint> checked(std::vector<PlanePoint> points) {
  std::vector<PlanePoint> kept;
  kept.reserve(points.size());
  for (const auto& p : points) {
    if (!std::isfinite(p.birth) || !std::isfinite(p.death)) {
      throw std::invalid_argument("diagram point has a non-finite coordinate");
    }
    if (p.death < p.birth) {
      throw std::invalid_argument("diagram point below the diagonal: (" + std::to_string(p.birth) +
                                  ", " + std::to_string(p.death) + ")");
    }
    if (p.death > p.birth) kept.push_back(p);
  }
  return kept;
}

}  // namespace

double diagonal_distance(PlanePoint p) { return (p.death - p.birth) * kInvSqrt2; }

RotatedPoint to_rotated(PlanePoint p) {
  return {(p.birth + p.death) * kInvSqrt2, (p.death - p.birth) * kInvSqrt2};
}

PlanePoint from_rotated(RotatedPoint r) {
  return {(r.along - r.across) * kInvSqrt2, (r.along + r.across) * kInvSqrt2};
}

double squared_distance(PlanePoint a, PlanePoint b) {
  const double db = a.birth - b.birth;
  const double dd = a.death - b.death;
  return db * db + dd * dd;
}

double distance(PlanePoint a, PlanePoint b) { return std::sqrt(squared_distance(a, b)); }

Diagram::Diagram(std::vector<PlanePoint> points) : points_(checked(std::move(points))) {}

Diagram::Diagram(std::initializer_list<PlanePoint> points)
    : points_(checked(std::vector<PlanePoint>(points))) {}

std::vector<PlanePoint> Diagram::sorted_points() const {
  auto sorted = points_;
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

bool operator==(const Diagram& a, const Diagram& b) {
  return a.size() == b.size() && a.sorted_points() == b.sorted_points();
}

bool approx_equal(const Diagram& a, const Diagram& b, double tol) {
  if (a.size() != b.size()) return false;
  const auto pa = a.sorted_points();
  const auto pb = b.sorted_points();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (std::abs(pa[i].birth - pb[i].birth) > tol || std::abs(pa[i].death - pb[i].death) > tol) {
      return false;
    }
  }
  return true;
}

bool in_box(const Diagram& d, const BoxBound& bound) {
  if (d.size() > bound.max_points) return false;
  return std::all_of(d.begin(), d.end(), [&](const PlanePoint& p) {
    return p.birth >= 0.0 && p.death >= 0.0 && p.birth <= bound.max_coord &&
           p.death <= bound.max_coord;
  });
}

double diameter_bound(const BoxBound& bound) {
  return std::numbers::sqrt2 * static_cast<double>(bound.max_points) * bound.max_coord;
}

DiagramSet::DiagramSet(std::vector<Diagram> diagrams) : diagrams_(std::move(diagrams)) {
  if (diagrams_.empty()) throw std::invalid_argument("a diagram set needs at least one diagram");
}

DiagramSet::DiagramSet(std::initializer_list<Diagram> diagrams)
    : DiagramSet(std::vector<Diagram>(diagrams)) {}

std::size_t DiagramSet::total_points() const {
  std::size_t total = 0;
  for (const auto& d : diagrams_) total += d.size();
  return total;
}

std::size_t DiagramSet::max_points() const {
  std::size_t best = 0;
  for (const auto& d : diagrams_) best = std::max(best, d.size());
  return best;
}

}  // namespace pdstat
