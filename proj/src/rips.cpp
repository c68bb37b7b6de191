#include "pdstat/rips.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "pdstat/random.hpp"

namespace pdstat {

PointCloud::PointCloud(std::vector<std::vector<double>> points) : points_(std::move(points)) {
  for (const auto& p : points_) {
    if (p.empty() || p.size() != points_.front().size()) {
      throw std::invalid_argument("point cloud needs a common dimension >= 1");
    }
    for (double c : p) {
      if (!std::isfinite(c)) throw std::invalid_argument("point cloud coordinates must be finite");
    }
  }
}

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

FilteredComplex build_rips(const PointCloud& cloud, double max_radius, std::size_t max_dim) {
  if (cloud.size() > kMaxRipsPoints) {
    throw std::length_error("Rips complexes are limited to " + std::to_string(kMaxRipsPoints) + " points");
  }
  if (!(max_radius >= 0.0) || !std::isfinite(max_radius)) {
    throw std::invalid_argument("max_radius must be finite and non-negative");
  }
  if (max_dim > 2) throw std::invalid_argument("Rips complexes are built up to dimension 2");

  const std::size_t n = cloud.size();
  FilteredComplex complex;
  complex.vertex_count = n;
  complex.max_radius = max_radius;
  for (std::size_t v = 0; v < n; ++v) complex.simplices.push_back({{v}, 0.0});

  if (max_dim >= 1) {
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = euclidean_distance(cloud[i], cloud[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (dist[i * n + j] <= max_radius) complex.simplices.push_back({{i, j}, dist[i * n + j]});
      }
    }
    if (max_dim >= 2) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (dist[i * n + j] > max_radius) continue;
          for (std::size_t k = j + 1; k < n; ++k) {
            const double v = std::max({dist[i * n + j], dist[i * n + k], dist[j * n + k]});
            if (v <= max_radius) complex.simplices.push_back({{i, j, k}, v});
          }
        }
      }
    }
  }

  std::sort(complex.simplices.begin(), complex.simplices.end(), [](const Simplex& a, const Simplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
  });
  return complex;
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

// XOR of two sorted index lists.
std::vector<std::size_t> symmetric_difference(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

PersistenceResult persistence(const FilteredComplex& complex) {
  const auto& s = complex.simplices;
  const std::size_t n = complex.vertex_count;
  PersistenceResult result;
  result.cap = complex.max_radius;

  // Filtration index of each vertex and each edge (keyed by u * n + v).
  std::vector<std::size_t> vertex_index(n, 0);
  std::vector<std::size_t> edge_index;
  std::vector<std::size_t> edge_lookup;
  bool has_edges = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].vertices.size() == 1) vertex_index[s[i].vertices[0]] = i;
    if (s[i].vertices.size() == 2) has_edges = true;
  }
  if (has_edges) {
    edge_lookup.assign(n * n, SIZE_MAX);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i].vertices.size() == 2) edge_lookup[s[i].vertices[0] * n + s[i].vertices[1]] = i;
    }
  }

  // H0 by union-find under the elder rule; every vertex is born at value 0,
  // so the younger root is the one with the later filtration index.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::optional<std::size_t>> vertex_death(n);
  std::vector<char> positive_edge(s.size(), 0);
  std::size_t unpaired_cycles = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].vertices.size() != 2) continue;
    std::size_t a = find_root(parent, s[i].vertices[0]);
    std::size_t b = find_root(parent, s[i].vertices[1]);
    if (a == b) {
      positive_edge[i] = 1;
      ++unpaired_cycles;
      continue;
    }
    if (vertex_index[a] > vertex_index[b]) std::swap(a, b);
    vertex_death[b] = i;
    parent[b] = a;
  }

  // H1 by column reduction of triangle boundaries; lows are edge indices.
  std::vector<std::optional<std::size_t>> killed_by(s.size());
  std::vector<std::vector<std::size_t>> reduced_at_low(s.size());
  for (std::size_t i = 0; i < s.size() && unpaired_cycles > 0; ++i) {
    if (s[i].vertices.size() != 3) continue;
    const auto& v = s[i].vertices;
    std::vector<std::size_t> column{edge_lookup[v[0] * n + v[1]], edge_lookup[v[0] * n + v[2]],
                                    edge_lookup[v[1] * n + v[2]]};
    std::sort(column.begin(), column.end());
    while (!column.empty() && !reduced_at_low[column.back()].empty()) {
      column = symmetric_difference(column, reduced_at_low[column.back()]);
    }
    if (column.empty()) continue;
    const std::size_t low = column.back();
    killed_by[low] = i;
    reduced_at_low[low] = std::move(column);
    --unpaired_cycles;
  }

  std::vector<PlanePoint> h0, h1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].vertices.size() == 1) {
      const auto death = vertex_death[s[i].vertices[0]];
      result.pairs.push_back({0, i, death});
      h0.push_back({s[i].value, death ? s[*death].value : complex.max_radius});
    } else if (s[i].vertices.size() == 2 && positive_edge[i]) {
      result.pairs.push_back({1, i, killed_by[i]});
      h1.push_back({s[i].value, killed_by[i] ? s[*killed_by[i]].value : complex.max_radius});
    }
  }
  result.h0 = Diagram(std::move(h0));
  result.h1 = Diagram(std::move(h1));
  return result;
}

PointCloud sample_noisy_circle(std::size_t n, double radius, double noise, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double r = radius + uniform(rng, -noise, noise);
    pts.push_back({r * std::cos(angle), r * std::sin(angle)});
  }
  return PointCloud(std::move(pts));
}

PointCloud sample_annulus(std::size_t n, double inner, double outer, double center_x, double center_y,
                          std::uint64_t seed) {
  if (!(inner >= 0.0) || !(outer >= inner)) throw std::invalid_argument("annulus needs 0 <= inner <= outer");
  Rng rng(seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(uniform(rng, inner * inner, outer * outer));
    pts.push_back({center_x + r * std::cos(angle), center_y + r * std::sin(angle)});
  }
  return PointCloud(std::move(pts));
}

PointCloud sample_double_annulus(const DoubleAnnulus& shape, std::uint64_t seed) {
  auto large = sample_annulus(shape.large_points, shape.large_inner, shape.large_outer, 0.0, 0.0,
                              derive_seed(seed, 0));
  auto small = sample_annulus(shape.small_points, shape.small_inner, shape.small_outer, shape.small_center_x, 0.0,
                              derive_seed(seed, 1));
  auto pts = large.points();
  pts.insert(pts.end(), small.points().begin(), small.points().end());
  return PointCloud(std::move(pts));
}

std::vector<PointCloud> subsample(const PointCloud& cloud, std::size_t size, std::size_t count, std::uint64_t seed) {
  if (size > cloud.size()) throw std::invalid_argument("subsample larger than the cloud");
  Rng rng(seed);
  std::vector<PointCloud> out;
  out.reserve(count);
  std::vector<std::size_t> order(cloud.size());
  for (std::size_t c = 0; c < count; ++c) {
    std::iota(order.begin(), order.end(), 0);
    // Partial Fisher-Yates with our own index draw keeps this portable.
    for (std::size_t i = 0; i < size; ++i) std::swap(order[i], order[i + uniform_index(rng, cloud.size() - i)]);
    std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(chosen.begin(), chosen.end());
    std::vector<std::vector<double>> pts;
    pts.reserve(size);
    for (std::size_t i : chosen) pts.push_back(cloud[i]);
    out.emplace_back(std::move(pts));
  }
  return out;
}

}  // namespace pdstat
