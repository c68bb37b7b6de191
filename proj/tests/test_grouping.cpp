#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "pdstat/assignment.hpp"
#include "pdstat/grouping.hpp"

using namespace pdstat;

namespace {

const DiagramSet kSquare{Diagram{{2, 6}, {4, 8}}, Diagram{{2, 8}, {4, 6}}};

Selection sel(std::initializer_list<PointRef> entries) { return Selection{entries}; }

// Direct objective: squared distances to the points plus N - k squared
// distances to the diagonal.
double selection_objective(PlanePoint y, const Selection& s, const DiagramSet& x) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.entries[i]) {
      total += squared_distance(y, x[i][*s.entries[i]]);
    } else {
      total += diagonal_distance(y) * diagonal_distance(y);
    }
  }
  return total;
}

DiagramSet random_set(Rng& rng, std::size_t n, std::size_t max_points) {
  std::vector<Diagram> ds;
  for (std::size_t i = 0; i < n; ++i) ds.push_back(oracle::random_diagram(rng, max_points, 0, 5));
  return DiagramSet(std::move(ds));
}

}  // namespace

TEST_CASE("trivial selections") {
  const DiagramSet one{Diagram{{0, 1}}};
  CHECK(trivial_selection(0, 0, one) == sel({0}));

  const DiagramSet three{Diagram{}, Diagram{{0, 1}, {0, 2}, {0, 3}}, Diagram{}};
  CHECK(trivial_selection(1, 2, three) == sel({kDiagonal, 2, kDiagonal}));
  CHECK_THROWS_AS(trivial_selection(1, 3, three), std::out_of_range);
  CHECK_THROWS_AS(trivial_selection(3, 0, three), std::out_of_range);

  const auto g = trivial_grouping(kSquare);
  CHECK(g.selections.size() == 4);
  CHECK_NOTHROW(validate_grouping(g, kSquare));
}

TEST_CASE("selection means") {
  const DiagramSet x{Diagram{{2, 4}}, Diagram{}, Diagram{}};
  const auto m = selection_mean(sel({0, kDiagonal, kDiagonal}), x);
  REQUIRE(m);
  CHECK(m->birth == doctest::Approx(8.0 / 3));
  CHECK(m->death == doctest::Approx(10.0 / 3));

  const DiagramSet full{Diagram{{0, 2}}, Diagram{{1, 5}}, Diagram{{2, 3}}};
  const auto c = selection_mean(sel({0, 0, 0}), full);
  REQUIRE(c);
  CHECK(c->birth == doctest::Approx(1.0));
  CHECK(c->death == doctest::Approx(10.0 / 3));

  const DiagramSet half{Diagram{{0, 2}}, Diagram{}};
  const auto h = selection_mean(sel({0, kDiagonal}), half);
  REQUIRE(h);
  CHECK(h->birth == doctest::Approx(0.5));
  CHECK(h->death == doctest::Approx(1.5));
  CHECK(diagonal_distance(*h) == doctest::Approx(std::sqrt(2.0) / 2));

  CHECK_FALSE(selection_mean(sel({kDiagonal, kDiagonal}), half));
}

TEST_CASE("selection mean is the minimizer") {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 5);
    std::vector<Diagram> ds;
    Selection s;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == 0 || unit_double(rng) < 0.6) {
        const double b = uniform(rng, 0, 5);
        ds.push_back(Diagram{{b, b + uniform(rng, 0.01, 5)}});
        s.entries.push_back(0);
      } else {
        ds.push_back(Diagram{});
        s.entries.push_back(kDiagonal);
      }
    }
    const DiagramSet x(std::move(ds));
    const auto m = selection_mean(s, x);
    REQUIRE(m);
    const double at_mean = selection_objective(*m, s, x);
    CHECK(at_mean == doctest::Approx(selection_cost(s, x)).epsilon(1e-12));
    for (int k = 0; k < 8; ++k) {
      const double angle = uniform(rng, 0, 2 * M_PI);
      const PlanePoint moved{m->birth + 1e-3 * std::cos(angle), m->death + 1e-3 * std::sin(angle)};
      CHECK(selection_objective(moved, s, x) >= at_mean);
    }
  }
}

TEST_CASE("grouping means") {
  const DiagramSet single{Diagram{{0, 1}, {2, 5}}};
  CHECK(grouping_mean(trivial_grouping(single), single) == single[0]);

  // Pairing equal births gives {(2,7),(4,7)}, equal deaths {(3,6),(3,8)}.
  Grouping same_birth{{sel({0, 0}), sel({1, 1})}};
  CHECK(approx_equal(grouping_mean(same_birth, kSquare), Diagram{{2, 7}, {4, 7}}, 1e-12));
  Grouping same_death{{sel({0, 1}), sel({1, 0})}};
  CHECK(approx_equal(grouping_mean(same_death, kSquare), Diagram{{3, 6}, {3, 8}}, 1e-12));

  // Mixed full and trivial rows: one mean point per row.
  const DiagramSet mixed{Diagram{{0, 4}, {1, 1.5}}, Diagram{{0, 4.2}}, Diagram{{0.5, 4}, {3, 3.4}}};
  Grouping g{{sel({0, 0, 0}), sel({1, kDiagonal, kDiagonal}), sel({kDiagonal, kDiagonal, 1})}};
  CHECK(grouping_mean(g, mixed).size() == 3);

  Grouping missing{{sel({0, 1})}};
  CHECK_THROWS_AS(grouping_mean(missing, kSquare), std::invalid_argument);
  Grouping twice{{sel({0, 1}), sel({0, 0}), sel({1, kDiagonal})}};
  CHECK_THROWS_AS(validate_grouping(twice, kSquare), std::invalid_argument);
  Grouping short_row{{sel({0}), sel({1, 0}), sel({kDiagonal, 1})}};
  CHECK_THROWS_AS(validate_grouping(short_row, kSquare), std::invalid_argument);
}

TEST_CASE("grouping means stay in the box") {
  Rng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 3);
    const auto x = random_set(rng, n, 3);
    if (x.total_points() > kDefaultEnumerationLimit) continue;
    enumerate_groupings(x, [&](const Grouping& g) {
      CHECK(in_box(grouping_mean(g, x), BoxBound{5, n * 3}));
    });
  }
}

TEST_CASE("frechet function") {
  const Diagram y{{0, 1}, {2, 3}};
  CHECK(frechet_function(y, DiagramSet{y}) == 0.0);
  CHECK(frechet_function(Diagram{{0, 2}}, DiagramSet{Diagram{}, Diagram{}}) == doctest::Approx(4.0));

  const Diagram u{{2, 7}, {4, 7}};
  double expected = 0.0;
  for (const auto& d : kSquare) expected += std::pow(oracle::wasserstein(u, d), 2);
  CHECK(frechet_function(u, kSquare) == doctest::Approx(expected));
}

TEST_CASE("enumeration counts") {
  CHECK(all_groupings(DiagramSet{Diagram{{0, 1}}, Diagram{{0, 2}}}).size() == 2);
  CHECK(all_groupings(DiagramSet{Diagram{{0, 1}, {0, 2}, {0, 3}}}).size() == 1);
  CHECK(all_groupings(kSquare).size() == 7);
  CHECK_THROWS_AS(all_groupings(DiagramSet{Diagram{{0, 1}, {0, 2}, {0, 3}}}, 2), std::invalid_argument);

  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 4);
    const auto x = random_set(rng, n, 3);
    if (x.total_points() > kDefaultEnumerationLimit) continue;
    std::vector<std::size_t> sizes;
    for (const auto& d : x) sizes.push_back(d.size());
    const auto all = all_groupings(x);
    CHECK(all.size() == oracle::grouping_count(sizes));
    std::set<Grouping> distinct(all.begin(), all.end());
    CHECK(distinct.size() == all.size());
    for (const auto& g : all) {
      CHECK_NOTHROW(validate_grouping(g, x));
      CHECK(canonicalize(g) == g);
    }
  }
}

TEST_CASE("canonical form") {
  Grouping g{{sel({1, 0}), sel({kDiagonal, kDiagonal}), sel({0, 1})}};
  const auto c = canonicalize(g);
  CHECK(c.selections.size() == 2);
  CHECK(canonicalize(c) == c);
  Grouping permuted{{sel({0, 1}), sel({1, 0})}};
  CHECK(canonicalize(permuted) == c);
}

TEST_CASE("grouping cost bounds the frechet function") {
  Rng rng(43);
  for (int trial = 0; trial < 80; ++trial) {
    const auto x = random_set(rng, 1 + uniform_index(rng, 3), 3);
    if (x.total_points() > kDefaultEnumerationLimit) continue;
    double best_f = INFINITY;
    enumerate_groupings(x, [&](const Grouping& g) {
      const double f = frechet_function(grouping_mean(g, x), x);
      CHECK(f <= grouping_cost(g, x) + 1e-9);
      best_f = std::min(best_f, f);
    });
    const auto opt = min_cost_grouping(x);
    CHECK(opt.cost == doctest::Approx(grouping_cost(opt.grouping, x)));
    CHECK(frechet_function(grouping_mean(opt.grouping, x), x) == doctest::Approx(best_f).epsilon(1e-9));
  }
}

TEST_CASE("square fixture has two optimal groupings") {
  std::vector<double> costs;
  for (const auto& g : all_groupings(kSquare)) costs.push_back(grouping_cost(g, kSquare));
  std::sort(costs.begin(), costs.end());
  CHECK(costs[0] == doctest::Approx(4.0));
  CHECK(costs[1] == doctest::Approx(4.0));
  CHECK(costs[2] > 4.5);
}
