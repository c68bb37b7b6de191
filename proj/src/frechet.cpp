#include "pdstat/frechet.hpp"

#include <stdexcept>

#include "pdstat/random.hpp"

namespace pdstat {

namespace {

struct Pairing {
  Grouping grouping;
  double value = 0.0;
};

Pairing pair_against(const Diagram& y, const DiagramSet& x) {
  std::vector<Matching> matchings;
  matchings.reserve(x.size());
  double value = 0.0;
  for (const auto& xi : x) {
    auto w = wasserstein(y, xi);
    value += w.distance * w.distance;
    matchings.push_back(std::move(w.matching));
  }
  return {matchings_to_grouping(matchings, y, x), value};
}

FrechetResult run_from(const Diagram& start, const DiagramSet& x, std::size_t max_iter) {
  FrechetResult result;
  auto current = pair_against(start, x);
  result.history.push_back(current.value);
  result.mean = start;

  for (std::size_t it = 1; it <= max_iter; ++it) {
    Diagram next = grouping_mean(current.grouping, x);
    auto next_pairing = pair_against(next, x);
    result.history.push_back(next_pairing.value);
    result.iterations = it;
    result.mean = std::move(next);
    result.value = next_pairing.value;
    if (next_pairing.grouping == current.grouping) {
      result.grouping = std::move(next_pairing.grouping);
      result.converged = true;
      return result;
    }
    // Keep mean == grouping_mean(grouping) if the iteration budget runs out.
    result.grouping = std::move(current.grouping);
    current = std::move(next_pairing);
  }
  return result;
}

}  // namespace

Grouping matchings_to_grouping(std::span<const Matching> matchings, const Diagram& y, const DiagramSet& x) {
  if (matchings.size() != x.size()) {
    throw std::invalid_argument("need exactly one matching per input diagram");
  }
  const std::size_t n = x.size();
  Grouping g;
  g.selections.assign(y.size(), Selection{std::vector<PointRef>(n, kDiagonal)});

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<char> covered(x[i].size(), 0);
    std::vector<char> y_seen(y.size(), 0);
    for (const auto& pair : matchings[i].pairs) {
      if (pair.left && *pair.left >= y.size()) throw std::invalid_argument("matching references a missing Y point");
      if (pair.right && *pair.right >= x[i].size()) {
        throw std::invalid_argument("matching references a missing input point");
      }
      if (pair.left && y_seen[*pair.left]++) throw std::invalid_argument("Y point matched twice");
      if (pair.right && covered[*pair.right]++) throw std::invalid_argument("input point matched twice");
      if (pair.left) {
        g.selections[*pair.left].entries[i] = pair.right;
      } else if (pair.right) {
        g.selections.push_back(trivial_selection(i, *pair.right, x));
      }
    }
    for (std::size_t j = 0; j < x[i].size(); ++j) {
      if (!covered[j]) throw std::invalid_argument("matching leaves an input point out");
    }
  }
  return canonicalize(std::move(g));
}

FrechetResult frechet_mean(const DiagramSet& x, const FrechetOptions& options) {
  if (x.empty()) throw std::invalid_argument("frechet_mean needs at least one diagram");
  if (options.max_iter == 0) throw std::invalid_argument("max_iter must be at least 1");

  Rng rng(options.seed);
  const auto random_start = [&]() -> const Diagram& { return x[uniform_index(rng, x.size())]; };

  FrechetResult best;
  const std::size_t runs = options.restarts == 0 ? 1 : options.restarts;
  for (std::size_t r = 0; r < runs; ++r) {
    Diagram start;
    if (r == 0 && !options.random_init) {
      if (const auto* index = std::get_if<std::size_t>(&options.init)) {
        if (*index >= x.size()) throw std::invalid_argument("initial diagram index out of range");
        start = x[*index];
      } else {
        start = std::get<Diagram>(options.init);
      }
    } else {
      start = random_start();
    }
    auto result = run_from(start, x, options.max_iter);
    if (r == 0 || result.value < best.value) best = std::move(result);
  }
  return best;
}

}  // namespace pdstat
