#include "pdstat/pfm.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <stdexcept>
#include <thread>

#include "pdstat/frechet.hpp"

namespace pdstat {

namespace {

using GroupingCounts = std::map<Grouping, std::size_t>;

struct WorkerResult {
  GroupingCounts counts;
  bool exact = true;
};

void run_draws(const DiagramSet& x, const PerturbParams& params, const PfmOptions& options, std::size_t first,
               std::size_t stride, WorkerResult& out) {
  for (std::size_t t = first; t < params.draws; t += stride) {
    Rng rng(derive_seed(params.seed, t));
    const LabeledDraw draw = draw_perturbation(x, params.alpha, rng);
    const std::uint64_t search_seed = rng();
    const auto search = optimal_grouping(draw.as_set(), options, search_seed);
    out.exact = out.exact && search.exact;
    ++out.counts[lift_grouping(search.grouping, draw, x)];
  }
}

}  // namespace

void PerturbParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be a positive finite number");
  if (draws == 0) throw std::invalid_argument("draws must be at least 1");
}

DiagramSet LabeledDraw::as_set() const {
  std::vector<Diagram> out;
  out.reserve(diagrams.size());
  for (const auto& labeled : diagrams) {
    std::vector<PlanePoint> points;
    points.reserve(labeled.size());
    for (const auto& lp : labeled) points.push_back(lp.point);
    out.emplace_back(std::move(points));
  }
  return DiagramSet(std::move(out));
}

double DiagramMeasure::total_weight() const {
  double total = 0.0;
  for (const auto& atom : atoms) total += atom.weight;
  return total;
}

DiagramMeasure DiagramMeasure::dirac(Diagram d) {
  DiagramMeasure m;
  m.atoms.push_back(MeasureAtom{1.0, Grouping{}, std::move(d)});
  return m;
}

std::optional<PlanePoint> perturb_point(PlanePoint x, double alpha, Rng& rng) {
  const double r = std::min(alpha, diagonal_distance(x));
  const double alpha2 = alpha * alpha;
  double dx = 0.0;
  double dy = 0.0;
  double norm2 = 0.0;
  do {
    dx = uniform(rng, -alpha, alpha);
    dy = uniform(rng, -alpha, alpha);
    norm2 = dx * dx + dy * dy;
  } while (norm2 > alpha2);
  if (norm2 > r * r) return std::nullopt;
  const PlanePoint moved{x.birth + dx, x.death + dy};
  // Rounding can put a boundary draw onto the diagonal; that is a diagonal draw.
  if (!(moved.death > moved.birth)) return std::nullopt;
  return moved;
}

LabeledDraw draw_perturbation(const DiagramSet& x, double alpha, Rng& rng) {
  LabeledDraw draw;
  draw.diagrams.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x[i].size(); ++j) {
      if (auto moved = perturb_point(x[i][j], alpha, rng)) draw.diagrams[i].push_back({j, *moved});
    }
  }
  return draw;
}

GroupingSearch optimal_grouping(const DiagramSet& draw, const PfmOptions& options, std::uint64_t seed) {
  if (draw.total_points() <= options.exact_threshold) {
    return {min_cost_grouping(draw, options.exact_threshold).grouping, true};
  }
  FrechetOptions fo;
  fo.restarts = std::max<std::size_t>(1, options.restarts);
  fo.seed = seed;
  return {frechet_mean(draw, fo).grouping, false};
}

Grouping lift_grouping(const Grouping& draw_grouping, const LabeledDraw& draw, const DiagramSet& x) {
  const std::size_t n = x.size();
  if (draw.diagrams.size() != n) throw std::invalid_argument("draw and input have different diagram counts");

  std::vector<std::vector<char>> used(n);
  for (std::size_t i = 0; i < n; ++i) {
    used[i].assign(x[i].size(), 0);
    for (const auto& lp : draw.diagrams[i]) {
      if (lp.original >= x[i].size()) throw std::invalid_argument("draw label out of range");
    }
  }

  Grouping lifted;
  for (const auto& s : draw_grouping.selections) {
    if (s.entries.size() != n) throw std::invalid_argument("draw selection has the wrong length");
    Selection out{std::vector<PointRef>(n, kDiagonal)};
    for (std::size_t i = 0; i < n; ++i) {
      if (!s.entries[i]) continue;
      if (*s.entries[i] >= draw.diagrams[i].size()) throw std::invalid_argument("draw selection index out of range");
      const std::size_t original = draw.diagrams[i][*s.entries[i]].original;
      if (used[i][original]++) throw std::invalid_argument("two draw points carry the same label");
      out.entries[i] = original;
    }
    lifted.selections.push_back(std::move(out));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < x[i].size(); ++j) {
      if (!used[i][j]) lifted.selections.push_back(trivial_selection(i, j, x));
    }
  }
  return canonicalize(std::move(lifted));
}

DiagramMeasure pfm(const DiagramSet& x, const PerturbParams& params, const PfmOptions& options) {
  params.validate();
  if (x.empty()) throw std::invalid_argument("pfm needs at least one diagram");

  std::size_t threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = std::min(threads, params.draws);

  std::vector<WorkerResult> results(threads);
  if (threads == 1) {
    run_draws(x, params, options, 0, 1, results[0]);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          run_draws(x, params, options, w, threads, results[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  GroupingCounts merged;
  bool exact = true;
  for (auto& r : results) {
    exact = exact && r.exact;
    for (auto& [g, c] : r.counts) merged[g] += c;
  }

  std::vector<std::pair<const Grouping*, std::size_t>> order;
  order.reserve(merged.size());
  for (const auto& [g, c] : merged) order.emplace_back(&g, c);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  DiagramMeasure measure;
  measure.draws = params.draws;
  measure.exact = exact;
  const double total = static_cast<double>(params.draws);
  for (const auto& [g, c] : order) {
    measure.atoms.push_back(MeasureAtom{static_cast<double>(c) / total, *g, grouping_mean(*g, x)});
  }
  return measure;
}

}  // namespace pdstat
