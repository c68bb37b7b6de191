// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pdstat/cli.hpp"
#include "pdstat/frechet.hpp"
#include "pdstat/io.hpp"
#include "pdstat/measure_ot.hpp"
#include "pdstat/pfm.hpp"
#include "pdstat/plot.hpp"
#include "pdstat/rips.hpp"
#include "pdstat/vineyard.hpp"

using namespace pdstat;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

DiagramSet random_set(Rng& rng, std::size_t n, std::size_t max_points, double max_coord) {
  std::vector<Diagram> ds;
  for (std::size_t i = 0; i < n; ++i) ds.push_back(oracle::random_diagram(rng, max_points, 0, max_coord));
  return DiagramSet(std::move(ds));
}

DiagramMeasure random_measure(Rng& rng, std::size_t max_atoms, int total) {
  const std::size_t k = 1 + uniform_index(rng, max_atoms);
  std::vector<int> counts(k, 1);
  for (int left = total - static_cast<int>(k); left > 0; --left) ++counts[uniform_index(rng, k)];
  DiagramMeasure m;
  m.draws = static_cast<std::size_t>(total);
  for (std::size_t a = 0; a < k; ++a) {
    m.atoms.push_back({static_cast<double>(counts[a]) / total, Grouping{}, oracle::random_diagram(rng, 4, 0, 5)});
  }
  return m;
}

const DiagramSet kSquare{Diagram{{2, 6}, {4, 8}}, Diagram{{2, 8}, {4, 6}}};

Verdict wasserstein_oracle() {
  Rng rng(1001);
  double worst = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = oracle::random_diagram(rng, 5, 0, 5);
    const auto y = oracle::random_diagram(rng, 5, 0, 5);
    worst = std::max(worst, std::abs(wasserstein(x, y).distance - oracle::wasserstein(x, y)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-9 && secs < 10.0, fmt("500 pairs, max |solver - brute force| = %.3g, %.2f s", worst, secs)};
}

Verdict metric_axioms() {
  Rng rng(1002);
  int asymmetric = 0;
  double worst_diagram = -INFINITY, worst_measure = -INFINITY;
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = oracle::random_diagram(rng, 5, 0, 5);
    const auto y = oracle::random_diagram(rng, 5, 0, 5);
    const auto z = oracle::random_diagram(rng, 5, 0, 5);
    const double xy = wasserstein(x, y).distance;
    if (xy != wasserstein(y, x).distance) ++asymmetric;
    worst_diagram = std::max(worst_diagram, xy - wasserstein(x, z).distance - wasserstein(z, y).distance);

    const auto a = random_measure(rng, 4, 12);
    const auto b = random_measure(rng, 4, 12);
    const auto c = random_measure(rng, 4, 12);
    const double ab = measure_wasserstein(a, b).distance;
    if (ab != measure_wasserstein(b, a).distance) ++asymmetric;
    worst_measure =
        std::max(worst_measure, ab - measure_wasserstein(a, c).distance - measure_wasserstein(c, b).distance);
  }
  return {asymmetric == 0 && worst_diagram <= 1e-9 && worst_measure <= 1e-9,
          fmt("200 triples, asymmetric pairs %d, max triangle excess: diagrams %.3g, measures %.3g", asymmetric,
              worst_diagram, worst_measure)};
}

Verdict trivial_selection_ratio() {
  Rng rng(1003);
  double worst = 0.0;
  for (std::size_t n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const double b = uniform(rng, 0, 10);
      const PlanePoint p{b, b + uniform(rng, 0.01, 10)};
      std::vector<Diagram> ds(n);
      const std::size_t where = uniform_index(rng, n);
      ds[where] = Diagram{p};
      const DiagramSet x(std::move(ds));
      const auto m = selection_mean(trivial_selection(where, 0, x), x);
      const double ratio = diagonal_distance(*m) / diagonal_distance(p);
      worst = std::max(worst, std::abs(ratio - 1.0 / static_cast<double>(n)));
    }
  }
  return {worst <= 1e-12, fmt("N = 2..6, 100 points each, max |ratio - 1/N| = %.3g", worst)};
}

Verdict close_matchings() {
  Rng rng(1004);
  double worst = -INFINITY;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 6);
    std::vector<Diagram> xs, ys;
    Selection s;
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && unit_double(rng) < 0.4) {
        xs.emplace_back();
        ys.emplace_back();
        s.entries.push_back(kDiagonal);
        continue;
      }
      const double b1 = uniform(rng, 0, 5), b2 = uniform(rng, 0, 5);
      const PlanePoint z{b1, b1 + uniform(rng, 0.01, 5)}, w{b2, b2 + uniform(rng, 0.01, 5)};
      xs.push_back(Diagram{z});
      ys.push_back(Diagram{w});
      s.entries.push_back(0);
      moved += squared_distance(z, w);
    }
    const DiagramSet x(std::move(xs)), y(std::move(ys));
    worst = std::max(worst, squared_distance(*selection_mean(s, x), *selection_mean(s, y)) - moved);
  }
  return {worst <= 1e-12, fmt("1000 selection pairs, max excess of |mean - mean'|^2 over sum |z - z'|^2 = %.3g", worst)};
}

Verdict alternating_matchings() {
  Rng rng(1005);
  int non_monotone = 0, value_mismatch = 0, not_a_grouping = 0, below_optimum = 0, enumerable = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_set(rng, 1 + uniform_index(rng, 4), 4, 5);
    FrechetOptions opt;
    opt.init = uniform_index(rng, x.size());
    const auto r = frechet_mean(x, opt);
    for (std::size_t i = 1; i < r.history.size(); ++i) {
      if (r.history[i] > r.history[i - 1] + 1e-12) ++non_monotone;
    }
    if (std::abs(r.value - frechet_function(r.mean, x)) > 1e-9) ++value_mismatch;
    if (x.total_points() <= kDefaultEnumerationLimit) {
      ++enumerable;
      bool found = false;
      double best = INFINITY;
      enumerate_groupings(x, [&](const Grouping& g) {
        best = std::min(best, frechet_function(grouping_mean(g, x), x));
        found = found || (g == r.grouping && approx_equal(grouping_mean(g, x), r.mean, 1e-12));
      });
      if (!found) ++not_a_grouping;
      if (r.value < best - 1e-9) ++below_optimum;
    }
  }
  const bool ok = non_monotone == 0 && value_mismatch == 0 && not_a_grouping == 0 && below_optimum == 0;
  return {ok, fmt("200 instances (%d enumerable): increases %d, value mismatches %d, non-grouping means %d, "
                  "below enumerated optimum %d",
                  enumerable, non_monotone, value_mismatch, not_a_grouping, below_optimum)};
}

Verdict square_weights() {
  const Diagram u{{2, 7}, {4, 7}}, v{{3, 6}, {3, 8}};
  double wu = 0.0, wv = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto mu = pfm(kSquare, {0.3, 10000, seed});
    for (const auto& a : mu.atoms) {
      if (approx_equal(a.diagram, u, 1e-12)) wu += a.weight / 5;
      if (approx_equal(a.diagram, v, 1e-12)) wv += a.weight / 5;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = wu >= 0.45 && wu <= 0.55 && wv >= 0.45 && wv <= 0.55 && secs < 30.0;
  return {ok, fmt("mean weights over 5 seeds: {(2,7),(4,7)} %.4f, {(3,6),(3,8)} %.4f, %.2f s", wu, wv, secs)};
}

Verdict survival_rates() {
  const double alpha = 0.3;
  const int draws = 100000;
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 1006;
  for (double ratio : {0.25, 0.5, 0.75, 1.0}) {
    Rng rng(seed++);
    const PlanePoint x{1.0, 1.0 + ratio * alpha * std::sqrt(2.0)};
    const double r = std::min(alpha, diagonal_distance(x));
    const double expected = r * r / (alpha * alpha);
    int survived = 0;
    for (int t = 0; t < draws; ++t) survived += perturb_point(x, alpha, rng) ? 1 : 0;
    const double rate = static_cast<double>(survived) / draws;
    const double se = std::sqrt(expected * (1 - expected) / draws);
    ok = ok && std::abs(rate - expected) <= 3 * se;
    detail += fmt("%s%.2f: %.4f vs %.4f (3se %.4f)", detail.empty() ? "" : "; ", ratio, rate, expected, 3 * se);
  }
  return {ok, detail};
}

Verdict holder_bound() {
  Rng rng(1007);
  const double alpha = 0.3, max_coord = 5.0;
  const std::size_t max_points = 3;
  int violations = 0;
  double tightest = INFINITY;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 3);
    const auto x = random_set(rng, n, max_points, max_coord);
    // Half the pairs are independent, half are small moves of x.
    DiagramSet y = x;
    if (trial % 2 == 0) {
      y = random_set(rng, n, max_points, max_coord);
    } else {
      const double scale = std::pow(10.0, uniform(rng, -3, 0));
      std::vector<Diagram> moved;
      for (const auto& d : x) {
        std::vector<PlanePoint> pts;
        for (const auto& p : d) {
          const double b = std::clamp(p.birth + uniform(rng, -scale, scale), 0.0, max_coord);
          const double e = std::clamp(p.death + uniform(rng, -scale, scale), 0.0, max_coord);
          pts.push_back({std::min(b, e), std::max(b, e)});
        }
        moved.emplace_back(std::move(pts));
      }
      y = DiagramSet(std::move(moved));
    }
    const auto mx = pfm(x, {alpha, 5000, derive_seed(1007, 2 * trial)});
    const auto my = pfm(y, {alpha, 5000, derive_seed(1007, 2 * trial + 1)});
    const double w = measure_wasserstein(mx, my).distance;
    const auto k = holder_constants(n, BoxBound{max_coord, max_points}, alpha);
    const double slack = 3 * std::hypot(monte_carlo_error(mx), monte_carlo_error(my));
    const double rhs = k.c_prime * std::sqrt(product_metric(x, y)) + slack;
    if (w > rhs) ++violations;
    if (rhs > 0) tightest = std::min(tightest, (rhs - w) / rhs);
  }
  return {violations == 0, fmt("50 pairs, violations %d, smallest relative margin %.3g", violations, tightest)};
}

Verdict vineyard_contrast() {
  const double alpha = 0.3;
  const BoxBound box{10, 2};
  const auto v21 = square_crossing_vineyard(21);
  const auto path = frechet_mean_path(v21);
  double jump = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) jump = std::max(jump, wasserstein(path[k], path[k + 1]).distance);

  const PerturbParams params{alpha, 5000, 1009};
  const auto r21 = continuity_report(vineyard_pfm(v21, params), v21, box, alpha);
  const auto v41 = square_crossing_vineyard(41);
  const auto r41 = continuity_report(vineyard_pfm(v41, params), v41, box, alpha);

  const bool ok = jump > std::sqrt(2.0) && r21.violations == 0 && r41.violations == 0 &&
                  r41.max_measure_step() < r21.max_measure_step();
  return {ok, fmt("mean jump %.4f (> %.4f), PFM bound violations %zu/%zu, max PFM step 21 frames %.4f -> 41 frames "
                  "%.4f",
                  jump, std::sqrt(2.0), r21.violations, r41.violations, r21.max_measure_step(),
                  r41.max_measure_step())};
}

std::vector<double> h1_persistences(const Diagram& d) {
  std::vector<double> out;
  for (const auto& p : d) out.push_back(p.death - p.birth);
  std::sort(out.rbegin(), out.rend());
  return out;
}

Verdict rips_sanity() {
  const auto start = std::chrono::steady_clock::now();
  const auto circle = sample_noisy_circle(50, 1.0, 0.1, 1010);
  const auto pers = h1_persistences(persistence(build_rips(circle, 2.5)).h1);
  const double second = pers.size() > 1 ? pers[1] : 0.0;
  std::size_t dominant = 0;
  for (double p : pers) dominant += p > 2.5 * second ? 1 : 0;

  DoubleAnnulus shape;
  shape.large_points = 300;
  shape.small_points = 200;
  const auto master = sample_double_annulus(shape, 1011);
  std::vector<Diagram> diagrams;
  for (const auto& cloud : subsample(master, 100, 30, 1012)) {
    diagrams.push_back(persistence(build_rips(cloud, 4.0)).h1);
  }
  const auto mu = pfm(DiagramSet(std::move(diagrams)), {0.3, 100, 1013});
  auto stacks = stack_heights(mu);
  std::size_t tall = 0;
  for (const auto& s : stacks) tall += s.height >= 0.99 ? 1 : 0;
  // The two loops are the two most persistent stacks; both must be full.
  std::sort(stacks.begin(), stacks.end(), [](const Stack& a, const Stack& b) {
    return a.point.death - a.point.birth > b.point.death - b.point.birth;
  });
  const bool loops_full = stacks.size() >= 2 && stacks[0].height >= 0.99 && stacks[1].height >= 0.99;
  const double third = stacks.size() > 2 ? stacks[2].point.death - stacks[2].point.birth : 0.0;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const bool ok = dominant == 1 && tall >= 2 && loops_full && secs < 300.0;
  return {ok, fmt("circle: %zu dominant H1 point(s), top persistences %.3f / %.3f; double annulus: %zu stacks >= 0.99, "
                  "two most persistent stacks at %.3f / %.3f (persistence %.3f / %.3f, third %.3f), %zu atoms, %.1f s",
                  dominant, pers.empty() ? 0.0 : pers[0], second, tall, stacks.size() > 0 ? stacks[0].height : 0.0,
                  stacks.size() > 1 ? stacks[1].height : 0.0,
                  stacks.size() > 0 ? stacks[0].point.death - stacks[0].point.birth : 0.0,
                  stacks.size() > 1 ? stacks[1].point.death - stacks[1].point.birth : 0.0, third, mu.atoms.size(),
                  secs)};
}

struct CliRun {
  int code = 0;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pdstat");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  return r;
}

// Every artifact of the sample -> rips -> pfm -> plot and vineyard pipeline.
std::vector<std::string> pipeline(const fs::path& dir, const std::string& threads, std::size_t& failures) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  auto keep = [&](const CliRun& r) {
    if (r.code != 0) ++failures;
    outputs.push_back(std::to_string(r.code) + "\n" + r.out);
    return r;
  };
  std::vector<std::string> diagram_files;
  for (int i = 0; i < 4; ++i) {
    const auto cloud = dir / ("cloud_" + std::to_string(i) + ".csv");
    const auto sample = keep(cli({"sample", "double-annulus", "--seed", std::to_string(40 + i)}));
    std::ofstream(cloud) << sample.out;
    const auto diagram = dir / ("h1_" + std::to_string(i) + ".csv");
    keep(cli({"rips", cloud.string(), "--max-radius", "4", "--out", diagram.string()}));
    outputs.push_back(read_text(diagram));
    diagram_files.push_back(diagram.string());
  }
  std::vector<std::string> pfm_args{"pfm"};
  pfm_args.insert(pfm_args.end(), diagram_files.begin(), diagram_files.end());
  for (const char* a : {"--alpha", "0.3", "--draws", "100", "--seed", "11", "--threads"}) pfm_args.emplace_back(a);
  pfm_args.push_back(threads);
  const auto measure = dir / "pfm.json";
  pfm_args.push_back("--out");
  pfm_args.push_back(measure.string());
  keep(cli(pfm_args));
  outputs.push_back(read_text(measure));
  keep(cli({"plot", measure.string()}));
  keep(cli({"mean", diagram_files[0], diagram_files[1], "--restarts", "3", "--seed", "5"}));
  keep(cli({"sample", "square-crossing", "--frames", "9", "--dir", (dir / "vine").string()}));
  keep(cli({"vineyard", (dir / "vine").string(), "--draws", "300", "--seed", "3", "--threads", threads}));
  return outputs;
}

Verdict determinism() {
  const auto base = fs::temp_directory_path() / "pdstat_acceptance";
  std::size_t failures = 0, differing = 0;
  const auto first = pipeline(base / "a", "1", failures);
  const auto second = pipeline(base / "b", "1", failures);
  const auto threaded = pipeline(base / "c", "4", failures);
  // Paths differ between the runs only through --out, which is not echoed.
  const bool same_shape = first.size() == second.size() && first.size() == threaded.size();
  for (std::size_t i = 0; same_shape && i < first.size(); ++i) {
    if (first[i] != second[i] || first[i] != threaded[i]) ++differing;
  }
  const bool ok = failures == 0 && differing == 0 && same_shape;
  return {ok, fmt("%zu artifacts compared across 3 runs (threads 1, 1, 4): %zu differ, %zu failed commands",
                  first.size(), differing, failures)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"Wasserstein oracle equivalence", wasserstein_oracle},
      {"metric axioms", metric_axioms},
      {"trivial-selection mean ratio", trivial_selection_ratio},
      {"close-matchings inequality", close_matchings},
      {"alternating matchings monotone and consistent", alternating_matchings},
      {"square fixture weights", square_weights},
      {"perturbation survival rate", survival_rates},
      {"Holder bound", holder_bound},
      {"vineyard discontinuity contrast", vineyard_contrast},
      {"Rips sanity", rips_sanity},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << v.detail
              << std::endl;
  }
  std::cout << (failed == 0 ? "all acceptance criteria pass" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
