#include "pdstat/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdstat/frechet.hpp"
#include "pdstat/io.hpp"
#include "pdstat/measure_ot.hpp"
#include "pdstat/pfm.hpp"
#include "pdstat/plot.hpp"
#include "pdstat/rips.hpp"
#include "pdstat/vineyard.hpp"

namespace pdstat::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t threads = 1;
};

std::uint64_t seed_from_env() {
  const char* env = std::getenv("PDSTAT_SEED");
  if (!env) return 0;
  const std::string_view s(env);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw UsageError("PDSTAT_SEED must be a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t effective_seed(const Common& c) { return c.seed_given ? c.seed : seed_from_env(); }

void emit_text(const std::string& text, const Common& c, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw UsageError(c.out_path + ": cannot open for writing");
  f << text;
}

void emit_json(const Json& j, const Common& c, std::ostream& out) { emit_text(j.dump(2) + "\n", c, out); }

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

Json number_or_inf(double v) { return std::isinf(v) ? Json("inf") : Json(v); }

std::vector<fs::path> as_paths(const std::vector<std::string>& files) { return {files.begin(), files.end()}; }

Json frechet_to_json(const FrechetResult& r) {
  return {{"mean", diagram_to_json(r.mean)},
          {"grouping", grouping_to_json(r.grouping)},
          {"value", r.value},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"history", r.history}};
}

void add_common(CLI::App* sub, Common& c, bool with_seed, bool with_threads) {
  sub->add_option("-o,--out", c.out_path, "Write the result here instead of stdout");
  if (with_seed) {
    sub->add_option("--seed", c.seed, "Random seed (default: $PDSTAT_SEED, else 0)")
        ->each([&c](const std::string&) { c.seed_given = true; });
  }
  if (with_threads) sub->add_option("--threads", c.threads, "Worker threads, 0 = all cores")->capture_default_str();
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistics of persistence diagrams: distances, Frechet means, probabilistic Frechet means", "pdstat"};
  app.require_subcommand(1);
  Common common;

  // dist
  auto* dist = app.add_subcommand("dist", "Wasserstein distance W_p[L_q] between two diagrams");
  std::string dist_a, dist_b, p_text = "2";
  double q = 2.0;
  dist->add_option("a", dist_a, "First diagram file")->required();
  dist->add_option("b", dist_b, "Second diagram file")->required();
  dist->add_option("--p", p_text, "Wasserstein exponent, or 'inf' for bottleneck")->capture_default_str();
  dist->add_option("--q", q, "Ground L_q norm (use a large value for L_inf)")->capture_default_str();
  add_common(dist, common, false, false);

  // mean
  auto* mean = app.add_subcommand("mean", "Frechet mean by alternating matchings and grouping means");
  std::vector<std::string> mean_files;
  FrechetOptions frechet_options;
  bool exact_mean = false;
  mean->add_option("files", mean_files, "Diagram files, or one file with '--- diagram <i>' separators")->required();
  mean->add_option("--restarts", frechet_options.restarts, "Number of runs")->capture_default_str();
  mean->add_option("--max-iter", frechet_options.max_iter, "Iteration cap per run")->capture_default_str();
  mean->add_flag("--random-init", frechet_options.random_init, "Seeded random starting diagram for every run");
  mean->add_flag("--exact", exact_mean, "Exhaustive grouping search (small inputs only)");
  add_common(mean, common, true, false);

  // pfm
  auto* pfm_cmd = app.add_subcommand("pfm", "Probabilistic Frechet mean by perturbation sampling");
  std::vector<std::string> pfm_files;
  PerturbParams perturb;
  PfmOptions pfm_options;
  pfm_cmd->add_option("files", pfm_files, "Diagram files, or one file with '--- diagram <i>' separators")->required();
  auto add_perturb = [&](CLI::App* sub) {
    sub->add_option("--alpha", perturb.alpha, "Perturbation radius")->capture_default_str();
    sub->add_option("--draws", perturb.draws, "Number of perturbation draws")->capture_default_str();
    sub->add_option("--exact-threshold", pfm_options.exact_threshold,
                    "Draws with at most this many points are grouped exactly")
        ->capture_default_str();
    sub->add_option("--restarts", pfm_options.restarts, "Frechet-mean runs for larger draws")->capture_default_str();
  };
  add_perturb(pfm_cmd);
  add_common(pfm_cmd, common, true, true);

  // vineyard
  auto* vine = app.add_subcommand("vineyard", "Per-frame PFMs of a vineyard and their continuity diagnostics");
  std::string vine_path;
  BoxBound box{10.0, 2};
  vine->add_option("path", vine_path, "Directory of frame files plus times.csv, or a JSON bundle")->required();
  add_perturb(vine);
  vine->add_option("--M", box.max_coord, "Coordinate bound of the diagram space")->capture_default_str();
  vine->add_option("--K", box.max_points, "Point bound of the diagram space")->capture_default_str();
  add_common(vine, common, true, true);

  // rips
  auto* rips = app.add_subcommand("rips", "Vietoris-Rips persistence diagram of a point cloud");
  std::string cloud_path;
  double max_radius = 2.0;
  std::size_t homology = 1;
  rips->add_option("cloud", cloud_path, "Point cloud CSV")->required();
  rips->add_option("--max-radius", max_radius, "Filtration cap; essential classes die here")->capture_default_str();
  rips->add_option("--dim", homology, "Homology dimension to write")->check(CLI::IsMember({0, 1}))->capture_default_str();
  add_common(rips, common, false, false);

  // plot
  auto* plot = app.add_subcommand("plot", "Stacked-weight SVG of a PFM");
  std::string measure_path, csv_path, title;
  plot->add_option("measure", measure_path, "PFM JSON")->required();
  plot->add_option("--csv", csv_path, "Also write the stack heights as CSV");
  plot->add_option("--title", title, "Chart title");
  add_common(plot, common, false, false);

  // sample
  auto* sample = app.add_subcommand("sample", "Seeded fixtures: point clouds and a vineyard");
  sample->require_subcommand(1);
  std::size_t n_points = 50;
  double radius = 1.0, noise = 0.1, inner = 0.8, outer = 1.2;
  auto* circle = sample->add_subcommand("circle", "Noisy circle");
  circle->add_option("--points", n_points)->capture_default_str();
  circle->add_option("--radius", radius)->capture_default_str();
  circle->add_option("--noise", noise)->capture_default_str();
  add_common(circle, common, true, false);
  auto* annulus = sample->add_subcommand("annulus", "Annulus, uniform by area");
  annulus->add_option("--points", n_points)->capture_default_str();
  annulus->add_option("--inner", inner)->capture_default_str();
  annulus->add_option("--outer", outer)->capture_default_str();
  add_common(annulus, common, true, false);
  auto* double_annulus = sample->add_subcommand("double-annulus", "Large and small annulus side by side");
  DoubleAnnulus shape;
  double_annulus->add_option("--large-points", shape.large_points)->capture_default_str();
  double_annulus->add_option("--large-inner", shape.large_inner)->capture_default_str();
  double_annulus->add_option("--large-outer", shape.large_outer)->capture_default_str();
  double_annulus->add_option("--small-points", shape.small_points)->capture_default_str();
  double_annulus->add_option("--small-inner", shape.small_inner)->capture_default_str();
  double_annulus->add_option("--small-outer", shape.small_outer)->capture_default_str();
  double_annulus->add_option("--small-center", shape.small_center_x, "x of the small annulus center")
      ->capture_default_str();
  add_common(double_annulus, common, true, false);
  auto* crossing = sample->add_subcommand("square-crossing", "Vineyard passing through the square configuration");
  std::size_t frames = 21;
  crossing->add_option("--frames", frames)->capture_default_str();
  crossing->add_option("--dir", vine_path, "Write frame files here instead of a JSON bundle");
  add_common(crossing, common, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*dist) {
      const auto a = read_diagram(dist_a);
      const auto b = read_diagram(dist_b);
      const double p = parse_p(p_text);
      Json result;
      if (std::isinf(p)) {
        result = {{"distance", bottleneck(a, b, q)}, {"matching", nullptr}};
      } else {
        MetricParams params{p, q};
        params.validate();
        const auto w = wasserstein(a, b, params);
        result = {{"distance", w.distance}, {"matching", matching_to_json(w.matching)}};
      }
      result["p"] = number_or_inf(p);
      result["q"] = number_or_inf(q);
      emit_json(result, common, out);
    } else if (*mean) {
      const auto x = read_diagram_sets(as_paths(mean_files));
      if (exact_mean) {
        const auto best = min_cost_grouping(x);
        const auto m = grouping_mean(best.grouping, x);
        emit_json({{"mean", diagram_to_json(m)},
                   {"grouping", grouping_to_json(best.grouping)},
                   {"value", frechet_function(m, x)},
                   {"exact", true}},
                  common, out);
      } else {
        frechet_options.seed = effective_seed(common);
        auto j = frechet_to_json(frechet_mean(x, frechet_options));
        j["exact"] = false;
        emit_json(j, common, out);
      }
    } else if (*pfm_cmd) {
      const auto x = read_diagram_sets(as_paths(pfm_files));
      perturb.seed = effective_seed(common);
      perturb.validate();
      pfm_options.threads = common.threads;
      emit_json(measure_to_json(pfm(x, perturb, pfm_options), perturb), common, out);
    } else if (*vine) {
      const auto v = read_vineyard(vine_path);
      perturb.seed = effective_seed(common);
      perturb.validate();
      pfm_options.threads = common.threads;
      const auto measures = vineyard_pfm(v, perturb, pfm_options);
      const auto report = continuity_report(measures, v, box, perturb.alpha);
      Json steps = Json::array();
      for (const auto& s : report.steps) {
        steps.push_back({{"dt", s.dt},
                         {"d2", s.d2},
                         {"measure_w2", s.measure_w2},
                         {"bound", s.bound},
                         {"slack", s.slack},
                         {"within_bound", s.within_bound}});
      }
      Json fit = nullptr;
      if (report.fit) {
        fit = {{"exponent", report.fit->exponent},
               {"standard_error", report.fit->standard_error},
               {"samples", report.fit->samples}};
      }
      Json frames_json = Json::array();
      for (std::size_t k = 0; k < measures.size(); ++k) {
        frames_json.push_back({{"time", v.times[k]}, {"measure", measure_to_json(measures[k])}});
      }
      emit_json({{"alpha", perturb.alpha},
                 {"draws", perturb.draws},
                 {"seed", perturb.seed},
                 {"constants",
                  {{"diameter", report.constants.diameter},
                   {"c", report.constants.c},
                   {"c_prime", report.constants.c_prime}}},
                 {"steps", std::move(steps)},
                 {"violations", report.violations},
                 {"fit", std::move(fit)},
                 {"frames", std::move(frames_json)}},
                common, out);
    } else if (*rips) {
      const auto cloud = read_point_cloud(cloud_path);
      const auto result = persistence(build_rips(cloud, max_radius, homology + 1));
      std::ostringstream text;
      write_capped_diagram(text, homology == 0 ? result.h0 : result.h1, result.cap);
      emit_text(text.str(), common, out);
    } else if (*plot) {
      const auto mu = measure_from_json(read_json(measure_path));
      std::ostringstream svg;
      PlotOptions options;
      if (!title.empty()) options.title = title.c_str();
      emit_stack_plot(svg, mu, options);
      emit_text(svg.str(), common, out);
      if (!csv_path.empty()) {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw UsageError(csv_path + ": cannot open for writing");
        write_stacks_csv(f, stack_heights(mu));
      }
    } else if (*sample) {
      PointCloud cloud;
      if (*circle) {
        cloud = sample_noisy_circle(n_points, radius, noise, effective_seed(common));
      } else if (*annulus) {
        cloud = sample_annulus(n_points, inner, outer, 0.0, 0.0, effective_seed(common));
      } else if (*double_annulus) {
        cloud = sample_double_annulus(shape, effective_seed(common));
      } else {
        const auto v = square_crossing_vineyard(frames);
        if (vine_path.empty()) {
          emit_json(vineyard_to_json(v), common, out);
        } else {
          write_vineyard_dir(vine_path, v);
        }
        return kExitOk;
      }
      std::ostringstream text;
      write_point_cloud(text, cloud);
      emit_text(text.str(), common, out);
    }
  } catch (const UsageError& e) {
    err << "pdstat: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "pdstat: input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "pdstat: invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "pdstat: invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "pdstat: input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "pdstat: computation failed: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitOk;
}

}  // namespace pdstat::cli
