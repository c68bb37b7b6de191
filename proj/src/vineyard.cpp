#include "pdstat/vineyard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pdstat/frechet.hpp"
#include "pdstat/random.hpp"

namespace pdstat {

void Vineyard::validate() const {
  if (frames.empty()) throw std::invalid_argument("vineyard has no frames");
  if (times.size() != frames.size()) throw std::invalid_argument("vineyard needs one time per frame");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw std::invalid_argument("vineyard times must be strictly increasing");
  }
  for (const auto& f : frames) {
    if (f.size() != frames.front().size() || f.empty()) {
      throw std::invalid_argument("every vineyard frame needs the same, nonzero number of diagrams");
    }
  }
}

std::vector<DiagramMeasure> vineyard_pfm(const Vineyard& v, const PerturbParams& params, const PfmOptions& options) {
  v.validate();
  std::vector<DiagramMeasure> out;
  out.reserve(v.frames.size());
  for (std::size_t k = 0; k < v.frames.size(); ++k) {
    PerturbParams frame_params = params;
    frame_params.seed = derive_seed(params.seed, k);
    out.push_back(pfm(v.frames[k], frame_params, options));
  }
  return out;
}

std::vector<Diagram> frechet_mean_path(const Vineyard& v) {
  v.validate();
  std::vector<Diagram> out;
  out.reserve(v.frames.size());
  for (const auto& frame : v.frames) out.push_back(frechet_mean(frame).mean);
  return out;
}

std::optional<PowerFit> fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law needs equally long samples");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const std::size_t n = lx.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx < 1e-12) return std::nullopt;
  PowerFit fit;
  fit.exponent = sxy / sxx;
  fit.samples = n;
  if (n > 2) {
    const double intercept = my - fit.exponent * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - (intercept + fit.exponent * lx[i]);
      ss_res += r * r;
    }
    fit.standard_error = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

double ContinuityReport::max_measure_step() const {
  double best = 0.0;
  for (const auto& s : steps) best = std::max(best, s.measure_w2);
  return best;
}

ContinuityReport continuity_report(std::span<const DiagramMeasure> measures, const Vineyard& v,
                                   const BoxBound& bound, double alpha) {
  v.validate();
  if (v.frames.size() < 2) throw std::invalid_argument("continuity report needs at least two frames");
  if (measures.size() != v.frames.size()) throw std::invalid_argument("need one measure per vineyard frame");

  ContinuityReport report;
  report.constants = holder_constants(v.frames.front().size(), bound, alpha);
  std::vector<double> errors;
  errors.reserve(measures.size());
  for (const auto& m : measures) errors.push_back(monte_carlo_error(m));

  std::vector<double> d2s, w2s;
  for (std::size_t k = 0; k + 1 < v.frames.size(); ++k) {
    ContinuityStep step;
    step.dt = v.times[k + 1] - v.times[k];
    step.d2 = product_metric(v.frames[k], v.frames[k + 1]);
    step.measure_w2 = measure_wasserstein(measures[k], measures[k + 1]).distance;
    step.bound = report.constants.c_prime * std::sqrt(step.d2);
    step.slack = 3.0 * std::hypot(errors[k], errors[k + 1]);
    step.within_bound = step.measure_w2 <= step.bound + step.slack;
    if (!step.within_bound) ++report.violations;
    d2s.push_back(step.d2);
    w2s.push_back(step.measure_w2);
    report.steps.push_back(step);
  }
  report.fit = fit_power_law(d2s, w2s);
  return report;
}

Vineyard square_crossing_vineyard(std::size_t frames) {
  if (frames < 2) throw std::invalid_argument("square crossing needs at least two frames");
  constexpr double kCenterBirth = 3.0;
  constexpr double kCenterDeath = 7.0;
  Vineyard v;
  for (std::size_t k = 0; k < frames; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(frames - 1);
    const double s = 2.0 * t;
    const double width = s <= 1.0 ? 2.0 : 1.0 + s;
    const double height = s <= 1.0 ? 3.0 - s : 2.0;
    const double b0 = kCenterBirth - width / 2, b1 = kCenterBirth + width / 2;
    const double d0 = kCenterDeath - height / 2, d1 = kCenterDeath + height / 2;
    v.times.push_back(t);
    v.frames.push_back(DiagramSet{Diagram{{b0, d0}, {b1, d1}}, Diagram{{b0, d1}, {b1, d0}}});
  }
  return v;
}

}  // namespace pdstat
