#include "pdstat/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "pdstat/io.hpp"

namespace pdstat {

std::vector<Stack> stack_heights(const DiagramMeasure& mu, double tolerance) {
  std::vector<Stack> stacks;
  for (std::size_t a = 0; a < mu.atoms.size(); ++a) {
    for (const auto& p : mu.atoms[a].diagram) {
      auto it = std::find_if(stacks.begin(), stacks.end(), [&](const Stack& s) {
        return std::abs(s.point.birth - p.birth) <= tolerance && std::abs(s.point.death - p.death) <= tolerance;
      });
      if (it == stacks.end()) {
        stacks.push_back({p, 0.0, {}});
        it = std::prev(stacks.end());
      }
      if (!it->segments.empty() && it->segments.back().atom == a) continue;
      it->segments.push_back({a, mu.atoms[a].weight});
      it->height += mu.atoms[a].weight;
    }
  }
  std::stable_sort(stacks.begin(), stacks.end(), [](const Stack& x, const Stack& y) {
    if (x.height != y.height) return x.height > y.height;
    return x.point < y.point;
  });
  return stacks;
}

namespace {

constexpr std::array<const char*, 8> kPalette = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                                 "#59a14f", "#edc948", "#b07aa1", "#9c755f"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Tick spacing of 1, 2 or 5 times a power of ten giving about five ticks.
double tick_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

void emit_stack_plot(std::ostream& out, const DiagramMeasure& mu, const PlotOptions& options) {
  const auto stacks = stack_heights(mu);
  double lo = 0.0, hi = 1.0;
  if (!stacks.empty()) {
    lo = hi = stacks.front().point.birth;
    for (const auto& s : stacks) {
      lo = std::min({lo, s.point.birth, s.point.death});
      hi = std::max({hi, s.point.birth, s.point.death});
    }
    const double pad = std::max(0.05 * (hi - lo), 0.5);
    lo = std::floor(lo - pad);
    hi = std::ceil(hi + pad);
  }

  const double margin = 60.0;
  const double w = options.width, h = options.height;
  const double plot_w = w - 2 * margin, plot_h = h - 2 * margin;
  auto sx = [&](double v) { return margin + (v - lo) / (hi - lo) * plot_w; };
  auto sy = [&](double v) { return h - margin - (v - lo) / (hi - lo) * plot_h; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(w) << "\" height=\"" << fixed(h)
      << "\" viewBox=\"0 0 " << fixed(w) << ' ' << fixed(h) << "\">\n";
  out << "<style>text{font-family:sans-serif;font-size:12px}.full{stroke:#000;stroke-width:2.5}</style>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (options.title) {
    out << "<text x=\"" << fixed(w / 2) << "\" y=\"24\" text-anchor=\"middle\">" << options.title << "</text>\n";
  }

  out << "<g class=\"axes\" stroke=\"#333\">\n";
  out << "<line x1=\"" << fixed(sx(lo)) << "\" y1=\"" << fixed(sy(lo)) << "\" x2=\"" << fixed(sx(hi)) << "\" y2=\""
      << fixed(sy(lo)) << "\"/>\n";
  out << "<line x1=\"" << fixed(sx(lo)) << "\" y1=\"" << fixed(sy(lo)) << "\" x2=\"" << fixed(sx(lo)) << "\" y2=\""
      << fixed(sy(hi)) << "\"/>\n";
  const double step = tick_step(hi - lo);
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9; t += step) {
    out << "<line x1=\"" << fixed(sx(t)) << "\" y1=\"" << fixed(sy(lo)) << "\" x2=\"" << fixed(sx(t)) << "\" y2=\""
        << fixed(sy(lo) + 5) << "\"/>";
    out << "<text x=\"" << fixed(sx(t)) << "\" y=\"" << fixed(sy(lo) + 18) << "\" text-anchor=\"middle\" stroke=\"none\">"
        << format_number(std::round(t / step) * step) << "</text>\n";
    out << "<line x1=\"" << fixed(sx(lo) - 5) << "\" y1=\"" << fixed(sy(t)) << "\" x2=\"" << fixed(sx(lo)) << "\" y2=\""
        << fixed(sy(t)) << "\"/>";
    out << "<text x=\"" << fixed(sx(lo) - 8) << "\" y=\"" << fixed(sy(t) + 4) << "\" text-anchor=\"end\" stroke=\"none\">"
        << format_number(std::round(t / step) * step) << "</text>\n";
  }
  out << "</g>\n";
  out << "<text x=\"" << fixed(margin + plot_w / 2) << "\" y=\"" << fixed(h - 15) << "\" text-anchor=\"middle\">birth</text>\n";
  out << "<text x=\"18\" y=\"" << fixed(margin + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fixed(margin + plot_h / 2) << ")\">death</text>\n";
  out << "<line class=\"diagonal\" x1=\"" << fixed(sx(lo)) << "\" y1=\"" << fixed(sy(lo)) << "\" x2=\"" << fixed(sx(hi))
      << "\" y2=\"" << fixed(sy(hi)) << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";

  // Tallest stacks first so short ones are drawn on top.
  for (const auto& s : stacks) {
    const double x = sx(s.point.birth), y = sy(s.point.death);
    out << "<g class=\"stack" << (s.full() ? " full-stack" : "") << "\" data-birth=\"" << format_number(s.point.birth)
        << "\" data-death=\"" << format_number(s.point.death) << "\" data-height=\"" << format_number(s.height)
        << "\">\n";
    double top = y;
    for (const auto& seg : s.segments) {
      const double len = seg.weight * options.stack_scale;
      out << "<rect x=\"" << fixed(x - 3) << "\" y=\"" << fixed(top - len) << "\" width=\"6\" height=\"" << fixed(len)
          << "\" fill=\"" << kPalette[seg.atom % kPalette.size()] << "\"/>\n";
      top -= len;
    }
    if (s.full()) {
      out << "<rect class=\"full\" x=\"" << fixed(x - 3) << "\" y=\"" << fixed(top) << "\" width=\"6\" height=\""
          << fixed(y - top) << "\" fill=\"none\"/>\n";
    }
    out << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(y) << "\" r=\"3\" fill=\"#000\"/>\n";
    out << "</g>\n";
  }
  out << "</svg>\n";
}

void write_stacks_csv(std::ostream& out, const std::vector<Stack>& stacks) {
  out << "birth,death,height,atoms\n";
  for (const auto& s : stacks) {
    out << format_number(s.point.birth) << ',' << format_number(s.point.death) << ',' << format_number(s.height) << ','
        << s.segments.size() << '\n';
  }
}

}  // namespace pdstat
