#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "pdstat/diagram.hpp"
#include "pdstat/pfm.hpp"

namespace pdstat {

inline constexpr double kStackMergeTolerance = 1e-9;

struct StackSegment {
  std::size_t atom = 0;
  double weight = 0.0;
};

/// All atoms whose diagram contains `point`; height is their summed weight.
struct Stack {
  PlanePoint point;
  double height = 0.0;
  std::vector<StackSegment> segments;

  [[nodiscard]] bool full() const { return height >= 1.0 - 1e-9; }
};

/// Points of all atom diagrams merged within `tolerance` in each coordinate.
/// An atom counts once per stack. Sorted by height (descending), then point.
std::vector<Stack> stack_heights(const DiagramMeasure& mu, double tolerance = kStackMergeTolerance);

struct PlotOptions {
  double width = 640.0;
  double height = 640.0;
  /// Pixel height of a stack of weight one.
  double stack_scale = 60.0;
  const char* title = nullptr;
};

/// SVG scatter of the stacks over the birth/death plane with the diagonal.
void emit_stack_plot(std::ostream& out, const DiagramMeasure& mu, const PlotOptions& options = {});

/// birth,death,height,atoms
void write_stacks_csv(std::ostream& out, const std::vector<Stack>& stacks);

}  // namespace pdstat
