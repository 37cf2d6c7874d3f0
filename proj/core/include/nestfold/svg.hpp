#pragma once

#include <string>
#include <vector>

#include "nestfold/complexes.hpp"
#include "nestfold/labeling.hpp"
#include "nestfold/walk.hpp"

namespace nestfold {

struct SvgStyle {
  double scale = 120.0;  // pixels per unit length
  double margin = 24.0;
  int precision = 2;     // decimals in coordinates
  double font_size = 13.0;
  std::string fill = "#e8eef5";
  std::string stroke = "#2b3a4a";
  std::string label_color = "#8a1c1c";
  std::string highlight = "#d62828";
  std::string path_color = "#1d6fa5";
};

// Letters a, b, c, ... for labels below 26, numbers beyond.
std::string label_name(int label);

std::string render_window_svg(const Window& window, const SvgStyle& style = {});

// Labels may be empty (no annotations). A conflict vertex is circled and
// annotated with both forced labels.
std::string render_labeling_svg(const Window& window, const std::vector<int>& labels,
                                const Conflict* conflict, const SvgStyle& style = {});

// Polylines of archived paths over the grid's complexes. `folded` draws the
// folded coordinates inside K^<M> instead of the raw ones.
std::string render_paths_svg(const GridGraph& grid, const FoldIndex& fold,
                             const std::vector<PathRecord>& archive, bool folded,
                             const SvgStyle& style = {});

}  // namespace nestfold
