#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "alpern/model.hpp"

namespace alpern {

struct LevelRange {
  Level first = 0;
  Level last = 0;  // inclusive
};

// "a..b" where each end is an integer, "R", or "R-k" / "R+k" relative to the
// column height R. Throws Error(Syntax) when malformed or outside 0..R-1.
LevelRange parse_level_range(std::string_view text, Level R);

struct RenderOptions {
  std::optional<std::string> column;  // default: first column
  std::optional<int> block;           // default: every block
  std::optional<LevelRange> levels;   // default: 0..R-1
  int subcolumns = 1;                 // used only without a selection
};

// One row per level, highest first; one character per subcolumn:
// '#' B-rung, 'A' A-rung, '-' otherwise. Blocks are separated by '|'.
std::string render_ascii(const ColumnSystem& system, const TowerResult* result, const RenderOptions& options);

// Same layout as SVG 1.1: each rung a short horizontal stroke, thick for
// B-rungs, medium for A-rungs, hairline otherwise.
std::string render_svg(const ColumnSystem& system, const TowerResult* result, const RenderOptions& options);

}  // namespace alpern
