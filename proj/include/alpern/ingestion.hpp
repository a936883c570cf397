#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "alpern/model.hpp"

namespace alpern {

// Rotation x -> x + p/q (mod 1) with cell j = [breakpoints[j-1], breakpoints[j]),
// the last cell wrapping to 1.
struct RotationSpec {
  std::int64_t p = 0;
  std::int64_t q = 1;
  std::vector<Ratio> breakpoints;
};

// Names "P1".."Pt".
PartitionSpec default_partition(int t);

// One column of height |labels| and width 1/|labels|, its top returning to
// its own base. Throws ZeroCell when a cell of `partition` never appears.
ColumnSystem build_cyclic(std::vector<Cell> labels, PartitionSpec partition);

// Level r carries the cell containing frac(r p / q). Throws BreakpointOffGrid
// for breakpoints off the 1/q grid and ZeroCell for cells without grid points.
ColumnSystem build_rotation(const RotationSpec& spec);

// Label sequences: compact digits (t <= 9 only) or comma-separated integers
// where "<cell>x<count>" repeats a cell.
std::vector<Cell> parse_labels(std::string_view text, int t);
std::string format_labels(const std::vector<Cell>& labels, int t);

inline constexpr std::string_view kSystemHeader = "alpern-system v1";

// Parses the `alpern-system v1` format and validates the result. Throws
// Error(Syntax) with the line number in where(), or Error(Validation) whose
// message carries the full validation report.
ColumnSystem parse_system(std::string_view text);
std::string serialize_system(const ColumnSystem& system);

}  // namespace alpern
