#pragma once

#include <string>
#include <string_view>

#include "alpern/model.hpp"

namespace alpern {

inline constexpr std::string_view kReportFormat = "alpern-tower v1";

// JSON report: params (N, M, delta, per-column gamma and b), per-column
// selections as [block, subcolumn, level] triples for B, A and E, and every
// measure as a reduced "p/q" string. Output is byte-for-byte deterministic.
std::string write_tower_report(const ColumnSystem& system, const TowerResult& result);

// Reads a report back for `system`. Level lists are normalised to sorted sets.
// Throws Error(MalformedSelection) on schema problems.
TowerResult read_tower_report(const ColumnSystem& system, std::string_view text);

}  // namespace alpern
