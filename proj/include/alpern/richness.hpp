#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "alpern/model.hpp"

namespace alpern {

// Smallest integer strictly greater than 3 N^3 t / m1.
std::int64_t required_M(int N, int t, const Ratio& m1);

struct ColumnRichness {
  std::string column_id;
  std::int64_t min_occurrences = 0;
  bool rich = false;
};

struct RichnessReport {
  std::int64_t M = 0;
  std::vector<ColumnRichness> columns;

  bool rich() const;
};

// A column is rich when every cell appears at least M times in its name.
RichnessReport is_rich(const ColumnSystem& system, std::int64_t M);

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
};

// Convergents p_k/q_k of [0; a_1, a_2, ...], in order.
std::vector<Convergent> convergents(std::span<const std::int64_t> terms);

// Maps a grid denominator q to breakpoints on the 1/q grid.
using BreakpointRule = std::function<std::vector<Ratio>(std::int64_t q)>;

// Breakpoints floor(k q / t) / q for k = 0..t-1.
BreakpointRule equal_breakpoints(int t);

struct EnrichedRotation {
  ColumnSystem system;
  Convergent convergent;
  std::int64_t M = 0;
};

// First convergent whose rotation system is rich for required_M(N, t, m1).
// Convergents the rule cannot place (too few grid points) are skipped.
// Throws Exhausted if none qualifies.
EnrichedRotation enrich_rotation(std::span<const std::int64_t> terms, const BreakpointRule& rule, int N, int t);

}  // namespace alpern
