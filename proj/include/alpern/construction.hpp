#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "alpern/model.hpp"

namespace alpern {

// max(2(N-1)(N-2), 2(N-1)) for N >= 2, and 0 for N = 1.
std::int64_t compute_delta(int N);

// The unique gamma in [delta/m1, delta/m1 + N) with (t-1) delta + gamma = R (mod N).
std::int64_t compute_gamma(Level R, int N, int t, std::int64_t delta, const Ratio& m1);

// b_j = (m_j (gamma + (t-1) delta) - delta) / (gamma - delta); b = m when
// t = 1 or gamma = delta = 0. Throws NegativeMass when gamma sits below the
// window.
std::vector<Ratio> compute_b(std::span<const Ratio> m, std::int64_t gamma, std::int64_t delta, int t);

// Selected levels per subcolumn (index sub - 1), ascending.
using Staircase = std::vector<std::vector<Level>>;

// Subcolumn j selects 0, then N-j gaps of N, then j-1 gaps of N+1.
Staircase bottom_staircase(int N);

// Mirror of the bottom staircase hanging from the top; subcolumn j takes
// R - l for l >= N in bottom subcolumn N+1-j. Throws TooShort if R < 2N^2 + N.
Staircase top_staircase(int N, Level R);

// B-selections for every block of a split column. Each block gets the two
// staircases plus a greedy middle: walk up from level N^2 and skip a level
// (select nothing and delay the pattern) whenever its cell still owes skips
// and the previous skip is at least N+1 levels below, skips being allowed up
// to R - N^2 - N. Cell j owes delta net skips in block i != j and gamma in
// block j.
std::vector<RungSelection> select_column(const SplitColumn& split, std::int64_t gamma, std::int64_t delta);

// Fills selection.a: gamma rungs in cell `block` and delta in every other cell,
// disjoint from selection.b, taking the first free rung scanning levels
// bottom-up and subcolumns left to right.
void select_A(const SplitColumn& split, RungSelection& selection, std::int64_t gamma, std::int64_t delta);

// E = T^N B_{N+1}: the rung N above every B-rung whose next B-rung (or the
// seam) is N+1 levels up.
void fill_error_set(const Column& column, int N, RungSelection& selection);

struct BuildOptions {
  // Proceed even when the system is not rich for required_M.
  bool allow_small_M = false;
};

TowerResult build_tower(const ColumnSystem& system, int N, BuildOptions options = {});

// Exact measures of a (possibly hand-edited) result, from rung counts and
// within-subcolumn gaps.
TowerMeasures tower_measures(const ColumnSystem& system, const ConstructionParams& params,
                             const std::vector<ColumnSelection>& columns);

}  // namespace alpern
