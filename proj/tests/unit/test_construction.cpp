#include "doctest.h"

#include <algorithm>
#include <set>

#include "alpern/construction.hpp"
#include "alpern/ingestion.hpp"
#include "alpern/verification.hpp"
#include "fixtures.hpp"

using namespace alpern;

TEST_CASE("compute_delta") {
  CHECK(compute_delta(1) == 0);
  CHECK(compute_delta(2) == 2);
  CHECK(compute_delta(3) == 4);
  CHECK(compute_delta(4) == 12);
  CHECK(compute_delta(5) == 24);
}

TEST_CASE("compute_gamma") {
  CHECK(compute_gamma(1540, 4, 2, 12, Ratio(1, 2)) == 24);
  CHECK(compute_gamma(1001, 4, 3, 12, Ratio(1, 3)) == 37);
  CHECK(compute_gamma(1000, 2, 2, 2, Ratio(1, 2)) == 4);
  // Window start is a ceiling: 12 / (5/7) = 16.8.
  CHECK(compute_gamma(1540, 4, 2, 12, Ratio(5, 7)) == 20);
}

TEST_CASE("compute_b") {
  const std::vector<Ratio> half{Ratio(1, 2), Ratio(1, 2)};
  CHECK(compute_b(half, 24, 12, 2) == half);
  const std::vector<Ratio> thirds{Ratio(1, 3), Ratio(2, 3)};
  const auto b = compute_b(thirds, 36, 12, 2);
  CHECK(b == std::vector<Ratio>{Ratio(1, 6), Ratio(5, 6)});
  CHECK(b[0] + b[1] == Ratio(1));
  CHECK_ERROR(compute_b(half, 2, 12, 2), ErrorCode::NegativeMass);
  CHECK(compute_b(std::vector<Ratio>{Ratio(1)}, 5, 4, 1) == std::vector<Ratio>{Ratio(1)});
  CHECK(compute_b(half, 0, 0, 2) == half);
}

TEST_CASE("bottom staircase") {
  CHECK(bottom_staircase(4) == Staircase{{0, 4, 8, 12}, {0, 4, 8, 13}, {0, 4, 9, 14}, {0, 5, 10, 15}});
  CHECK(bottom_staircase(2) == Staircase{{0, 2}, {0, 3}});
  CHECK(bottom_staircase(3) == Staircase{{0, 3, 6}, {0, 3, 7}, {0, 4, 8}});
  CHECK(bottom_staircase(1) == Staircase{{0}});
}

TEST_CASE("top staircase") {
  const Level R = 1540;
  CHECK(top_staircase(4, R) ==
        Staircase{{R - 15, R - 10, R - 5}, {R - 14, R - 9, R - 4}, {R - 13, R - 8, R - 4}, {R - 12, R - 8, R - 4}});
  CHECK(top_staircase(2, 100) == Staircase{{97}, {98}});
  CHECK_ERROR(top_staircase(4, 35), ErrorCode::TooShort);
  CHECK_NOTHROW(top_staircase(4, 36));
}

TEST_CASE("top staircase mirrors the bottom") {
  for (int N = 1; N <= 7; ++N) {
    const Level R = 1000;
    std::multiset<Level> bottom, top;
    for (const auto& sub : bottom_staircase(N))
      for (Level l : sub)
        if (l != 0) bottom.insert(l);
    for (const auto& sub : top_staircase(N, R))
      for (Level l : sub) top.insert(R - l);
    CAPTURE(N);
    CHECK(top == bottom);
  }
}

namespace {

SplitColumn alternating_split() {
  const auto s = fixtures::alternating_system();
  return SplitColumn(s.columns[0], 4, {Ratio(1, 2), Ratio(1, 2)});
}

}  // namespace

TEST_CASE("select_column on the alternating column") {
  const auto split = alternating_split();
  const auto blocks = select_column(split, 24, 12);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].net_skips == std::vector<std::int64_t>{24, 12});
  CHECK(blocks[1].net_skips == std::vector<std::int64_t>{12, 24});
  for (const auto& sel : blocks) {
    CHECK(sel.middle_skips == 24 + 12 - 3);
    CHECK(count_middle_skips(split.column(), 4, sel) == sel.middle_skips);
    CHECK(audit_net_skips(split.column(), 2, sel, 24, 12).net == sel.net_skips);
    // Staircases at both ends.
    const auto bottom = bottom_staircase(4);
    const auto top = top_staircase(4, 1540);
    for (int j = 0; j < 4; ++j) {
      const auto& levels = sel.b[static_cast<std::size_t>(j)];
      CHECK(std::equal(bottom[j].begin(), bottom[j].end(), levels.begin()));
      CHECK(std::equal(top[j].rbegin(), top[j].rend(), levels.rbegin()));
    }
  }
}

TEST_CASE("select_column: no middle candidates") {
  // Cell 2 appears only at the very top, where the staircase leaves it unselected.
  std::vector<Cell> labels(60, 1);
  labels.back() = 2;
  const SplitColumn split(Column{"c", Ratio(1, 60), labels}, 3, {Ratio(1, 2), Ratio(1, 2)});
  CHECK_ERROR(select_column(split, 4, 4), ErrorCode::QuotaUnmet);
}

TEST_CASE("select_A") {
  const auto split = alternating_split();
  auto blocks = select_column(split, 24, 12);
  auto sel = blocks[0];
  select_A(split, sel, 24, 12);
  std::int64_t count = 0, ones = 0;
  for (std::size_t j = 0; j < sel.a.size(); ++j) {
    for (Level l : sel.a[j]) {
      ++count;
      if (split.column().labels[static_cast<std::size_t>(l)] == 1) ++ones;
      CHECK_FALSE(std::binary_search(sel.b[j].begin(), sel.b[j].end(), l));
    }
  }
  CHECK(count == 36);
  CHECK(ones == 24);

  auto again = blocks[0];
  select_A(split, again, 24, 12);
  CHECK(again == sel);

  auto none = blocks[0];
  select_A(split, none, 0, 0);
  for (const auto& sub : none.a) CHECK(sub.empty());
}

TEST_CASE("build_tower: alternating column, N = 4") {
  const auto s = fixtures::alternating_system();
  const auto result = build_tower(s, 4);
  CHECK(result.params.N == 4);
  CHECK(result.params.M == 769);
  CHECK(result.params.delta == 12);
  REQUIRE(result.params.columns.size() == 1);
  CHECK(result.params.columns[0].gamma == 24);
  CHECK(result.params.columns[0].b == std::vector<Ratio>{Ratio(1, 2), Ratio(1, 2)});
  CHECK(result.measures.base + result.measures.extra == Ratio(1, 4));
  CHECK(result.measures.base_by_cell[0] == result.measures.base / Ratio(2));
  CHECK(Ratio(4) * result.measures.base_short + Ratio(5) * result.measures.base_long == Ratio(1));
  CHECK(tower_measures(s, result.params, result.columns) == result.measures);
}

TEST_CASE("build_tower: N = 1 covers everything") {
  const auto s = fixtures::alternating_system(20);
  const auto result = build_tower(s, 1);
  CHECK(result.measures.base == Ratio(1));
  CHECK(result.measures.error == Ratio(0));
  CHECK(result.measures.extra == Ratio(0));
  CHECK(verify_tower(s, result).verdicts().all());
}

TEST_CASE("build_tower: richness gate") {
  const auto fifths = build_rotation({2, 5, {Ratio(0), Ratio(3, 5)}});
  CHECK_ERROR(build_tower(fifths, 4), ErrorCode::NotRich);
  CHECK_ERROR(build_tower(fixtures::alternating_system(20), 4), ErrorCode::NotRich);
  // Forced past the gate, a height-20 column is simply too short.
  CHECK_ERROR(build_tower(fixtures::alternating_system(20), 4, {.allow_small_M = true}), ErrorCode::TooShort);
}

TEST_CASE("build_tower: errors name the column") {
  try {
    (void)build_tower(fixtures::alternating_system(20), 4, {.allow_small_M = true});
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.where().find("c0") != std::string::npos);
  }
}
