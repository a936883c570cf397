#pragma once

#include <string>
#include <vector>

#include "alpern/error.hpp"
#include "alpern/ingestion.hpp"
#include "doctest.h"

// Checks that `expr` throws alpern::Error with the given code.
#define CHECK_ERROR(expr, expected)                                  \
  do {                                                               \
    try {                                                            \
      (void)(expr);                                                  \
      FAIL_CHECK("no error, expected " << alpern::to_string(expected)); \
    } catch (const alpern::Error& e_) {                              \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());             \
    }                                                                \
  } while (0)

namespace fixtures {

inline std::vector<alpern::Cell> alternating(std::size_t height) {
  std::vector<alpern::Cell> labels(height);
  for (std::size_t r = 0; r < height; ++r) labels[r] = static_cast<alpern::Cell>(r % 2 + 1);
  return labels;
}

inline std::vector<alpern::Cell> runs(std::initializer_list<std::pair<alpern::Cell, std::size_t>> parts) {
  std::vector<alpern::Cell> labels;
  for (const auto& [cell, count] : parts) labels.insert(labels.end(), count, cell);
  return labels;
}

inline alpern::ColumnSystem alternating_system(std::size_t height = 1540) {
  return alpern::build_cyclic(alternating(height), alpern::default_partition(2));
}

// Two columns of heights 600 and 700 feeding each other, total mass 1.
inline alpern::ColumnSystem two_column_system() {
  using alpern::Ratio;
  alpern::ColumnSystem s;
  s.partition = alpern::default_partition(2);
  std::vector<alpern::Cell> a, b;
  for (int r = 0; r < 600; ++r) a.push_back((r % 3 == 0) ? 2 : 1);
  for (int r = 0; r < 700; ++r) b.push_back((r % 2 == 0) ? 1 : 2);
  // widths w1, w2 with 600 w1 + 700 w2 = 1: w1 = 1/1200, w2 = 1/1400.
  s.columns.push_back({"lo", Ratio(1, 1200), a});
  s.columns.push_back({"hi", Ratio(1, 1400), b});
  // Flow: lo -> {lo, hi}, hi -> {lo, hi} with inflow = outflow = width.
  s.edges.push_back({"lo", 0, "hi", Ratio(1, 2400)});
  s.edges.push_back({"lo", 1, "lo", Ratio(1, 2400)});
  s.edges.push_back({"hi", 0, "lo", Ratio(1, 2400)});
  s.edges.push_back({"hi", 1, "hi", Ratio(1, 1400) - Ratio(1, 2400)});
  return s;
}

}  // namespace fixtures
