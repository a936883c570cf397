#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alpern/ratio.hpp"

namespace alpern {

// Partition cells are numbered 1..t throughout the public API.
using Cell = int;
using Level = std::int64_t;

struct PartitionSpec {
  std::vector<std::string> names;

  int t() const { return static_cast<int>(names.size()); }
  friend bool operator==(const PartitionSpec&, const PartitionSpec&) = default;
};

// A column of R stacked levels over a base of the given width; labels[r] is
// the cell containing level r (the column's name).
struct Column {
  std::string id;
  Ratio width;
  std::vector<Cell> labels;

  Level height() const { return static_cast<Level>(labels.size()); }
  Ratio mass() const { return width * Ratio(height()); }
  friend bool operator==(const Column&, const Column&) = default;
};

// The `order`-th slice (left to right) of the top level of `from`, of the
// given width, maps onto the base of `to`. Slices arriving at a base are laid
// out left to right in the order the edges appear in ColumnSystem::edges.
struct SeamEdge {
  std::string from;
  std::int64_t order = 0;
  std::string to;
  Ratio width;

  friend bool operator==(const SeamEdge&, const SeamEdge&) = default;
};

struct ColumnSystem {
  PartitionSpec partition;
  std::vector<Column> columns;
  std::vector<SeamEdge> edges;

  int t() const { return partition.t(); }
  // Index into `columns`, or nullopt.
  std::optional<std::size_t> index_of(const std::string& id) const;
  const Column& column(const std::string& id) const;

  friend bool operator==(const ColumnSystem&, const ColumnSystem&) = default;
};

struct Violation {
  std::string subject;  // "system", "column <id>", "edge <from>#<order>", "cell <j>"
  std::string message;
  std::optional<Ratio> lhs;
  std::optional<Ratio> rhs;

  std::string str() const { return subject + ": " + message; }
};

using ValidationReport = std::vector<Violation>;

// Renders integers without the "/1" suffix; for messages only.
std::string display(const Ratio& r);

ValidationReport validate_system(const ColumnSystem& system);
std::string format_report(const ValidationReport& report);

std::int64_t occurrences(const Column& column, Cell cell);
// Occurrence counts for cells 1..t, indexed by cell - 1.
std::vector<std::int64_t> occurrence_counts(const Column& column, int t);

// m_j = sum over columns of width * occurrences; throws ZeroCell if some m_j = 0.
std::vector<Ratio> cell_measures(const ColumnSystem& system);

// Per-column inputs of the construction: gamma and the block proportions b.
struct ColumnParams {
  std::string column_id;
  std::int64_t gamma = 0;
  std::vector<Ratio> b;

  friend bool operator==(const ColumnParams&, const ColumnParams&) = default;
};

struct ConstructionParams {
  int N = 1;
  std::int64_t M = 1;
  std::int64_t delta = 0;
  std::vector<ColumnParams> columns;

  const ColumnParams& for_column(const std::string& id) const;
  friend bool operator==(const ConstructionParams&, const ConstructionParams&) = default;
};

// A column whose base is cut into t*N sub-bases C^(i)_j, laid out left to
// right by ascending block i, then ascending subcolumn j. Sub-base (i, j) has
// width width * b_i / N.
class SplitColumn {
 public:
  SplitColumn(Column column, int N, std::vector<Ratio> b);

  const Column& column() const { return column_; }
  int N() const { return N_; }
  int blocks() const { return static_cast<int>(b_.size()); }
  const std::vector<Ratio>& b() const { return b_; }

  Ratio sub_base_width(int block) const { return widths_[static_cast<std::size_t>(block - 1)]; }
  // Left end of sub-base (block, sub) within the column base [0, width).
  Ratio sub_base_offset(int block, int sub) const;

 private:
  Column column_;
  int N_;
  std::vector<Ratio> b_;
  std::vector<Ratio> widths_;
  std::vector<Ratio> block_offsets_;
};

struct Rung {
  int block = 1;  // 1..t
  int sub = 1;    // 1..N
  Level level = 0;

  friend auto operator<=>(const Rung&, const Rung&) = default;
};

// Selected rungs for one block C^(i) of one column. Level lists are indexed
// by subcolumn - 1 and kept sorted ascending without duplicates.
struct RungSelection {
  std::string column_id;
  int block = 1;
  std::vector<std::vector<Level>> b;
  std::vector<std::vector<Level>> a;
  std::vector<std::vector<Level>> e;
  // Appearances minus B-selections per cell (index cell - 1), from the
  // construction's own ledger.
  std::vector<std::int64_t> net_skips;
  std::int64_t middle_skips = 0;

  friend bool operator==(const RungSelection&, const RungSelection&) = default;
};

struct ColumnSelection {
  std::string column_id;
  std::vector<RungSelection> blocks;

  friend bool operator==(const ColumnSelection&, const ColumnSelection&) = default;
};

struct TowerMeasures {
  Ratio base;          // mu(B)
  Ratio extra;         // mu(A)
  Ratio error;         // mu(E)
  Ratio base_short;    // mu(B_N)
  Ratio base_long;     // mu(B_{N+1})
  std::vector<Ratio> base_by_cell;   // mu(B ∩ P_j)
  std::vector<Ratio> extra_by_cell;  // mu(A ∩ P_j)

  friend bool operator==(const TowerMeasures&, const TowerMeasures&) = default;
};

struct TowerResult {
  ConstructionParams params;
  std::vector<ColumnSelection> columns;
  TowerMeasures measures;

  const ColumnSelection& selection(const std::string& column_id) const;
  friend bool operator==(const TowerResult&, const TowerResult&) = default;
};

}  // namespace alpern
