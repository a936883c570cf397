#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "alpern/model.hpp"

namespace alpern {

// The checks shared by the combinatorial verifier and the grid oracle. Two
// verifiers agree when their Verdicts compare equal.
struct Verdicts {
  bool cover = false;            // {B, TB, ..., T^{N-1}B, E} partitions X
  bool error_returns = false;    // T(E) ⊂ B
  bool height_identity = false;  // N mu(B_N) + (N+1) mu(B_{N+1}) = 1
  bool independent_B = false;
  bool independent_A = false;
  bool independent_AB = false;
  bool disjoint_AB = false;

  bool all() const;
  std::vector<std::pair<std::string, bool>> named() const;
  friend bool operator==(const Verdicts&, const Verdicts&) = default;
};

// Throws MalformedSelection unless every column has parameters and t blocks
// of N subcolumns whose levels are strictly increasing and lie in 0..R-1.
void check_selection_shape(const ColumnSystem& system, const TowerResult& result);

struct AlpernReport {
  bool gap_spectrum = false;  // level 0 selected, gaps and seam gaps in {N, N+1}
  bool cover = false;
  bool error_returns = false;
  bool height_identity = false;
  // mu(B ∩ T^{-N} B), mu(B ∩ T^{-N} E), mu(E), recomputed.
  Ratio base_short;
  Ratio base_long;
  Ratio error;
  std::vector<std::string> diagnostics;

  bool ok() const { return gap_spectrum && cover && error_returns && height_identity; }
};

// Purely combinatorial: rungs are sub-base intervals carried level to level;
// only orbits that cross a column top are split along the seam edges, with
// exact rational endpoints.
AlpernReport verify_alpern(const ColumnSystem& system, const TowerResult& result);

struct ColumnRungs {
  std::string column_id;
  std::vector<Rung> rungs;
};
using RungSet = std::vector<ColumnRungs>;

enum class RungSetKind { B, A, AB };
std::string_view to_string(RungSetKind kind);
RungSet rung_set(const TowerResult& result, RungSetKind kind);

struct IndependenceReport {
  std::string label;
  Ratio measure;                    // mu(S)
  std::vector<Ratio> intersection;  // mu(S ∩ P_j)
  std::vector<Ratio> expected;      // mu(S) m_j
  std::vector<Ratio> relative;      // r_j = mu(S ∩ P_j) / mu(S), 0 when mu(S) = 0
  std::vector<bool> verdict;

  bool independent() const;
};

IndependenceReport verify_independence(const ColumnSystem& system, const ConstructionParams& params,
                                       const RungSet& rungs, std::string label);

struct NetSkipAudit {
  std::vector<std::int64_t> net;     // appearances - B-selections, per cell
  std::vector<std::int64_t> target;  // delta, with gamma at the block's own cell
  bool ok() const { return net == target; }
};

NetSkipAudit audit_net_skips(const Column& column, int t, const RungSelection& selection, std::int64_t gamma,
                             std::int64_t delta);

// Levels in [N^2, R - N^2] carrying no B-rung of the block.
std::int64_t count_middle_skips(const Column& column, int N, const RungSelection& selection);

struct CombinatorialReport {
  AlpernReport alpern;
  IndependenceReport base;
  IndependenceReport extra;
  IndependenceReport combined;
  bool disjoint = false;
  std::vector<std::string> diagnostics;

  Verdicts verdicts() const;
};

CombinatorialReport verify_tower(const ColumnSystem& system, const TowerResult& result);

// Brute-force model of T: every column base is cut into equal atoms of mass
// 1/G (G the lcm of all width denominators); T moves an atom one level up,
// and maps top atoms across seam edges order-preservingly.
class GridModel {
 public:
  struct Atom {
    std::size_t column = 0;
    int block = 0;
    int sub = 0;
    std::int64_t base_atom = 0;
    Level level = 0;
  };

  std::int64_t G() const { return G_; }
  std::int64_t size() const { return static_cast<std::int64_t>(next_.size()); }
  std::int64_t next(std::int64_t atom) const { return next_[static_cast<std::size_t>(atom)]; }
  Cell cell(std::int64_t atom) const { return cell_[static_cast<std::size_t>(atom)]; }
  Atom atom(std::int64_t index) const;
  // First atom and atom count of a rung.
  std::pair<std::int64_t, std::int64_t> rung_atoms(std::size_t column, int block, int sub, Level level) const;
  int N() const { return N_; }
  int t() const { return t_; }

 private:
  friend GridModel build_grid(const ColumnSystem&, const ConstructionParams&, std::int64_t);

  struct ColumnLayout {
    std::int64_t start = 0;
    std::int64_t base_atoms = 0;
    Level height = 0;
    std::vector<std::int64_t> block_atoms;  // atoms per sub-base of each block
  };

  std::int64_t G_ = 0;
  int N_ = 1;
  int t_ = 1;
  std::vector<ColumnLayout> layout_;
  std::vector<std::int64_t> next_;
  std::vector<Cell> cell_;
};

inline constexpr std::int64_t kDefaultGridLimit = 1'000'000;

// Throws GridTooLarge if G exceeds `limit`.
GridModel build_grid(const ColumnSystem& system, const ConstructionParams& params,
                     std::int64_t limit = kDefaultGridLimit);

struct OracleReport {
  Verdicts verdicts;
  std::int64_t base_atoms = 0;
  std::int64_t extra_atoms = 0;
  std::int64_t error_atoms = 0;
  std::int64_t short_atoms = 0;  // B ∩ T^{-N} B
  std::int64_t long_atoms = 0;   // B ∩ T^{-N} E
  std::vector<std::string> diagnostics;
};

OracleReport oracle_verify(const GridModel& grid, const ColumnSystem& system, const TowerResult& result);

}  // namespace alpern
