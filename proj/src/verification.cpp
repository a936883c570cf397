#include "alpern/verification.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "alpern/error.hpp"

namespace alpern {

namespace {

std::size_t idx(std::int64_t k) { return static_cast<std::size_t>(k); }

constexpr std::size_t kMaxDiagnostics = 20;

void note(std::vector<std::string>& diagnostics, std::string message) {
  if (diagnostics.size() < kMaxDiagnostics) diagnostics.push_back(std::move(message));
}

std::string rung_name(const std::string& column, int block, int sub, Level level) {
  return "column " + column + " block " + std::to_string(block) + " subcolumn " + std::to_string(sub) + " level " +
         std::to_string(level);
}

struct Piece {
  std::size_t column;
  Level level;
  Ratio lo;
  Ratio hi;
};

struct SubBase {
  int block;
  int sub;
  Ratio lo;
  Ratio hi;
};

struct Outlet {
  Ratio lo;
  Ratio hi;
  std::size_t target;
  Ratio target_lo;
};

// Rational interval picture of the system with the split recorded in params.
class Geometry {
 public:
  Geometry(const ColumnSystem& system, const ConstructionParams& params)
      : system_(system), N_(params.N), t_(system.t()) {
    const std::size_t n = system.columns.size();
    outlets_.resize(n);
    subbases_.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
      const auto& column = system.columns[c];
      const SplitColumn split(column, N_, params.for_column(column.id).b);
      for (int i = 1; i <= t_; ++i) {
        for (int j = 1; j <= N_; ++j) {
          const Ratio lo = split.sub_base_offset(i, j);
          subbases_[c].push_back({i, j, lo, lo + split.sub_base_width(i)});
        }
      }
    }
    std::vector<Ratio> incoming(n);
    std::vector<std::vector<std::pair<std::int64_t, Outlet>>> ordered(n);
    for (const auto& e : system.edges) {
      const std::size_t from = *system.index_of(e.from);
      const std::size_t to = *system.index_of(e.to);
      ordered[from].push_back({e.order, Outlet{Ratio(), e.width, to, incoming[to]}});
      incoming[to] += e.width;
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::sort(ordered[c].begin(), ordered[c].end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      Ratio offset;
      for (auto& [order, outlet] : ordered[c]) {
        const Ratio width = outlet.hi;
        outlet.lo = offset;
        outlet.hi = offset + width;
        offset = outlet.hi;
        outlets_[c].push_back(outlet);
      }
    }
  }

  int N() const { return N_; }
  int t() const { return t_; }
  Level height(std::size_t c) const { return system_.columns[c].height(); }
  const std::vector<SubBase>& subbases(std::size_t c) const { return subbases_[c]; }
  const SubBase& subbase(std::size_t c, int block, int sub) const {
    return subbases_[c][idx((block - 1) * N_ + (sub - 1))];
  }
  std::size_t rung_index(Level level, int block, int sub) const {
    return idx(level) * idx(t_ * N_) + idx((block - 1) * N_ + (sub - 1));
  }

  // Image under T of the top-level slice [lo, hi) of column c.
  std::vector<Piece> across_seam(std::size_t c, const Ratio& lo, const Ratio& hi) const {
    std::vector<Piece> out;
    for (const auto& o : outlets_[c]) {
      const Ratio a = std::max(lo, o.lo);
      const Ratio b = std::min(hi, o.hi);
      if (a < b) out.push_back({o.target, 0, o.target_lo + (a - o.lo), o.target_lo + (b - o.lo)});
    }
    return out;
  }

  std::vector<Piece> step(const std::vector<Piece>& pieces) const {
    std::vector<Piece> out;
    for (const auto& p : pieces) {
      if (p.level + 1 < height(p.column)) {
        out.push_back({p.column, p.level + 1, p.lo, p.hi});
      } else {
        auto crossed = across_seam(p.column, p.lo, p.hi);
        out.insert(out.end(), crossed.begin(), crossed.end());
      }
    }
    return out;
  }

  // Measure of piece ∩ (rungs flagged in `member` at the piece's level).
  Ratio overlap(const Piece& p, const std::vector<char>& member) const {
    Ratio total;
    for (const auto& s : subbases_[p.column]) {
      if (!member[rung_index(p.level, s.block, s.sub)]) continue;
      const Ratio a = std::max(p.lo, s.lo);
      const Ratio b = std::min(p.hi, s.hi);
      if (a < b) total += b - a;
    }
    return total;
  }

 private:
  const ColumnSystem& system_;
  int N_;
  int t_;
  std::vector<std::vector<Outlet>> outlets_;
  std::vector<std::vector<SubBase>> subbases_;
};

// Per column membership flags indexed by Geometry::rung_index.
struct Membership {
  std::vector<std::vector<char>> b, a, e;
};

Membership membership(const Geometry& geo, const ColumnSystem& system, const TowerResult& result) {
  Membership m;
  const std::size_t n = system.columns.size();
  for (auto* v : {&m.b, &m.a, &m.e}) v->resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t size = idx(geo.height(c)) * idx(geo.t() * geo.N());
    m.b[c].assign(size, 0);
    m.a[c].assign(size, 0);
    m.e[c].assign(size, 0);
    for (const auto& sel : result.selection(system.columns[c].id).blocks) {
      for (int j = 1; j <= geo.N(); ++j) {
        for (const Level l : sel.b[idx(j - 1)]) m.b[c][geo.rung_index(l, sel.block, j)] = 1;
        for (const Level l : sel.a[idx(j - 1)]) m.a[c][geo.rung_index(l, sel.block, j)] = 1;
        for (const Level l : sel.e[idx(j - 1)]) m.e[c][geo.rung_index(l, sel.block, j)] = 1;
      }
    }
  }
  return m;
}

bool exactly_once(std::int64_t whole, const std::vector<std::pair<Ratio, Ratio>>* partials, const Ratio& lo,
                  const Ratio& hi) {
  std::vector<std::pair<Ratio, Ratio>> clipped;
  if (partials) {
    for (const auto& [a, b] : *partials) {
      const Ratio x = std::max(a, lo);
      const Ratio y = std::min(b, hi);
      if (x < y) clipped.push_back({x, y});
    }
  }
  if (clipped.empty()) return whole == 1;
  std::vector<Ratio> points{lo, hi};
  for (const auto& [a, b] : clipped) {
    points.push_back(a);
    points.push_back(b);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    std::int64_t count = whole;
    for (const auto& [a, b] : clipped) {
      if (a <= points[k] && points[k + 1] <= b) ++count;
    }
    if (count != 1) return false;
  }
  return true;
}

}  // namespace

bool Verdicts::all() const {
  return cover && error_returns && height_identity && independent_B && independent_A && independent_AB &&
         disjoint_AB;
}

std::vector<std::pair<std::string, bool>> Verdicts::named() const {
  return {{"cover", cover},
          {"error_returns_to_base", error_returns},
          {"height_identity", height_identity},
          {"independent_B", independent_B},
          {"independent_A", independent_A},
          {"independent_A_union_B", independent_AB},
          {"disjoint_A_B", disjoint_AB}};
}

void check_selection_shape(const ColumnSystem& system, const TowerResult& result) {
  const int N = result.params.N;
  const int t = system.t();
  if (N < 1) throw Error(ErrorCode::MalformedSelection, "N must be positive");
  if (result.columns.size() != system.columns.size()) {
    throw Error(ErrorCode::MalformedSelection, "selection covers " + std::to_string(result.columns.size()) +
                                                   " columns, system has " + std::to_string(system.columns.size()));
  }
  for (const auto& column : system.columns) {
    const auto& cp = result.params.for_column(column.id);
    if (static_cast<int>(cp.b.size()) != t) {
      throw Error(ErrorCode::MalformedSelection, "expected " + std::to_string(t) + " block proportions", column.id);
    }
    Ratio sum;
    for (const auto& b : cp.b) {
      if (b.sign() < 0) throw Error(ErrorCode::MalformedSelection, "negative block proportion", column.id);
      sum += b;
    }
    if (sum != Ratio(1)) throw Error(ErrorCode::MalformedSelection, "block proportions do not sum to 1", column.id);
    const auto& sel = result.selection(column.id);
    if (static_cast<int>(sel.blocks.size()) != t) {
      throw Error(ErrorCode::MalformedSelection, "expected " + std::to_string(t) + " blocks", column.id);
    }
    for (int i = 1; i <= t; ++i) {
      const auto& block = sel.blocks[idx(i - 1)];
      if (block.block != i) throw Error(ErrorCode::MalformedSelection, "blocks out of order", column.id);
      for (const auto* lists : {&block.b, &block.a, &block.e}) {
        if (static_cast<int>(lists->size()) != N) {
          throw Error(ErrorCode::MalformedSelection, "expected " + std::to_string(N) + " subcolumns", column.id);
        }
        for (const auto& levels : *lists) {
          for (std::size_t k = 0; k < levels.size(); ++k) {
            if (levels[k] < 0 || levels[k] >= column.height() || (k > 0 && levels[k] <= levels[k - 1])) {
              throw Error(ErrorCode::MalformedSelection,
                          "level " + std::to_string(levels[k]) + " out of range or out of order", column.id);
            }
          }
        }
      }
    }
  }
}

AlpernReport verify_alpern(const ColumnSystem& system, const TowerResult& result) {
  check_selection_shape(system, result);
  const Geometry geo(system, result.params);
  const Membership in = membership(geo, system, result);
  const int N = geo.N();
  AlpernReport report;
  report.gap_spectrum = true;

  for (std::size_t c = 0; c < system.columns.size(); ++c) {
    const auto& column = system.columns[c];
    const Level R = column.height();
    for (const auto& sel : result.selection(column.id).blocks) {
      if (geo.subbase(c, sel.block, 1).lo == geo.subbase(c, sel.block, 1).hi) continue;
      for (int j = 1; j <= N; ++j) {
        const auto& levels = sel.b[idx(j - 1)];
        if (levels.empty() || levels.front() != 0) {
          report.gap_spectrum = false;
          note(report.diagnostics, "gap spectrum: " + rung_name(column.id, sel.block, j, 0) + " is not in B");
        }
        for (std::size_t k = 0; k < levels.size(); ++k) {
          const Level next = (k + 1 < levels.size()) ? levels[k + 1] : R;
          const Level gap = next - levels[k];
          if (gap != N && gap != N + 1) {
            report.gap_spectrum = false;
            note(report.diagnostics, "gap spectrum: " + rung_name(column.id, sel.block, j, levels[k]) + " has gap " +
                                         std::to_string(gap) + (k + 1 < levels.size() ? "" : " to the seam"));
          }
        }
      }
    }
  }

  // Cover counts: whole rungs by integer count, seam-split pieces by interval.
  std::vector<std::vector<std::int64_t>> whole(system.columns.size());
  for (std::size_t c = 0; c < whole.size(); ++c) whole[c].assign(in.b[c].size(), 0);
  std::map<std::pair<std::size_t, Level>, std::vector<std::pair<Ratio, Ratio>>> partial;
  for (std::size_t c = 0; c < system.columns.size(); ++c) {
    const Level R = geo.height(c);
    for (const auto& s : geo.subbases(c)) {
      if (!(s.lo < s.hi)) continue;
      for (Level l = 0; l < R; ++l) {
        const auto r = geo.rung_index(l, s.block, s.sub);
        if (in.e[c][r]) ++whole[c][r];
        if (!in.b[c][r]) continue;
        Level k = 0;
        for (; k < N && l + k < R; ++k) ++whole[c][geo.rung_index(l + k, s.block, s.sub)];
        if (k == N) continue;
        auto pieces = geo.across_seam(c, s.lo, s.hi);
        for (; k < N; ++k) {
          for (const auto& p : pieces) partial[{p.column, p.level}].push_back({p.lo, p.hi});
          if (k + 1 < N) pieces = geo.step(pieces);
        }
      }
    }
  }
  report.cover = true;
  for (std::size_t c = 0; c < system.columns.size(); ++c) {
    const Level R = geo.height(c);
    for (Level l = 0; l < R; ++l) {
      const auto it = partial.find({c, l});
      const auto* pieces = (it == partial.end()) ? nullptr : &it->second;
      for (const auto& s : geo.subbases(c)) {
        if (!(s.lo < s.hi)) continue;
        const auto count = whole[c][geo.rung_index(l, s.block, s.sub)];
        if (!exactly_once(count, pieces, s.lo, s.hi)) {
          report.cover = false;
          note(report.diagnostics, "cover: " + rung_name(system.columns[c].id, s.block, s.sub, l) +
                                       (pieces ? " is not covered exactly once"
                                               : " is covered " + std::to_string(count) + " times"));
        }
      }
    }
  }

  // T(E) ⊂ B, and where B returns after N steps.
  report.error_returns = true;
  for (std::size_t c = 0; c < system.columns.size(); ++c) {
    const auto& column = system.columns[c];
    const Level R = geo.height(c);
    for (const auto& s : geo.subbases(c)) {
      if (!(s.lo < s.hi)) continue;
      const Ratio rung_mass = s.hi - s.lo;
      for (Level l = 0; l < R; ++l) {
        const auto r = geo.rung_index(l, s.block, s.sub);
        if (in.e[c][r]) {
          bool ok = true;
          if (l + 1 < R) {
            ok = in.b[c][geo.rung_index(l + 1, s.block, s.sub)] != 0;
          } else {
            for (const auto& p : geo.across_seam(c, s.lo, s.hi)) {
              if (geo.overlap(p, in.b[p.column]) != p.hi - p.lo) ok = false;
            }
          }
          if (!ok) {
            report.error_returns = false;
            note(report.diagnostics, "error set: T of " + rung_name(column.id, s.block, s.sub, l) + " leaves B");
          }
        }
        if (!in.b[c][r]) continue;
        if (l + N < R) {
          const auto target = geo.rung_index(l + N, s.block, s.sub);
          if (in.b[c][target]) report.base_short += rung_mass;
          if (in.e[c][target]) report.base_long += rung_mass;
        } else {
          std::vector<Piece> pieces{{c, l, s.lo, s.hi}};
          for (int k = 0; k < N; ++k) pieces = geo.step(pieces);
          for (const auto& p : pieces) {
            report.base_short += geo.overlap(p, in.b[p.column]);
            report.base_long += geo.overlap(p, in.e[p.column]);
          }
        }
      }
      std::int64_t e_count = 0;
      for (Level l = 0; l < R; ++l) e_count += in.e[c][geo.rung_index(l, s.block, s.sub)];
      report.error += rung_mass * Ratio(e_count);
    }
  }
  const Ratio identity = Ratio(N) * report.base_short + Ratio(N + 1) * report.base_long;
  report.height_identity = identity == Ratio(1);
  if (!report.height_identity) {
    note(report.diagnostics, "height identity: N mu(B_N) + (N+1) mu(B_N+1) = " + display(identity) + " ≠ 1");
  }
  return report;
}

std::string_view to_string(RungSetKind kind) {
  switch (kind) {
    case RungSetKind::B: return "B";
    case RungSetKind::A: return "A";
    case RungSetKind::AB: return "A∪B";
  }
  return "?";
}

RungSet rung_set(const TowerResult& result, RungSetKind kind) {
  RungSet out;
  for (const auto& col : result.columns) {
    ColumnRungs cr{col.column_id, {}};
    for (const auto& block : col.blocks) {
      for (std::size_t j = 0; j < block.b.size(); ++j) {
        const int sub = static_cast<int>(j) + 1;
        if (kind != RungSetKind::A) {
          for (const Level l : block.b[j]) cr.rungs.push_back({block.block, sub, l});
        }
        if (kind != RungSetKind::B) {
          for (const Level l : block.a[j]) cr.rungs.push_back({block.block, sub, l});
        }
      }
    }
    std::sort(cr.rungs.begin(), cr.rungs.end());
    cr.rungs.erase(std::unique(cr.rungs.begin(), cr.rungs.end()), cr.rungs.end());
    out.push_back(std::move(cr));
  }
  return out;
}

bool IndependenceReport::independent() const {
  return std::all_of(verdict.begin(), verdict.end(), [](bool v) { return v; });
}

IndependenceReport verify_independence(const ColumnSystem& system, const ConstructionParams& params,
                                       const RungSet& rungs, std::string label) {
  const int t = system.t();
  const auto m = cell_measures(system);
  IndependenceReport report;
  report.label = std::move(label);
  report.intersection.assign(idx(t), Ratio());
  for (const auto& cr : rungs) {
    const Column& column = system.column(cr.column_id);
    const auto& b = params.for_column(cr.column_id).b;
    std::vector<std::vector<std::int64_t>> counts(idx(t), std::vector<std::int64_t>(idx(t), 0));
    for (const auto& r : cr.rungs) {
      if (r.block < 1 || r.block > t || r.sub < 1 || r.sub > params.N || r.level < 0 || r.level >= column.height()) {
        throw Error(ErrorCode::MalformedSelection, "rung out of range", cr.column_id);
      }
      ++counts[idx(r.block - 1)][idx(column.labels[idx(r.level)] - 1)];
    }
    for (int i = 0; i < t; ++i) {
      const Ratio rung = column.width * b[idx(i)] / Ratio(params.N);
      for (int j = 0; j < t; ++j) report.intersection[idx(j)] += rung * Ratio(counts[idx(i)][idx(j)]);
    }
  }
  for (const auto& x : report.intersection) report.measure += x;
  for (int j = 0; j < t; ++j) {
    report.expected.push_back(report.measure * m[idx(j)]);
    report.relative.push_back(report.measure.is_zero() ? Ratio() : report.intersection[idx(j)] / report.measure);
    report.verdict.push_back(report.intersection[idx(j)] == report.expected.back());
  }
  return report;
}

NetSkipAudit audit_net_skips(const Column& column, int t, const RungSelection& selection, std::int64_t gamma,
                             std::int64_t delta) {
  NetSkipAudit audit;
  audit.net = occurrence_counts(column, t);
  for (const auto& levels : selection.b) {
    for (const Level l : levels) --audit.net[idx(column.labels[idx(l)] - 1)];
  }
  audit.target.assign(idx(t), delta);
  audit.target[idx(selection.block - 1)] = gamma;
  return audit;
}

std::int64_t count_middle_skips(const Column& column, int N, const RungSelection& selection) {
  const Level R = column.height();
  const Level first = static_cast<Level>(N) * N;
  const Level last = R - first;
  std::vector<char> selected(idx(R), 0);
  for (const auto& levels : selection.b) {
    for (const Level l : levels) selected[idx(l)] = 1;
  }
  std::int64_t skips = 0;
  for (Level l = first; l <= last; ++l) skips += selected[idx(l)] ? 0 : 1;
  return skips;
}

Verdicts CombinatorialReport::verdicts() const {
  Verdicts v;
  v.cover = alpern.cover;
  v.error_returns = alpern.error_returns;
  v.height_identity = alpern.height_identity;
  v.independent_B = base.independent();
  v.independent_A = extra.independent();
  v.independent_AB = combined.independent();
  v.disjoint_AB = disjoint;
  return v;
}

CombinatorialReport verify_tower(const ColumnSystem& system, const TowerResult& result) {
  CombinatorialReport report;
  report.alpern = verify_alpern(system, result);
  report.base = verify_independence(system, result.params, rung_set(result, RungSetKind::B), "B");
  report.extra = verify_independence(system, result.params, rung_set(result, RungSetKind::A), "A");
  report.combined = verify_independence(system, result.params, rung_set(result, RungSetKind::AB), "A∪B");
  report.disjoint = true;
  for (const auto& col : result.columns) {
    const auto& b = result.params.for_column(col.column_id).b;
    for (const auto& block : col.blocks) {
      if (b[idx(block.block - 1)].is_zero()) continue;
      for (std::size_t j = 0; j < block.b.size(); ++j) {
        std::vector<Level> both;
        std::set_intersection(block.b[j].begin(), block.b[j].end(), block.a[j].begin(), block.a[j].end(),
                              std::back_inserter(both));
        if (!both.empty()) {
          report.disjoint = false;
          note(report.diagnostics, "disjointness: " +
                                       rung_name(col.column_id, block.block, static_cast<int>(j) + 1, both.front()) +
                                       " is in both A and B");
        }
      }
    }
  }
  for (const auto* ind : {&report.base, &report.extra, &report.combined}) {
    for (std::size_t j = 0; j < ind->verdict.size(); ++j) {
      if (!ind->verdict[j]) {
        note(report.diagnostics, "independence of " + ind->label + ": mu(S ∩ P" + std::to_string(j + 1) + ") = " +
                                     display(ind->intersection[j]) + " ≠ " + display(ind->expected[j]));
      }
    }
  }
  return report;
}

}  // namespace alpern
