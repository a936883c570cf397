#include "alpern/construction.hpp"

#include <algorithm>

#include "alpern/error.hpp"
#include "alpern/richness.hpp"

namespace alpern {

namespace {

std::size_t idx(std::int64_t k) { return static_cast<std::size_t>(k); }

std::int64_t floor_mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

}  // namespace

std::int64_t compute_delta(int N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  if (N == 1) return 0;
  const std::int64_t n = N;
  return std::max(2 * (n - 1) * (n - 2), 2 * (n - 1));
}

std::int64_t compute_gamma(Level R, int N, int t, std::int64_t delta, const Ratio& m1) {
  if (N < 1 || t < 1 || R < 1) throw Error(ErrorCode::InvalidArgument, "R, N and t must be positive");
  if (m1.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "m1 must be positive");
  const std::int64_t low = to_int64((Ratio(delta) / m1).ceil());
  const std::int64_t residue = floor_mod(R - static_cast<std::int64_t>(t - 1) * delta, N);
  return low + floor_mod(residue - low, N);
}

std::vector<Ratio> compute_b(std::span<const Ratio> m, std::int64_t gamma, std::int64_t delta, int t) {
  if (static_cast<int>(m.size()) != t) throw Error(ErrorCode::InvalidArgument, "expected t cell measures");
  if (t == 1 || (gamma == delta && delta == 0)) return {m.begin(), m.end()};
  const Ratio total(gamma + static_cast<std::int64_t>(t - 1) * delta);
  std::vector<Ratio> b;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const Ratio numerator = m[j] * total - Ratio(delta);
    if (numerator.sign() < 0) {
      throw Error(ErrorCode::NegativeMass, "b_" + std::to_string(j + 1) + " numerator " + display(numerator) +
                                               " is negative; gamma " + std::to_string(gamma) + " lies below the window");
    }
    b.push_back(numerator);
  }
  if (gamma <= delta) {
    throw Error(ErrorCode::NegativeMass, "gamma " + std::to_string(gamma) + " must exceed delta " +
                                             std::to_string(delta) + " when t > 1");
  }
  for (auto& bj : b) bj /= Ratio(gamma - delta);
  return b;
}

Staircase bottom_staircase(int N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  Staircase stairs(idx(N));
  for (int j = 1; j <= N; ++j) {
    auto& levels = stairs[idx(j - 1)];
    levels.push_back(0);
    for (int k = 0; k < N - j; ++k) levels.push_back(levels.back() + N);
    for (int k = 0; k < j - 1; ++k) levels.push_back(levels.back() + N + 1);
  }
  return stairs;
}

Staircase top_staircase(int N, Level R) {
  const Level n = N;
  if (R < 2 * n * n + n) {
    throw Error(ErrorCode::TooShort, "height " + std::to_string(R) + " is below 2N^2+N = " +
                                         std::to_string(2 * n * n + n));
  }
  const auto bottom = bottom_staircase(N);
  Staircase stairs(idx(N));
  for (int j = 1; j <= N; ++j) {
    const auto& mirror = bottom[idx(N - j)];
    auto& levels = stairs[idx(j - 1)];
    for (auto it = mirror.rbegin(); it != mirror.rend(); ++it) {
      if (*it >= N) levels.push_back(R - *it);
    }
  }
  return stairs;
}

namespace {

RungSelection select_block(const Column& column, int N, int t, int block, std::int64_t gamma, std::int64_t delta) {
  const Level R = column.height();
  const Level n = N;
  const auto& labels = column.labels;
  const auto bottom = bottom_staircase(N);
  const auto top = top_staircase(N, R);

  RungSelection sel;
  sel.column_id = column.id;
  sel.block = block;
  sel.b.assign(idx(N), {});
  sel.a.assign(idx(N), {});
  sel.e.assign(idx(N), {});

  // Net skips left by the two staircases, per cell.
  std::vector<std::int64_t> outer(idx(t), 0);
  std::vector<std::int64_t> per_level(idx(R), 0);
  for (int j = 0; j < N; ++j) {
    for (const Level l : bottom[idx(j)]) ++per_level[idx(l)];
    for (const Level l : top[idx(j)]) ++per_level[idx(l)];
  }
  const Level middle_first = n * n;
  const Level middle_last = R - n * n;
  for (Level l = 0; l < R; ++l) {
    if (l >= middle_first && l <= middle_last) continue;
    outer[idx(labels[idx(l)] - 1)] += 1 - per_level[idx(l)];
  }

  std::vector<std::int64_t> quota(idx(t));
  for (int j = 1; j <= t; ++j) {
    const std::int64_t target = (j == block) ? gamma : delta;
    quota[idx(j - 1)] = target - outer[idx(j - 1)];
    if (quota[idx(j - 1)] < 0) {
      throw Error(ErrorCode::QuotaNegative,
                  "block " + std::to_string(block) + ": staircases leave " + std::to_string(outer[idx(j - 1)]) +
                      " net skips of cell " + std::to_string(j) + ", above its target " + std::to_string(target),
                  column.id);
    }
  }

  for (int j = 0; j < N; ++j) sel.b[idx(j)] = bottom[idx(j)];

  const Level last_skip_allowed = R - n * n - n;
  Level previous_skip = -1;
  bool skipped_before = false;
  int due = 1;
  std::int64_t skips = 0;
  for (Level l = middle_first; l <= middle_last; ++l) {
    auto& q = quota[idx(labels[idx(l)] - 1)];
    const bool spaced = !skipped_before || l - previous_skip >= n + 1;
    if (q > 0 && spaced && l <= last_skip_allowed) {
      --q;
      ++skips;
      previous_skip = l;
      skipped_before = true;
      continue;
    }
    sel.b[idx(due - 1)].push_back(l);
    due = due % N + 1;
  }
  for (int j = 1; j <= t; ++j) {
    if (quota[idx(j - 1)] > 0) {
      throw Error(ErrorCode::QuotaUnmet,
                  "block " + std::to_string(block) + ": " + std::to_string(quota[idx(j - 1)]) +
                      " skips of cell " + std::to_string(j) + " could not be placed in the middle levels",
                  column.id);
    }
  }
  if (due != 1) {
    throw Error(ErrorCode::MisalignedHandoff,
                "block " + std::to_string(block) + ": middle section ends before subcolumn " + std::to_string(due),
                column.id);
  }
  for (int j = 0; j < N; ++j) {
    auto& levels = sel.b[idx(j)];
    levels.insert(levels.end(), top[idx(j)].begin(), top[idx(j)].end());
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const Level next = (k + 1 < levels.size()) ? levels[k + 1] : R;
      const Level gap = next - levels[k];
      if (gap != n && gap != n + 1) {
        throw Error(ErrorCode::MisalignedHandoff,
                    "block " + std::to_string(block) + " subcolumn " + std::to_string(j + 1) + ": gap " +
                        std::to_string(gap) + " after level " + std::to_string(levels[k]),
                    column.id);
      }
    }
  }

  // Ledger: appearances minus selections.
  sel.net_skips = outer;
  for (Level l = middle_first; l <= middle_last; ++l) {
    const bool selected = std::any_of(sel.b.begin(), sel.b.end(), [l](const std::vector<Level>& v) {
      return std::binary_search(v.begin(), v.end(), l);
    });
    if (!selected) ++sel.net_skips[idx(labels[idx(l)] - 1)];
  }
  sel.middle_skips = skips;
  return sel;
}

}  // namespace

std::vector<RungSelection> select_column(const SplitColumn& split, std::int64_t gamma, std::int64_t delta) {
  std::vector<RungSelection> blocks;
  const int t = split.blocks();
  for (int i = 1; i <= t; ++i) blocks.push_back(select_block(split.column(), split.N(), t, i, gamma, delta));
  return blocks;
}

void select_A(const SplitColumn& split, RungSelection& selection, std::int64_t gamma, std::int64_t delta) {
  const Column& column = split.column();
  const int N = split.N();
  const int t = split.blocks();
  const Level R = column.height();
  std::vector<char> taken(idx(R) * idx(N), 0);
  for (int j = 0; j < N; ++j) {
    for (const Level l : selection.b[idx(j)]) taken[idx(l) * idx(N) + idx(j)] = 1;
  }
  std::vector<std::int64_t> quota(idx(t), delta);
  quota[idx(selection.block - 1)] = gamma;
  std::int64_t remaining = gamma + static_cast<std::int64_t>(t - 1) * delta;
  selection.a.assign(idx(N), {});
  for (Level l = 0; l < R && remaining > 0; ++l) {
    auto& q = quota[idx(column.labels[idx(l)] - 1)];
    for (int j = 0; j < N && q > 0; ++j) {
      if (taken[idx(l) * idx(N) + idx(j)]) continue;
      selection.a[idx(j)].push_back(l);
      --q;
      --remaining;
    }
  }
  for (int j = 1; j <= t; ++j) {
    if (quota[idx(j - 1)] > 0) {
      throw Error(ErrorCode::AQuotaUnmet,
                  "block " + std::to_string(selection.block) + ": only " +
                      std::to_string(((j == selection.block) ? gamma : delta) - quota[idx(j - 1)]) +
                      " free rungs in cell " + std::to_string(j),
                  column.id);
    }
  }
}

void fill_error_set(const Column& column, int N, RungSelection& selection) {
  const Level R = column.height();
  selection.e.assign(selection.b.size(), {});
  for (std::size_t j = 0; j < selection.b.size(); ++j) {
    const auto& levels = selection.b[j];
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const Level next = (k + 1 < levels.size()) ? levels[k + 1] : R;
      if (next - levels[k] == N + 1) selection.e[j].push_back(levels[k] + N);
    }
  }
}

TowerMeasures tower_measures(const ColumnSystem& system, const ConstructionParams& params,
                             const std::vector<ColumnSelection>& columns) {
  const int t = system.t();
  const Level n = params.N;
  TowerMeasures out;
  out.base_by_cell.assign(idx(t), Ratio());
  out.extra_by_cell.assign(idx(t), Ratio());
  for (const auto& col_sel : columns) {
    const Column& column = system.column(col_sel.column_id);
    const auto& cp = params.for_column(col_sel.column_id);
    const Level R = column.height();
    for (const auto& block : col_sel.blocks) {
      const Ratio rung = column.width * cp.b[idx(block.block - 1)] / Ratio(params.N);
      std::vector<std::int64_t> b_cells(idx(t), 0), a_cells(idx(t), 0);
      std::int64_t b_count = 0, a_count = 0, e_count = 0, short_count = 0, long_count = 0;
      for (std::size_t j = 0; j < block.b.size(); ++j) {
        const auto& levels = block.b[j];
        for (std::size_t k = 0; k < levels.size(); ++k) {
          ++b_count;
          ++b_cells[idx(column.labels[idx(levels[k])] - 1)];
          const Level next = (k + 1 < levels.size()) ? levels[k + 1] : R;
          if (next - levels[k] == n) ++short_count;
          if (next - levels[k] == n + 1) ++long_count;
        }
      }
      for (const auto& levels : block.a) {
        for (const Level l : levels) {
          ++a_count;
          ++a_cells[idx(column.labels[idx(l)] - 1)];
        }
      }
      for (const auto& levels : block.e) e_count += static_cast<std::int64_t>(levels.size());
      out.base += rung * Ratio(b_count);
      out.extra += rung * Ratio(a_count);
      out.error += rung * Ratio(e_count);
      out.base_short += rung * Ratio(short_count);
      out.base_long += rung * Ratio(long_count);
      for (int j = 0; j < t; ++j) {
        out.base_by_cell[idx(j)] += rung * Ratio(b_cells[idx(j)]);
        out.extra_by_cell[idx(j)] += rung * Ratio(a_cells[idx(j)]);
      }
    }
  }
  return out;
}

TowerResult build_tower(const ColumnSystem& system, int N, BuildOptions options) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  if (const auto report = validate_system(system); !report.empty()) {
    throw Error(ErrorCode::Validation, "\n" + format_report(report));
  }
  const int t = system.t();
  const auto m = cell_measures(system);
  const Ratio m1 = *std::min_element(m.begin(), m.end());

  TowerResult result;
  result.params.N = N;
  result.params.M = required_M(N, t, m1);
  result.params.delta = compute_delta(N);

  if (N == 1) {
    // B = X: every level of every column, one subcolumn per block.
    for (const auto& column : system.columns) {
      result.params.columns.push_back({column.id, 0, m});
      ColumnSelection cs{column.id, {}};
      std::vector<Level> all(idx(column.height()));
      for (Level l = 0; l < column.height(); ++l) all[idx(l)] = l;
      for (int i = 1; i <= t; ++i) {
        RungSelection sel;
        sel.column_id = column.id;
        sel.block = i;
        sel.b = {all};
        sel.a = {{}};
        sel.e = {{}};
        sel.net_skips.assign(idx(t), 0);
        cs.blocks.push_back(std::move(sel));
      }
      result.columns.push_back(std::move(cs));
    }
    result.measures = tower_measures(system, result.params, result.columns);
    return result;
  }

  if (!options.allow_small_M) {
    const auto richness = is_rich(system, result.params.M);
    for (const auto& c : richness.columns) {
      if (!c.rich) {
        throw Error(ErrorCode::NotRich,
                    "some cell appears only " + std::to_string(c.min_occurrences) + " times; M = " +
                        std::to_string(result.params.M) + " is required (override with allow_small_M)",
                    c.column_id);
      }
    }
  }

  const std::int64_t delta = result.params.delta;
  for (const auto& column : system.columns) {
    try {
      const std::int64_t gamma = compute_gamma(column.height(), N, t, delta, m1);
      auto b = compute_b(m, gamma, delta, t);
      const SplitColumn split(column, N, b);
      auto blocks = select_column(split, gamma, delta);
      for (auto& sel : blocks) {
        select_A(split, sel, gamma, delta);
        fill_error_set(column, N, sel);
      }
      result.params.columns.push_back({column.id, gamma, std::move(b)});
      result.columns.push_back({column.id, std::move(blocks)});
    } catch (const Error& e) {
      if (!e.where().empty()) throw;
      std::string msg = e.what();
      throw Error(e.code(), msg.substr(msg.find(": ") + 2), column.id);
    }
  }
  result.measures = tower_measures(system, result.params, result.columns);
  return result;
}

}  // namespace alpern
