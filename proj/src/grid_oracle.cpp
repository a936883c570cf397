#include <algorithm>

#include "alpern/error.hpp"
#include "alpern/verification.hpp"

namespace alpern {

namespace {

std::size_t idx(std::int64_t k) { return static_cast<std::size_t>(k); }

std::int64_t atoms_of(const Ratio& width, const mpz_class& G) {
  const mpq_class scaled = width.raw() * mpq_class(G);
  if (scaled.get_den() != 1) throw Error(ErrorCode::InvalidArgument, "width " + width.str() + " is off the grid");
  return to_int64(scaled.get_num());
}

}  // namespace

GridModel::Atom GridModel::atom(std::int64_t index) const {
  const auto it = std::upper_bound(layout_.begin(), layout_.end(), index,
                                   [](std::int64_t v, const ColumnLayout& l) { return v < l.start; });
  Atom a;
  a.column = static_cast<std::size_t>(it - layout_.begin()) - 1;
  const auto& l = layout_[a.column];
  const std::int64_t local = index - l.start;
  a.level = local / l.base_atoms;
  a.base_atom = local % l.base_atoms;
  std::int64_t offset = a.base_atom;
  for (std::size_t i = 0; i < l.block_atoms.size(); ++i) {
    const std::int64_t block_size = l.block_atoms[i] * N_;
    if (offset < block_size) {
      a.block = static_cast<int>(i) + 1;
      a.sub = static_cast<int>(offset / l.block_atoms[i]) + 1;
      break;
    }
    offset -= block_size;
  }
  return a;
}

std::pair<std::int64_t, std::int64_t> GridModel::rung_atoms(std::size_t column, int block, int sub,
                                                            Level level) const {
  const auto& l = layout_[column];
  std::int64_t offset = 0;
  for (int i = 1; i < block; ++i) offset += l.block_atoms[idx(i - 1)] * N_;
  const std::int64_t size = l.block_atoms[idx(block - 1)];
  offset += size * (sub - 1);
  return {l.start + level * l.base_atoms + offset, size};
}

GridModel build_grid(const ColumnSystem& system, const ConstructionParams& params, std::int64_t limit) {
  const int N = params.N;
  const int t = system.t();
  mpz_class G = 1;
  for (const auto& column : system.columns) {
    G = lcm(G, column.width.denominator());
    for (const auto& b : params.for_column(column.id).b) G = lcm(G, (column.width * b / Ratio(N)).denominator());
  }
  for (const auto& e : system.edges) G = lcm(G, e.width.denominator());
  if (G > limit) {
    throw Error(ErrorCode::GridTooLarge, "grid needs " + G.get_str() + " atoms, limit is " + std::to_string(limit));
  }

  GridModel grid;
  grid.G_ = to_int64(G);
  grid.N_ = N;
  grid.t_ = t;
  std::int64_t start = 0;
  for (const auto& column : system.columns) {
    GridModel::ColumnLayout l;
    l.start = start;
    l.base_atoms = atoms_of(column.width, G);
    l.height = column.height();
    for (const auto& b : params.for_column(column.id).b) l.block_atoms.push_back(atoms_of(column.width * b / Ratio(N), G));
    start += l.base_atoms * l.height;
    grid.layout_.push_back(std::move(l));
  }
  if (start != grid.G_) {
    throw Error(ErrorCode::InvalidArgument, "columns hold " + std::to_string(start) + " atoms, expected " + G.get_str());
  }

  grid.next_.assign(idx(start), -1);
  grid.cell_.assign(idx(start), 0);
  for (std::size_t c = 0; c < system.columns.size(); ++c) {
    const auto& l = grid.layout_[c];
    const auto& labels = system.columns[c].labels;
    for (Level r = 0; r < l.height; ++r) {
      for (std::int64_t k = 0; k < l.base_atoms; ++k) {
        const std::int64_t a = l.start + r * l.base_atoms + k;
        grid.cell_[idx(a)] = labels[idx(r)];
        if (r + 1 < l.height) grid.next_[idx(a)] = a + l.base_atoms;
      }
    }
  }

  // Top levels: slices leave in edge order and land left to right in the
  // order edges are declared.
  std::vector<std::int64_t> landed(system.columns.size(), 0);
  std::vector<std::vector<std::pair<std::int64_t, const SeamEdge*>>> leaving(system.columns.size());
  std::vector<std::int64_t> land_at;
  for (const auto& e : system.edges) {
    const std::size_t to = *system.index_of(e.to);
    land_at.push_back(landed[to]);
    landed[to] += atoms_of(e.width, G);
    leaving[*system.index_of(e.from)].push_back({e.order, &e});
  }
  for (std::size_t c = 0; c < system.columns.size(); ++c) {
    auto& out = leaving[c];
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const auto& l = grid.layout_[c];
    const std::int64_t top = l.start + (l.height - 1) * l.base_atoms;
    std::int64_t k = 0;
    for (const auto& [order, edge] : out) {
      const auto e_index = static_cast<std::size_t>(edge - system.edges.data());
      const auto& target = grid.layout_[*system.index_of(edge->to)];
      const std::int64_t count = atoms_of(edge->width, G);
      for (std::int64_t s = 0; s < count; ++s, ++k) grid.next_[idx(top + k)] = target.start + land_at[e_index] + s;
    }
  }
  std::vector<char> hit(idx(start), 0);
  for (const auto n : grid.next_) {
    if (n < 0 || hit[idx(n)]) throw Error(ErrorCode::InvalidArgument, "seam edges do not define a bijection");
    hit[idx(n)] = 1;
  }
  return grid;
}

OracleReport oracle_verify(const GridModel& grid, const ColumnSystem& system, const TowerResult& result) {
  check_selection_shape(system, result);
  const int N = grid.N();
  const int t = grid.t();
  const std::int64_t size = grid.size();
  std::vector<char> in_b(idx(size), 0), in_a(idx(size), 0), in_e(idx(size), 0);
  for (std::size_t c = 0; c < system.columns.size(); ++c) {
    for (const auto& sel : result.selection(system.columns[c].id).blocks) {
      for (int j = 1; j <= N; ++j) {
        const std::pair<const std::vector<Level>*, std::vector<char>*> sets[] = {
            {&sel.b[idx(j - 1)], &in_b}, {&sel.a[idx(j - 1)], &in_a}, {&sel.e[idx(j - 1)], &in_e}};
        for (const auto& [levels, flags] : sets) {
          for (const Level l : *levels) {
            const auto [first, count] = grid.rung_atoms(c, sel.block, j, l);
            std::fill_n(flags->begin() + first, count, 1);
          }
        }
      }
    }
  }

  OracleReport report;
  auto describe = [&](std::int64_t a) {
    const auto atom = grid.atom(a);
    return "atom " + std::to_string(a) + " (column " + system.columns[atom.column].id + " block " +
           std::to_string(atom.block) + " subcolumn " + std::to_string(atom.sub) + " level " +
           std::to_string(atom.level) + ")";
  };

  std::vector<std::int32_t> cover(idx(size), 0);
  for (std::int64_t a = 0; a < size; ++a) {
    if (in_e[idx(a)]) ++cover[idx(a)];
    if (!in_b[idx(a)]) continue;
    std::int64_t x = a;
    for (int k = 0; k < N; ++k) {
      ++cover[idx(x)];
      x = grid.next(x);
    }
    if (in_b[idx(x)]) ++report.short_atoms;
    if (in_e[idx(x)]) ++report.long_atoms;
  }
  report.verdicts.cover = true;
  report.verdicts.error_returns = true;
  report.verdicts.disjoint_AB = true;
  std::vector<std::int64_t> cells(idx(t), 0), b_cells(idx(t), 0), a_cells(idx(t), 0), ab_cells(idx(t), 0);
  std::int64_t ab_atoms = 0;
  for (std::int64_t a = 0; a < size; ++a) {
    if (cover[idx(a)] != 1) {
      if (report.verdicts.cover) report.diagnostics.push_back("cover: " + describe(a) + " covered " +
                                                              std::to_string(cover[idx(a)]) + " times");
      report.verdicts.cover = false;
    }
    if (in_e[idx(a)] && !in_b[idx(grid.next(a))]) {
      if (report.verdicts.error_returns) report.diagnostics.push_back("error set: T of " + describe(a) + " leaves B");
      report.verdicts.error_returns = false;
    }
    if (in_a[idx(a)] && in_b[idx(a)]) {
      if (report.verdicts.disjoint_AB) report.diagnostics.push_back("disjointness: " + describe(a) + " in A and B");
      report.verdicts.disjoint_AB = false;
    }
    const auto cell = idx(grid.cell(a) - 1);
    ++cells[cell];
    if (in_b[idx(a)]) {
      ++report.base_atoms;
      ++b_cells[cell];
    }
    if (in_a[idx(a)]) {
      ++report.extra_atoms;
      ++a_cells[cell];
    }
    if (in_a[idx(a)] || in_b[idx(a)]) {
      ++ab_atoms;
      ++ab_cells[cell];
    }
    if (in_e[idx(a)]) ++report.error_atoms;
  }
  const __int128 G = grid.G();
  report.verdicts.height_identity =
      static_cast<__int128>(N) * report.short_atoms + static_cast<__int128>(N + 1) * report.long_atoms == G;
  auto independent = [&](const std::vector<std::int64_t>& hits, std::int64_t total) {
    for (int j = 0; j < t; ++j) {
      if (static_cast<__int128>(hits[idx(j)]) * G != static_cast<__int128>(total) * cells[idx(j)]) return false;
    }
    return true;
  };
  report.verdicts.independent_B = independent(b_cells, report.base_atoms);
  report.verdicts.independent_A = independent(a_cells, report.extra_atoms);
  report.verdicts.independent_AB = independent(ab_cells, ab_atoms);
  return report;
}

}  // namespace alpern
