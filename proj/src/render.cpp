#include "alpern/render.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <sstream>
#include <vector>

#include "alpern/error.hpp"

namespace alpern {

namespace {

std::size_t idx(std::int64_t k) { return static_cast<std::size_t>(k); }

Level parse_endpoint(std::string_view s, Level R) {
  Level base = 0;
  int sign = 1;
  if (!s.empty() && s[0] == 'R') {
    base = R;
    s.remove_prefix(1);
    if (s.empty()) return base;
    if (s[0] != '-' && s[0] != '+') throw Error(ErrorCode::Syntax, "malformed level");
    sign = s[0] == '-' ? -1 : 1;
    s.remove_prefix(1);
  }
  Level v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
    throw Error(ErrorCode::Syntax, "malformed level");
  }
  return base + sign * v;
}

enum class Mark { None, B, A };

// Marks of the rendered column: [block][sub][level].
struct Grid {
  const Column* column = nullptr;
  int t = 1;
  int N = 1;
  std::vector<int> blocks;
  LevelRange range;
  std::vector<std::vector<std::vector<Mark>>> marks;
};

Grid prepare(const ColumnSystem& system, const TowerResult* result, const RenderOptions& options) {
  Grid g;
  if (options.column) {
    const auto k = system.index_of(*options.column);
    if (!k) throw Error(ErrorCode::InvalidArgument, "unknown column '" + *options.column + "'");
    g.column = &system.columns[*k];
  } else {
    g.column = &system.columns.front();
  }
  g.t = system.t();
  g.N = result ? result->params.N : options.subcolumns;
  if (g.N < 1) throw Error(ErrorCode::InvalidArgument, "subcolumn count must be positive");
  if (options.block) {
    if (*options.block < 1 || *options.block > g.t) {
      throw Error(ErrorCode::InvalidArgument, "block " + std::to_string(*options.block) + " outside 1.." +
                                                  std::to_string(g.t));
    }
    g.blocks = {*options.block};
  } else {
    for (int i = 1; i <= g.t; ++i) g.blocks.push_back(i);
  }
  const Level R = g.column->height();
  g.range = options.levels.value_or(LevelRange{0, R - 1});
  if (g.range.first < 0 || g.range.last >= R || g.range.first > g.range.last) {
    throw Error(ErrorCode::Syntax, "level range outside 0.." + std::to_string(R - 1));
  }
  g.marks.assign(idx(g.t), std::vector<std::vector<Mark>>(idx(g.N), std::vector<Mark>(idx(R), Mark::None)));
  if (result) {
    for (const auto& sel : result->selection(g.column->id).blocks) {
      if (sel.block < 1 || sel.block > g.t) continue;
      for (std::size_t j = 0; j < sel.b.size() && j < idx(g.N); ++j) {
        for (const Level l : sel.a[j]) {
          if (l >= 0 && l < R) g.marks[idx(sel.block - 1)][j][idx(l)] = Mark::A;
        }
        for (const Level l : sel.b[j]) {
          if (l >= 0 && l < R) g.marks[idx(sel.block - 1)][j][idx(l)] = Mark::B;
        }
      }
    }
  }
  return g;
}

}  // namespace

LevelRange parse_level_range(std::string_view text, Level R) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) throw Error(ErrorCode::Syntax, "level range must look like a..b");
  LevelRange range;
  try {
    range.first = parse_endpoint(text.substr(0, dots), R);
    range.last = parse_endpoint(text.substr(dots + 2), R);
  } catch (const Error&) {
    throw Error(ErrorCode::Syntax, "malformed level range '" + std::string(text) + "'");
  }
  if (range.first < 0 || range.last >= R || range.first > range.last) {
    throw Error(ErrorCode::Syntax, "level range '" + std::string(text) + "' outside 0.." + std::to_string(R - 1));
  }
  return range;
}

std::string render_ascii(const ColumnSystem& system, const TowerResult* result, const RenderOptions& options) {
  const Grid g = prepare(system, result, options);
  const int width = static_cast<int>(std::to_string(g.range.last).size());
  std::ostringstream os;
  os << "column " << g.column->id << " R=" << g.column->height() << " N=" << g.N << '\n';
  os << std::setw(width) << "" << "   ";
  for (const int i : g.blocks) {
    std::string head = std::to_string(i);
    head.resize(idx(g.N), ' ');
    os << '|' << head;
  }
  os << "|\n";
  for (Level l = g.range.last; l >= g.range.first; --l) {
    os << std::setw(width) << l << ' ' << g.column->labels[idx(l)] << ' ';
    for (const int i : g.blocks) {
      os << '|';
      for (int j = 0; j < g.N; ++j) {
        switch (g.marks[idx(i - 1)][idx(j)][idx(l)]) {
          case Mark::B: os << '#'; break;
          case Mark::A: os << 'A'; break;
          case Mark::None: os << '-'; break;
        }
      }
    }
    os << "|\n";
  }
  return os.str();
}

std::string render_svg(const ColumnSystem& system, const TowerResult* result, const RenderOptions& options) {
  const Grid g = prepare(system, result, options);
  constexpr int unit = 20;
  constexpr int rung = 20;
  constexpr int margin = 40;
  const Level rows = g.range.last - g.range.first + 1;
  const int cols = static_cast<int>(g.blocks.size()) * (g.N + 1) - 1;
  const long width = 2 * margin + static_cast<long>(cols) * 2 * unit;
  const long height = 2 * margin + rows * unit + unit;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
     << "<title>column " << g.column->id << " levels " << g.range.first << ".." << g.range.last << "</title>\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  int slot = 0;
  for (const int i : g.blocks) {
    for (int j = 1; j <= g.N; ++j, ++slot) {
      const long x = margin + static_cast<long>(slot) * 2 * unit;
      for (Level l = g.range.first; l <= g.range.last; ++l) {
        const long y = margin + (g.range.last - l) * unit;
        const Mark mark = g.marks[idx(i - 1)][idx(j - 1)][idx(l)];
        const char* stroke = mark == Mark::A ? "#c0392b" : "black";
        const double w = mark == Mark::B ? 5.0 : (mark == Mark::A ? 3.0 : 1.0);
        os << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + rung << "\" y2=\"" << y
           << "\" stroke=\"" << stroke << "\" stroke-width=\"" << w << "\"/>\n";
      }
      os << "<text x=\"" << x << "\" y=\"" << margin + rows * unit + unit / 2
         << "\" font-family=\"serif\" font-size=\"12\">C(" << i << ")" << j << "</text>\n";
    }
    ++slot;
  }
  for (Level l = g.range.first; l <= g.range.last; ++l) {
    os << "<text x=\"4\" y=\"" << margin + (g.range.last - l) * unit + 4
       << "\" font-family=\"monospace\" font-size=\"10\">" << l << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace alpern
