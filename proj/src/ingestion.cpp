#include "alpern/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

#include "alpern/error.hpp"

namespace alpern {

namespace {

std::int64_t parse_int(std::string_view s, const std::string& what) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw Error(ErrorCode::Syntax, "malformed " + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) ++k;
    const std::size_t start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r') ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

}  // namespace

PartitionSpec default_partition(int t) {
  PartitionSpec p;
  for (int j = 1; j <= t; ++j) p.names.push_back("P" + std::to_string(j));
  return p;
}

ColumnSystem build_cyclic(std::vector<Cell> labels, PartitionSpec partition) {
  if (labels.empty()) throw Error(ErrorCode::InvalidArgument, "empty label sequence");
  const int t = partition.t();
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "partition has no cells");
  for (const Cell c : labels) {
    if (c < 1 || c > t) {
      throw Error(ErrorCode::InvalidArgument, "label " + std::to_string(c) + " outside 1.." + std::to_string(t));
    }
  }
  ColumnSystem system;
  system.partition = std::move(partition);
  const auto R = static_cast<std::int64_t>(labels.size());
  system.columns.push_back(Column{"c0", Ratio(1, R), std::move(labels)});
  system.edges.push_back(SeamEdge{"c0", 0, "c0", Ratio(1, R)});
  cell_measures(system);  // ZeroCell
  return system;
}

ColumnSystem build_rotation(const RotationSpec& spec) {
  const std::int64_t q = spec.q;
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "q must be positive");
  if (std::gcd(spec.p, q) != 1) {
    throw Error(ErrorCode::InvalidArgument,
                "gcd(" + std::to_string(spec.p) + ", " + std::to_string(q) + ") != 1");
  }
  const auto& breaks = spec.breakpoints;
  if (breaks.empty() || !breaks.front().is_zero()) {
    throw Error(ErrorCode::InvalidArgument, "breakpoints must start at 0");
  }
  // Grid indices of the breakpoints.
  std::vector<std::int64_t> grid;
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    const Ratio& b = breaks[k];
    if (b.sign() < 0 || b >= Ratio(1)) {
      throw Error(ErrorCode::InvalidArgument, "breakpoint " + b.str() + " outside [0,1)");
    }
    if (k > 0 && !(breaks[k - 1] < b)) {
      throw Error(ErrorCode::InvalidArgument, "breakpoints must be strictly increasing");
    }
    const Ratio scaled = b * Ratio(q);
    if (!scaled.is_integer()) {
      throw Error(ErrorCode::BreakpointOffGrid, "breakpoint " + b.str() + " is not on the 1/" + std::to_string(q) + " grid");
    }
    grid.push_back(to_int64(scaled.numerator()));
  }
  const int t = static_cast<int>(breaks.size());

  std::vector<Cell> labels(static_cast<std::size_t>(q));
  std::vector<char> visited(static_cast<std::size_t>(q), 0);
  const std::int64_t step = ((spec.p % q) + q) % q;
  std::int64_t point = 0;  // r * p mod q
  for (std::int64_t r = 0; r < q; ++r) {
    if (visited[static_cast<std::size_t>(point)]) {
      throw Error(ErrorCode::InvalidArgument, "orbit of 0 revisits grid interval " + std::to_string(point));
    }
    visited[static_cast<std::size_t>(point)] = 1;
    const auto it = std::upper_bound(grid.begin(), grid.end(), point);
    labels[static_cast<std::size_t>(r)] = static_cast<Cell>(it - grid.begin());
    point = static_cast<std::int64_t>((static_cast<__int128>(point) + step) % q);
  }

  ColumnSystem system;
  system.partition = default_partition(t);
  system.columns.push_back(Column{"c0", Ratio(1, q), std::move(labels)});
  system.edges.push_back(SeamEdge{"c0", 0, "c0", Ratio(1, q)});
  cell_measures(system);  // ZeroCell
  return system;
}

std::vector<Cell> parse_labels(std::string_view text, int t) {
  std::vector<Cell> labels;
  if (text.empty()) throw Error(ErrorCode::Syntax, "empty label list");
  const bool comma_form = text.find(',') != std::string_view::npos || text.find('x') != std::string_view::npos;
  if (!comma_form && t <= 9) {
    for (const char ch : text) {
      if (ch < '1' || ch > '9') throw Error(ErrorCode::Syntax, "malformed compact label '" + std::string(1, ch) + "'");
      labels.push_back(ch - '0');
    }
    return labels;
  }
  for (const auto item : split(text, ',')) {
    const auto x = item.find('x');
    if (x == std::string_view::npos) {
      labels.push_back(static_cast<Cell>(parse_int(item, "label")));
      continue;
    }
    const auto cell = parse_int(item.substr(0, x), "label");
    const auto count = parse_int(item.substr(x + 1), "repeat count");
    if (count < 1) throw Error(ErrorCode::Syntax, "repeat count must be positive in '" + std::string(item) + "'");
    labels.insert(labels.end(), static_cast<std::size_t>(count), static_cast<Cell>(cell));
  }
  return labels;
}

std::string format_labels(const std::vector<Cell>& labels, int t) {
  std::string runs;
  for (std::size_t k = 0; k < labels.size();) {
    std::size_t end = k;
    while (end < labels.size() && labels[end] == labels[k]) ++end;
    const std::size_t run = end - k;
    const std::string cell = std::to_string(labels[k]);
    if (run >= 3) {
      if (!runs.empty()) runs += ',';
      runs += cell + "x" + std::to_string(run);
    } else {
      for (std::size_t r = 0; r < run; ++r) {
        if (!runs.empty()) runs += ',';
        runs += cell;
      }
    }
    k = end;
  }
  if (t <= 9) {
    std::string compact;
    compact.reserve(labels.size());
    for (const Cell c : labels) compact += static_cast<char>('0' + c);
    if (compact.size() <= runs.size()) return compact;
  }
  return runs;
}

ColumnSystem parse_system(std::string_view text) {
  ColumnSystem system;
  bool have_header = false;
  bool have_cells = false;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto tok = tokens(raw);
    if (!have_header) {
      if (tok.size() != 2 || tok[0] != "alpern-system" || tok[1] != "v1") {
        throw Error(ErrorCode::Syntax, "expected '" + std::string(kSystemHeader) + "'", where);
      }
      have_header = true;
      continue;
    }
    if (tok.empty()) continue;
    try {
      if (tok[0] == "cells") {
        if (have_cells) throw Error(ErrorCode::Syntax, "duplicate 'cells' line");
        if (tok.size() < 2) throw Error(ErrorCode::Syntax, "missing cell count");
        const auto t = parse_int(tok[1], "cell count");
        if (t < 1 || static_cast<std::size_t>(t) != tok.size() - 2) {
          throw Error(ErrorCode::Syntax, "cell count " + std::string(tok[1]) + " does not match " +
                                             std::to_string(tok.size() - 2) + " names");
        }
        for (std::size_t k = 2; k < tok.size(); ++k) system.partition.names.emplace_back(tok[k]);
        have_cells = true;
      } else if (tok[0] == "column") {
        if (!have_cells) throw Error(ErrorCode::Syntax, "'column' before 'cells'");
        if (tok.size() != 4) throw Error(ErrorCode::Syntax, "expected 'column <id> <width> <labels>'");
        system.columns.push_back(
            Column{std::string(tok[1]), Ratio::parse(tok[2]), parse_labels(tok[3], system.t())});
      } else if (tok[0] == "edge") {
        if (tok.size() != 5) throw Error(ErrorCode::Syntax, "expected 'edge <from> <order> <to> <width>'");
        const auto order = parse_int(tok[2], "edge order");
        if (order < 0) throw Error(ErrorCode::Syntax, "negative edge order");
        system.edges.push_back(SeamEdge{std::string(tok[1]), order, std::string(tok[3]), Ratio::parse(tok[4])});
      } else {
        throw Error(ErrorCode::Syntax, "unknown directive '" + std::string(tok[0]) + "'");
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Syntax || !e.where().empty()) throw;
      std::string msg = e.what();
      msg = msg.substr(msg.find(": ") + 2);
      throw Error(ErrorCode::Syntax, msg, where);
    }
  }
  if (!have_header) throw Error(ErrorCode::Syntax, "empty input", "line 1");
  if (!have_cells) throw Error(ErrorCode::Syntax, "missing 'cells' line");
  const auto report = validate_system(system);
  if (!report.empty()) throw Error(ErrorCode::Validation, "\n" + format_report(report));
  return system;
}

std::string serialize_system(const ColumnSystem& system) {
  std::ostringstream os;
  os << kSystemHeader << '\n';
  os << "cells " << system.t();
  for (const auto& name : system.partition.names) os << ' ' << name;
  os << '\n';
  for (const auto& c : system.columns) {
    os << "column " << c.id << ' ' << c.width.str() << ' ' << format_labels(c.labels, system.t()) << '\n';
  }
  for (const auto& e : system.edges) {
    os << "edge " << e.from << ' ' << e.order << ' ' << e.to << ' ' << e.width.str() << '\n';
  }
  return os.str();
}

}  // namespace alpern
