#include "alpern/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "alpern/error.hpp"

namespace alpern {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::Validation: return "ValidationError";
    case ErrorCode::ZeroCell: return "ZeroCell";
    case ErrorCode::BreakpointOffGrid: return "BreakpointOffGrid";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::QuotaNegative: return "QuotaNegative";
    case ErrorCode::QuotaUnmet: return "QuotaUnmet";
    case ErrorCode::MisalignedHandoff: return "MisalignedHandoff";
    case ErrorCode::AQuotaUnmet: return "AQuotaUnmet";
    case ErrorCode::NotRich: return "NotRich";
    case ErrorCode::Exhausted: return "Exhausted";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::MalformedSelection: return "MalformedSelection";
    case ErrorCode::Overflow: return "Overflow";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string where)
    : std::runtime_error(std::string(to_string(code)) + ": " +
                         (where.empty() ? message : where + ": " + message)),
      code_(code),
      where_(std::move(where)) {}

std::optional<std::size_t> ColumnSystem::index_of(const std::string& id) const {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k].id == id) return k;
  }
  return std::nullopt;
}

const Column& ColumnSystem::column(const std::string& id) const {
  const auto k = index_of(id);
  if (!k) throw Error(ErrorCode::InvalidArgument, "unknown column '" + id + "'");
  return columns[*k];
}

std::string display(const Ratio& r) {
  return r.is_integer() ? r.numerator().get_str() : r.str();
}

namespace {

Violation identity_violation(std::string subject, const std::string& what, const Ratio& lhs,
                             const Ratio& rhs) {
  return {std::move(subject), what + " " + display(lhs) + " ≠ " + display(rhs), lhs, rhs};
}

}  // namespace

ValidationReport validate_system(const ColumnSystem& system) {
  ValidationReport report;
  const int t = system.t();

  if (t < 1) report.push_back({"system", "partition has no cells", {}, {}});
  std::set<std::string> names;
  for (const auto& name : system.partition.names) {
    if (name.empty()) report.push_back({"system", "empty cell name", {}, {}});
    if (!names.insert(name).second) report.push_back({"system", "duplicate cell name '" + name + "'", {}, {}});
  }
  if (system.columns.empty()) report.push_back({"system", "no columns", {}, {}});

  std::set<std::string> ids;
  Ratio mass;
  for (const auto& c : system.columns) {
    const std::string subject = "column " + c.id;
    if (c.id.empty()) report.push_back({subject, "empty column id", {}, {}});
    if (!ids.insert(c.id).second) report.push_back({subject, "duplicate column id", {}, {}});
    if (c.width.sign() <= 0) report.push_back({subject, "width " + display(c.width) + " is not positive", c.width, {}});
    if (c.labels.empty()) report.push_back({subject, "empty label sequence", {}, {}});
    for (std::size_t r = 0; r < c.labels.size(); ++r) {
      if (c.labels[r] < 1 || c.labels[r] > t) {
        report.push_back({subject, "level " + std::to_string(r) + " has label " + std::to_string(c.labels[r]) +
                                       " outside 1.." + std::to_string(t),
                          {}, {}});
        break;
      }
    }
    mass += c.mass();
  }
  if (mass != Ratio(1)) report.push_back(identity_violation("system", "total mass", mass, Ratio(1)));

  std::map<std::string, Ratio> outflow, inflow;
  std::map<std::string, std::vector<std::int64_t>> orders;
  for (const auto& e : system.edges) {
    const std::string subject = "edge " + e.from + "#" + std::to_string(e.order);
    if (!system.index_of(e.from)) report.push_back({subject, "unknown source column '" + e.from + "'", {}, {}});
    if (!system.index_of(e.to)) report.push_back({subject, "unknown target column '" + e.to + "'", {}, {}});
    if (e.width.sign() <= 0) report.push_back({subject, "width " + display(e.width) + " is not positive", e.width, {}});
    outflow[e.from] += e.width;
    inflow[e.to] += e.width;
    orders[e.from].push_back(e.order);
  }
  for (auto& [from, list] : orders) {
    std::sort(list.begin(), list.end());
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (list[k] != static_cast<std::int64_t>(k)) {
        report.push_back({"column " + from, "edge orders are not 0.." + std::to_string(list.size() - 1), {}, {}});
        break;
      }
    }
  }
  for (const auto& c : system.columns) {
    const std::string subject = "column " + c.id;
    const Ratio out = outflow.count(c.id) ? outflow[c.id] : Ratio();
    const Ratio in = inflow.count(c.id) ? inflow[c.id] : Ratio();
    if (out != c.width) report.push_back(identity_violation(subject, "outflow", out, c.width));
    if (in != c.width) report.push_back(identity_violation(subject, "inflow", in, c.width));
  }

  if (t >= 1) {
    std::vector<Ratio> m(static_cast<std::size_t>(t));
    for (const auto& c : system.columns) {
      const auto counts = occurrence_counts(c, t);
      for (int j = 0; j < t; ++j) m[static_cast<std::size_t>(j)] += c.width * Ratio(counts[static_cast<std::size_t>(j)]);
    }
    for (int j = 0; j < t; ++j) {
      if (m[static_cast<std::size_t>(j)].sign() <= 0) {
        report.push_back({"cell " + std::to_string(j + 1), "measure is zero", m[static_cast<std::size_t>(j)], {}});
      }
    }
  }
  return report;
}

std::string format_report(const ValidationReport& report) {
  std::ostringstream os;
  for (const auto& v : report) os << v.str() << '\n';
  return os.str();
}

std::int64_t occurrences(const Column& column, Cell cell) {
  return std::count(column.labels.begin(), column.labels.end(), cell);
}

std::vector<std::int64_t> occurrence_counts(const Column& column, int t) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(std::max(t, 0)), 0);
  for (const Cell c : column.labels) {
    if (c >= 1 && c <= t) ++counts[static_cast<std::size_t>(c - 1)];
  }
  return counts;
}

std::vector<Ratio> cell_measures(const ColumnSystem& system) {
  const int t = system.t();
  std::vector<Ratio> m(static_cast<std::size_t>(t));
  for (const auto& c : system.columns) {
    const auto counts = occurrence_counts(c, t);
    for (std::size_t j = 0; j < m.size(); ++j) m[j] += c.width * Ratio(counts[j]);
  }
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j].is_zero()) {
      throw Error(ErrorCode::ZeroCell, "cell " + std::to_string(j + 1) + " (" + system.partition.names[j] +
                                           ") has measure zero");
    }
  }
  return m;
}

const ColumnParams& ConstructionParams::for_column(const std::string& id) const {
  for (const auto& c : columns) {
    if (c.column_id == id) return c;
  }
  throw Error(ErrorCode::MalformedSelection, "no parameters for column '" + id + "'");
}

SplitColumn::SplitColumn(Column column, int N, std::vector<Ratio> b)
    : column_(std::move(column)), N_(N), b_(std::move(b)) {
  if (N_ < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  Ratio sum;
  Ratio offset;
  for (const auto& bi : b_) {
    if (bi.sign() < 0) throw Error(ErrorCode::NegativeMass, "negative block proportion " + bi.str(), column_.id);
    sum += bi;
    widths_.push_back(column_.width * bi / Ratio(N_));
    block_offsets_.push_back(offset);
    offset += column_.width * bi;
  }
  if (sum != Ratio(1)) {
    throw Error(ErrorCode::InvalidArgument, "block proportions sum to " + display(sum) + ", not 1", column_.id);
  }
}

Ratio SplitColumn::sub_base_offset(int block, int sub) const {
  const auto k = static_cast<std::size_t>(block - 1);
  return block_offsets_[k] + widths_[k] * Ratio(sub - 1);
}

const ColumnSelection& TowerResult::selection(const std::string& column_id) const {
  for (const auto& c : columns) {
    if (c.column_id == column_id) return c;
  }
  throw Error(ErrorCode::MalformedSelection, "no selection for column '" + column_id + "'");
}

}  // namespace alpern
