#include "alpern/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "alpern/error.hpp"

namespace alpern {

namespace {

using ordered_json = nlohmann::ordered_json;

std::size_t idx(std::int64_t k) { return static_cast<std::size_t>(k); }

ordered_json ratios(const std::vector<Ratio>& values) {
  ordered_json out = ordered_json::array();
  for (const auto& v : values) out.push_back(v.str());
  return out;
}

ordered_json triples(const ColumnSelection& col, std::vector<std::vector<Level>> RungSelection::*which) {
  ordered_json out = ordered_json::array();
  for (const auto& block : col.blocks) {
    const auto& lists = block.*which;
    for (std::size_t j = 0; j < lists.size(); ++j) {
      for (const Level l : lists[j]) out.push_back(ordered_json::array({block.block, static_cast<int>(j) + 1, l}));
    }
  }
  return out;
}

bool scalar_array(const ordered_json& j) {
  return j.is_array() && std::all_of(j.begin(), j.end(), [](const ordered_json& x) { return x.is_primitive(); });
}

// Pretty printer that keeps arrays of scalars on one line.
void emit(std::ostringstream& os, const ordered_json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) os << ",\n";
      first = false;
      os << pad << ordered_json(key).dump() << ": ";
      emit(os, value, depth + 1);
    }
    os << '\n' << close << '}';
  } else if (j.is_array() && !scalar_array(j)) {
    if (std::all_of(j.begin(), j.end(), [](const ordered_json& x) { return scalar_array(x); })) {
      os << "[";
      for (std::size_t k = 0; k < j.size(); ++k) os << (k ? ", " : "") << j[k].dump();
      os << ']';
      return;
    }
    os << "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      os << pad;
      emit(os, j[k], depth + 1);
      os << (k + 1 < j.size() ? ",\n" : "\n");
    }
    os << close << ']';
  } else {
    os << j.dump();
  }
}

template <class T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::MalformedSelection, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedSelection, std::string("field '") + key + "': " + e.what());
  }
}

Ratio ratio_field(const nlohmann::json& j, const char* key) {
  try {
    return Ratio::parse(field<std::string>(j, key));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedSelection) throw;
    throw Error(ErrorCode::MalformedSelection, std::string("field '") + key + "' is not a rational");
  }
}

std::vector<Ratio> ratio_list(const nlohmann::json& j, const char* key) {
  std::vector<Ratio> out;
  for (const auto& s : field<std::vector<std::string>>(j, key)) {
    try {
      out.push_back(Ratio::parse(s));
    } catch (const Error&) {
      throw Error(ErrorCode::MalformedSelection, std::string("field '") + key + "' holds a non-rational");
    }
  }
  return out;
}

}  // namespace

std::string write_tower_report(const ColumnSystem& system, const TowerResult& result) {
  ordered_json root;
  root["format"] = std::string(kReportFormat);
  root["cells"] = system.partition.names;

  ordered_json params;
  params["N"] = result.params.N;
  params["M"] = result.params.M;
  params["delta"] = result.params.delta;
  params["columns"] = ordered_json::array();
  for (const auto& c : result.params.columns) {
    ordered_json col;
    col["id"] = c.column_id;
    col["gamma"] = c.gamma;
    col["b"] = ratios(c.b);
    params["columns"].push_back(std::move(col));
  }
  root["params"] = std::move(params);

  const auto& m = result.measures;
  ordered_json measures;
  measures["B"] = m.base.str();
  measures["A"] = m.extra.str();
  measures["A_union_B"] = (m.base + m.extra).str();
  measures["E"] = m.error.str();
  measures["B_N"] = m.base_short.str();
  measures["B_N+1"] = m.base_long.str();
  measures["B_by_cell"] = ratios(m.base_by_cell);
  measures["A_by_cell"] = ratios(m.extra_by_cell);
  root["measures"] = std::move(measures);

  root["selections"] = ordered_json::array();
  for (const auto& col : result.columns) {
    ordered_json sel;
    sel["column"] = col.column_id;
    ordered_json ledger = ordered_json::array();
    for (const auto& block : col.blocks) {
      ledger.push_back({{"block", block.block}, {"net_skips", block.net_skips}, {"middle_skips", block.middle_skips}});
    }
    sel["ledger"] = std::move(ledger);
    sel["B"] = triples(col, &RungSelection::b);
    sel["A"] = triples(col, &RungSelection::a);
    sel["E"] = triples(col, &RungSelection::e);
    root["selections"].push_back(std::move(sel));
  }

  std::ostringstream os;
  emit(os, root, 0);
  os << '\n';
  return os.str();
}

TowerResult read_tower_report(const ColumnSystem& system, std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedSelection, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object() || field<std::string>(root, "format") != kReportFormat) {
    throw Error(ErrorCode::MalformedSelection, "not an " + std::string(kReportFormat) + " report");
  }
  const int t = system.t();
  TowerResult result;
  const auto params = field<nlohmann::json>(root, "params");
  result.params.N = field<int>(params, "N");
  result.params.M = field<std::int64_t>(params, "M");
  result.params.delta = field<std::int64_t>(params, "delta");
  const int N = result.params.N;
  if (N < 1) throw Error(ErrorCode::MalformedSelection, "N must be positive");
  for (const auto& c : field<nlohmann::json>(params, "columns")) {
    result.params.columns.push_back({field<std::string>(c, "id"), field<std::int64_t>(c, "gamma"), ratio_list(c, "b")});
  }

  const auto& m = field<nlohmann::json>(root, "measures");
  result.measures.base = ratio_field(m, "B");
  result.measures.extra = ratio_field(m, "A");
  result.measures.error = ratio_field(m, "E");
  result.measures.base_short = ratio_field(m, "B_N");
  result.measures.base_long = ratio_field(m, "B_N+1");
  result.measures.base_by_cell = ratio_list(m, "B_by_cell");
  result.measures.extra_by_cell = ratio_list(m, "A_by_cell");

  for (const auto& s : field<nlohmann::json>(root, "selections")) {
    ColumnSelection col;
    col.column_id = field<std::string>(s, "column");
    const auto column_index = system.index_of(col.column_id);
    if (!column_index) throw Error(ErrorCode::MalformedSelection, "unknown column '" + col.column_id + "'");
    for (int i = 1; i <= t; ++i) {
      RungSelection block;
      block.column_id = col.column_id;
      block.block = i;
      block.b.assign(idx(N), {});
      block.a.assign(idx(N), {});
      block.e.assign(idx(N), {});
      block.net_skips.assign(idx(t), 0);
      col.blocks.push_back(std::move(block));
    }
    if (s.contains("ledger")) {
      for (const auto& entry : s.at("ledger")) {
        const int i = field<int>(entry, "block");
        if (i < 1 || i > t) throw Error(ErrorCode::MalformedSelection, "ledger block out of range", col.column_id);
        col.blocks[idx(i - 1)].net_skips = field<std::vector<std::int64_t>>(entry, "net_skips");
        col.blocks[idx(i - 1)].middle_skips = field<std::int64_t>(entry, "middle_skips");
      }
    }
    const std::pair<const char*, std::vector<std::vector<Level>> RungSelection::*> sets[] = {
        {"B", &RungSelection::b}, {"A", &RungSelection::a}, {"E", &RungSelection::e}};
    for (const auto& [key, which] : sets) {
      for (const auto& triple : field<std::vector<std::vector<std::int64_t>>>(s, key)) {
        if (triple.size() != 3 || triple[0] < 1 || triple[0] > t || triple[1] < 1 || triple[1] > N) {
          throw Error(ErrorCode::MalformedSelection, std::string("bad ") + key + " rung", col.column_id);
        }
        (col.blocks[idx(triple[0] - 1)].*which)[idx(triple[1] - 1)].push_back(triple[2]);
      }
    }
    for (auto& block : col.blocks) {
      for (auto* lists : {&block.b, &block.a, &block.e}) {
        for (auto& levels : *lists) {
          std::sort(levels.begin(), levels.end());
          levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        }
      }
    }
    result.columns.push_back(std::move(col));
  }
  return result;
}

}  // namespace alpern
