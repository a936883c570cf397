// Acceptance battery: every check is an exact rational or integer equality.
// Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "alpern/construction.hpp"
#include "alpern/error.hpp"
#include "alpern/ingestion.hpp"
#include "alpern/report.hpp"
#include "alpern/richness.hpp"
#include "alpern/verification.hpp"

using namespace alpern;

namespace {

struct Failures {
  std::vector<std::string> items;

  void expect(bool ok, const std::string& what) {
    if (!ok) items.push_back(what);
  }
};

struct Entry {
  std::string name;
  ColumnSystem system;
  int N = 1;
  bool forced = false;  // built past a failed richness check
  TowerResult result;
  std::string build_error;
};

const std::vector<std::int64_t>& golden_terms() {
  static const std::vector<std::int64_t> terms(40, 1);
  return terms;
}

std::vector<Cell> alternating(std::size_t height) {
  std::vector<Cell> labels(height);
  for (std::size_t r = 0; r < height; ++r) labels[r] = static_cast<Cell>(r % 2 + 1);
  return labels;
}

ColumnSystem system_for(const std::string& name, int N) {
  if (name == "alternating-1540") return build_cyclic(alternating(1540), default_partition(2));
  if (name == "runs-1000-540") return build_cyclic(parse_labels("1x1000,2x540", 2), default_partition(2));
  const int t = name == "rotation-t2" ? 2 : 3;
  return enrich_rotation(golden_terms(), equal_breakpoints(t), N, t).system;
}

TowerResult build(const ColumnSystem& system, int N, bool& forced) {
  const auto m = cell_measures(system);
  const auto M = required_M(N, system.t(), *std::min_element(m.begin(), m.end()));
  forced = !is_rich(system, M).rich();
  return build_tower(system, N, {.allow_small_M = forced});
}

std::vector<Entry> make_battery() {
  std::vector<Entry> battery;
  for (const char* name : {"alternating-1540", "runs-1000-540", "rotation-t2", "rotation-t3"}) {
    for (int N : {3, 4, 5}) {
      Entry e;
      e.name = name;
      e.N = N;
      e.system = system_for(name, N);
      try {
        e.result = build(e.system, N, e.forced);
      } catch (const Error& err) {
        e.build_error = err.what();
      }
      battery.push_back(std::move(e));
    }
  }
  return battery;
}

std::string label(const Entry& e) {
  std::ostringstream os;
  os << e.name << " N=" << e.N;
  return os.str();
}

// Criterion 1.
void staircases_n4(Failures& f) {
  f.expect(bottom_staircase(4) == Staircase{{0, 4, 8, 12}, {0, 4, 8, 13}, {0, 4, 9, 14}, {0, 5, 10, 15}},
           "bottom_staircase(4)");
  for (Level R : {Level{36}, Level{1540}, Level{10946}}) {
    f.expect(top_staircase(4, R) == Staircase{{R - 15, R - 10, R - 5},
                                             {R - 14, R - 9, R - 4},
                                             {R - 13, R - 8, R - 4},
                                             {R - 12, R - 8, R - 4}},
             "top_staircase(4, " + std::to_string(R) + ")");
  }
}

// Criterion 2.
void independence(const std::vector<Entry>& battery, Failures& f) {
  for (const auto& e : battery) {
    if (!e.build_error.empty()) {
      f.items.push_back(label(e) + ": build_tower failed: " + e.build_error);
      continue;
    }
    const auto& p = e.result.params;
    const auto m = cell_measures(e.system);
    const auto b = verify_independence(e.system, p, rung_set(e.result, RungSetKind::B), "B");
    const auto a = verify_independence(e.system, p, rung_set(e.result, RungSetKind::A), "A");
    const auto ab = verify_independence(e.system, p, rung_set(e.result, RungSetKind::AB), "A∪B");
    for (std::size_t j = 0; j < m.size(); ++j) {
      f.expect(b.intersection[j] == b.measure * m[j], label(e) + ": μ(B∩P" + std::to_string(j + 1) + ")");
      f.expect(a.intersection[j] == a.measure * m[j], label(e) + ": μ(A∩P" + std::to_string(j + 1) + ")");
    }
    f.expect(b.independent() && a.independent() && ab.independent(), label(e) + ": independence verdicts");
    f.expect(ab.measure == Ratio(1, e.N), label(e) + ": μ(A∪B) = " + ab.measure.str());
  }
}

// Criterion 3.
void alpern_contract(const std::vector<Entry>& battery, Failures& f) {
  for (const auto& e : battery) {
    if (!e.build_error.empty()) {
      f.items.push_back(label(e) + ": no tower");
      continue;
    }
    const auto r = verify_alpern(e.system, e.result);
    f.expect(r.gap_spectrum, label(e) + ": gap spectrum");
    f.expect(r.cover, label(e) + ": cover");
    f.expect(r.error_returns, label(e) + ": T(E) ⊂ B");
    f.expect(Ratio(e.N) * r.base_short + Ratio(e.N + 1) * r.base_long == Ratio(1), label(e) + ": height identity");
    f.expect(r.ok(), label(e) + ": verify_alpern");
  }
}

bool positive_width(const TowerResult& r, const std::string& column, int block) {
  return r.params.for_column(column).b[static_cast<std::size_t>(block - 1)].sign() > 0;
}

// Criterion 4.
void oracle_equivalence(const std::vector<Entry>& battery, Failures& f, std::string& detail) {
  std::mt19937_64 rng(20240607);
  int covered = 0;
  std::vector<std::string> skipped;
  for (const auto& e : battery) {
    if (!e.build_error.empty()) {
      f.items.push_back(label(e) + ": no tower");
      continue;
    }
    GridModel grid;
    try {
      grid = build_grid(e.system, e.result.params, kDefaultGridLimit);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::GridTooLarge) throw;
      skipped.push_back(label(e));
      continue;
    }
    ++covered;
    const auto comb = verify_tower(e.system, e.result).verdicts();
    const auto oracle = oracle_verify(grid, e.system, e.result).verdicts;
    f.expect(comb == oracle && comb.all(), label(e) + ": valid output verdicts differ");

    for (int k = 0; k < 20; ++k) {
      auto mutated = e.result;
      auto& col = mutated.columns[std::uniform_int_distribution<std::size_t>(0, mutated.columns.size() - 1)(rng)];
      std::vector<int> blocks;
      for (const auto& sel : col.blocks)
        if (positive_width(mutated, col.column_id, sel.block)) blocks.push_back(sel.block);
      const int block = blocks[std::uniform_int_distribution<std::size_t>(0, blocks.size() - 1)(rng)];
      auto& sel = col.blocks[static_cast<std::size_t>(block - 1)];
      const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
      auto& subs = kind == 0 ? sel.b : (kind == 1 ? sel.a : sel.e);
      auto& levels = subs[std::uniform_int_distribution<std::size_t>(0, subs.size() - 1)(rng)];
      const Level R = e.system.column(col.column_id).height();
      const Level level = std::uniform_int_distribution<Level>(0, R - 1)(rng);
      const auto it = std::lower_bound(levels.begin(), levels.end(), level);
      if (it != levels.end() && *it == level)
        levels.erase(it);
      else
        levels.insert(it, level);
      const auto mc = verify_tower(e.system, mutated).verdicts();
      const auto mo = oracle_verify(grid, e.system, mutated).verdicts;
      std::ostringstream what;
      what << label(e) << ": mutation " << k << " (" << "BAE"[kind] << " rung, column " << col.column_id << ", block "
           << block << ", level " << level << ")";
      f.expect(!mc.all(), what.str() + " accepted by the combinatorial verifier");
      f.expect(!mo.all(), what.str() + " accepted by the oracle");
      f.expect(mc == mo, what.str() + " verdicts differ");
    }
  }
  detail = std::to_string(covered) + " systems within the grid limit";
  if (!skipped.empty()) {
    detail += "; beyond it:";
    for (const auto& s : skipped) detail += " [" + s + "]";
  }
  f.expect(covered > 0, "no battery system fits the grid limit");
}

// Criterion 5.
void ledger_identities(const std::vector<Entry>& battery, Failures& f) {
  for (const auto& e : battery) {
    if (!e.build_error.empty()) {
      f.items.push_back(label(e) + ": no tower");
      continue;
    }
    const int t = e.system.t();
    const auto delta = e.result.params.delta;
    for (const auto& col : e.result.columns) {
      const auto& column = e.system.column(col.column_id);
      const Level R = column.height();
      const auto gamma = e.result.params.for_column(col.column_id).gamma;
      const auto counts = occurrence_counts(column, t);
      for (const auto& sel : col.blocks) {
        const std::string where = label(e) + " column " + col.column_id + " block " + std::to_string(sel.block);
        const auto K = count_middle_skips(column, e.N, sel);
        f.expect(K == gamma + (t - 1) * delta - (e.N - 1), where + ": middle skips " + std::to_string(K));
        f.expect(((K - (R + 1)) % e.N + e.N) % e.N == 0, where + ": middle skips ≢ R+1 (mod N)");
        f.expect(K == sel.middle_skips, where + ": reported middle skips");
        const auto audit = audit_net_skips(column, t, sel, gamma, delta);
        f.expect(audit.ok(), where + ": net skips");
        f.expect(audit.net == sel.net_skips, where + ": reported net skips");
        std::vector<std::int64_t> selected(static_cast<std::size_t>(t), 0);
        for (const auto* subs : {&sel.b, &sel.a})
          for (const auto& levels : *subs)
            for (const Level l : levels) ++selected[static_cast<std::size_t>(column.labels[static_cast<std::size_t>(l)] - 1)];
        f.expect(selected == counts, where + ": B+A selections differ from appearances");
      }
    }
  }
}

// Criterion 6.
void formula_spot_checks(Failures& f) {
  f.expect(compute_delta(4) == 12, "compute_delta(4)");
  f.expect(compute_gamma(1540, 4, 2, 12, Ratio(1, 2)) == 24, "compute_gamma(1540, 4, 2, 12, 1/2)");
  const std::vector<Ratio> m{Ratio(1, 3), Ratio(2, 3)};
  const auto b = compute_b(m, 36, 12, 2);
  f.expect(b == std::vector<Ratio>{Ratio(1, 6), Ratio(5, 6)}, "compute_b((1/3, 2/3), 36, 12, 2)");
  f.expect(b.size() == 2 && b[0] + b[1] == Ratio(1), "Σb = 1");
}

void expect_verified(const ColumnSystem& s, const TowerResult& r, const std::string& where, Failures& f) {
  const auto comb = verify_tower(s, r).verdicts();
  f.expect(comb.all(), where + ": combinatorial verdicts");
  try {
    const auto grid = build_grid(s, r.params, kDefaultGridLimit);
    f.expect(oracle_verify(grid, s, r).verdicts == comb, where + ": oracle disagrees");
  } catch (const Error& err) {
    if (err.code() != ErrorCode::GridTooLarge) throw;
  }
}

// Criterion 7.
void degenerate_branches(const std::vector<Entry>& battery, Failures& f) {
  for (const auto& e : battery) {
    if (e.N != 3) continue;
    const std::string where = e.name + " N=1";
    const auto r = build_tower(e.system, 1);
    const auto m = cell_measures(e.system);
    f.expect(r.measures.base == Ratio(1), where + ": μ(B) = " + r.measures.base.str());
    f.expect(r.measures.error.is_zero(), where + ": μ(E) = " + r.measures.error.str());
    f.expect(r.measures.base_by_cell == m, where + ": μ(B∩P_j) = m_j");
    for (const auto& c : r.params.columns) f.expect(c.b == m, where + ": b = m");
    expect_verified(e.system, r, where, f);
  }

  // t = 1 with R = 100 ≡ 1 (mod 3): gamma = delta = 4.
  const auto single = build_cyclic(std::vector<Cell>(100, 1), default_partition(1));
  const auto r = build_tower(single, 3);
  f.expect(r.params.delta == 4 && r.params.columns[0].gamma == 4, "t=1: gamma = delta = 4");
  f.expect(r.params.columns[0].b == std::vector<Ratio>{Ratio(1)}, "t=1: b = (1)");
  expect_verified(single, r, "t=1 N=3", f);
  f.expect(r.measures.base + r.measures.extra == Ratio(1, 3), "t=1: μ(A∪B) = 1/3");
}

// Criterion 8.
void round_trip_determinism(const std::vector<Entry>& battery, Failures& f) {
  for (const auto& e : battery) {
    const auto text = serialize_system(e.system);
    f.expect(parse_system(text) == e.system, label(e) + ": parse(serialize(system))");
    f.expect(serialize_system(parse_system(text)) == text, label(e) + ": serialize(parse(text))");
    if (!e.build_error.empty()) {
      f.items.push_back(label(e) + ": no tower");
      continue;
    }
    const auto report = write_tower_report(e.system, e.result);
    f.expect(read_tower_report(e.system, report) == e.result, label(e) + ": read(write(report))");

    // A second, independent run of the whole pipeline.
    const auto again = system_for(e.name, e.N);
    bool forced = false;
    const auto rerun = build(again, e.N, forced);
    f.expect(serialize_system(again) == text, label(e) + ": system text differs between runs");
    f.expect(write_tower_report(again, rerun) == report, label(e) + ": report differs between runs");
  }
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  std::vector<Entry> battery;
  try {
    battery = make_battery();
  } catch (const std::exception& err) {
    std::cout << "battery setup failed: " << err.what() << '\n';
    return 1;
  }
  for (const auto& e : battery) {
    if (e.forced) std::cout << "note: " << label(e) << " is below the richness bound, built with the override\n";
  }

  struct Criterion {
    int id;
    std::string title;
    std::function<void(Failures&, std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "N = 4 boundary staircases", [](Failures& f, std::string&) { staircases_n4(f); }},
      {2, "exact independence of B, A and A∪B", [&](Failures& f, std::string&) { independence(battery, f); }},
      {3, "Alpern contract", [&](Failures& f, std::string&) { alpern_contract(battery, f); }},
      {4, "grid oracle equivalence", [&](Failures& f, std::string& d) { oracle_equivalence(battery, f, d); }},
      {5, "ledger identities", [&](Failures& f, std::string&) { ledger_identities(battery, f); }},
      {6, "formula spot checks", [](Failures& f, std::string&) { formula_spot_checks(f); }},
      {7, "degenerate branches", [&](Failures& f, std::string&) { degenerate_branches(battery, f); }},
      {8, "round trip and determinism", [&](Failures& f, std::string&) { round_trip_determinism(battery, f); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Failures f;
    std::string detail;
    const auto t0 = Clock::now();
    try {
      c.run(f, detail);
    } catch (const std::exception& err) {
      f.items.push_back(std::string("exception: ") + err.what());
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    const bool ok = f.items.empty();
    if (!ok) ++failed;
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << " [" << ms << " ms]\n";
    const std::size_t shown = std::min<std::size_t>(f.items.size(), 10);
    for (std::size_t k = 0; k < shown; ++k) std::cout << "      " << f.items[k] << '\n';
    if (f.items.size() > shown) std::cout << "      ... " << f.items.size() - shown << " more\n";
  }
  const auto total = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << " in " << total
            << " ms\n";
  return failed == 0 ? 0 : 1;
}
