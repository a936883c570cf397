#include "alpern/richness.hpp"

#include <algorithm>
#include <limits>

#include "alpern/error.hpp"
#include "alpern/ingestion.hpp"

namespace alpern {

std::int64_t required_M(int N, int t, const Ratio& m1) {
  if (N < 1 || t < 1) throw Error(ErrorCode::InvalidArgument, "N and t must be positive");
  if (m1.sign() <= 0 || m1 > Ratio(1)) throw Error(ErrorCode::InvalidArgument, "m1 must lie in (0, 1]");
  const Ratio bound = Ratio(3) * Ratio(N) * Ratio(N) * Ratio(N) * Ratio(t) / m1;
  return to_int64(bound.floor() + 1);
}

bool RichnessReport::rich() const {
  return std::all_of(columns.begin(), columns.end(), [](const ColumnRichness& c) { return c.rich; });
}

RichnessReport is_rich(const ColumnSystem& system, std::int64_t M) {
  RichnessReport report;
  report.M = M;
  for (const auto& c : system.columns) {
    const auto counts = occurrence_counts(c, system.t());
    const std::int64_t least = counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end());
    report.columns.push_back({c.id, least, least >= M});
  }
  return report;
}

std::vector<Convergent> convergents(std::span<const std::int64_t> terms) {
  std::vector<Convergent> out;
  __int128 p_prev = 1, p = 0;  // p_{-1}, p_0
  __int128 q_prev = 0, q = 1;
  for (const auto a : terms) {
    if (a < 1) throw Error(ErrorCode::InvalidArgument, "continued fraction terms must be positive");
    const __int128 p_next = a * p + p_prev;
    const __int128 q_next = a * q + q_prev;
    if (q_next > std::numeric_limits<std::int64_t>::max()) {
      throw Error(ErrorCode::Overflow, "convergent denominator exceeds 64 bits");
    }
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    out.push_back({static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)});
  }
  return out;
}

BreakpointRule equal_breakpoints(int t) {
  return [t](std::int64_t q) {
    std::vector<Ratio> breaks;
    for (int k = 0; k < t; ++k) {
      const auto num = static_cast<std::int64_t>(static_cast<__int128>(k) * q / t);
      breaks.emplace_back(num, q);
    }
    return breaks;
  };
}

EnrichedRotation enrich_rotation(std::span<const std::int64_t> terms, const BreakpointRule& rule, int N, int t) {
  for (const auto& conv : convergents(terms)) {
    if (conv.q < t) continue;
    ColumnSystem system;
    try {
      system = build_rotation({conv.p, conv.q, rule(conv.q)});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ZeroCell || e.code() == ErrorCode::InvalidArgument ||
          e.code() == ErrorCode::BreakpointOffGrid) {
        continue;
      }
      throw;
    }
    if (system.t() != t) {
      throw Error(ErrorCode::InvalidArgument, "breakpoint rule produced " + std::to_string(system.t()) + " cells");
    }
    const auto m = cell_measures(system);
    const Ratio m1 = *std::min_element(m.begin(), m.end());
    const auto M = required_M(N, t, m1);
    if (is_rich(system, M).rich()) return {std::move(system), conv, M};
  }
  throw Error(ErrorCode::Exhausted, "no supplied convergent yields a rich system; supply more terms");
}

}  // namespace alpern
