#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "alpern/construction.hpp"
#include "alpern/ingestion.hpp"
#include "alpern/richness.hpp"
#include "alpern/verification.hpp"
#include "fixtures.hpp"

using namespace alpern;

namespace {

using Rng = std::mt19937_64;

std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// Labels with every cell present, in runs of random length.
std::vector<Cell> random_labels(Rng& rng, int t, std::size_t height, std::int64_t max_run) {
  std::vector<Cell> labels;
  while (labels.size() < height) {
    const auto cell = static_cast<Cell>(uniform(rng, 1, t));
    const auto run = static_cast<std::size_t>(uniform(rng, 1, max_run));
    labels.insert(labels.end(), std::min(run, height - labels.size()), cell);
  }
  for (int j = 1; j <= t; ++j) labels[static_cast<std::size_t>(j - 1) * 2] = j;
  return labels;
}

// k columns with widths w_i / W and the rank-one flow F_ij = w_i w_j / (W sum w),
// so every base receives exactly its width.
ColumnSystem random_system(Rng& rng, int t, int k, std::size_t min_height, std::size_t max_height) {
  ColumnSystem s;
  s.partition = default_partition(t);
  std::vector<std::int64_t> w(static_cast<std::size_t>(k));
  std::int64_t W = 0, sum_w = 0;
  for (int i = 0; i < k; ++i) {
    w[static_cast<std::size_t>(i)] = uniform(rng, 1, 5);
    const auto h = static_cast<std::size_t>(uniform(rng, static_cast<std::int64_t>(min_height),
                                                    static_cast<std::int64_t>(max_height)));
    s.columns.push_back({"c" + std::to_string(i), Ratio(0), random_labels(rng, t, h, 4)});
    W += w[static_cast<std::size_t>(i)] * static_cast<std::int64_t>(h);
    sum_w += w[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < k; ++i) s.columns[static_cast<std::size_t>(i)].width = Ratio(w[static_cast<std::size_t>(i)], W);
  std::vector<int> targets(static_cast<std::size_t>(k));
  std::iota(targets.begin(), targets.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::shuffle(targets.begin(), targets.end(), rng);
    for (int order = 0; order < k; ++order) {
      const auto j = static_cast<std::size_t>(targets[static_cast<std::size_t>(order)]);
      s.edges.push_back({s.columns[static_cast<std::size_t>(i)].id, order, s.columns[j].id,
                         Ratio(w[static_cast<std::size_t>(i)] * w[j], W * sum_w)});
    }
  }
  std::shuffle(s.edges.begin(), s.edges.end(), rng);
  return s;
}

bool construction_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeMass:
    case ErrorCode::TooShort:
    case ErrorCode::QuotaNegative:
    case ErrorCode::QuotaUnmet:
    case ErrorCode::MisalignedHandoff:
    case ErrorCode::AQuotaUnmet:
      return true;
    default:
      return false;
  }
}

}  // namespace

TEST_CASE("property: required_M is the least integer above the bound") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int N = static_cast<int>(uniform(rng, 1, 8));
    const int t = static_cast<int>(uniform(rng, 1, 6));
    const auto q = uniform(rng, 2, 1000);
    const Ratio m1(uniform(rng, 1, q - 1), q);
    const auto M = required_M(N, t, m1);
    const Ratio bound = Ratio(3 * N * N * N * t) / m1;
    CHECK(Ratio(M) > bound);
    CHECK(Ratio(M - 1) <= bound);
    CHECK(required_M(N + 1, t, m1) >= M);
    CHECK(required_M(N, t + 1, m1) >= M);
  }
}

TEST_CASE("property: gamma window and congruence") {
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const int N = static_cast<int>(uniform(rng, 1, 9));
    const int t = static_cast<int>(uniform(rng, 1, 5));
    const auto R = uniform(rng, 1, 100000);
    const auto delta = compute_delta(N);
    const auto q = uniform(rng, 2, 500);
    const Ratio m1(uniform(rng, 1, q - 1), q);
    const auto gamma = compute_gamma(R, N, t, delta, m1);
    CHECK(Ratio(gamma) >= Ratio(delta) / m1);
    CHECK(Ratio(gamma) < Ratio(delta) / m1 + Ratio(N));
    CHECK(((t - 1) * delta + gamma - R) % N == 0);
  }
}

TEST_CASE("property: b sums to one") {
  Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const int t = static_cast<int>(uniform(rng, 2, 6));
    std::vector<std::int64_t> weights(static_cast<std::size_t>(t));
    for (auto& x : weights) x = uniform(rng, 1, 50);
    const auto total = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
    std::vector<Ratio> m;
    for (auto x : weights) m.emplace_back(x, total);
    const int N = static_cast<int>(uniform(rng, 2, 6));
    const auto delta = compute_delta(N);
    const auto m1 = *std::min_element(m.begin(), m.end());
    const auto gamma = compute_gamma(uniform(rng, 100, 10000), N, t, delta, m1);
    const auto b = compute_b(m, gamma, delta, t);
    CHECK(std::accumulate(b.begin(), b.end(), Ratio(0)) == Ratio(1));
    for (const auto& x : b) CHECK(x.sign() >= 0);
  }
}

TEST_CASE("property: labels and systems round trip") {
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const int t = static_cast<int>(uniform(rng, 1, 12));
    const auto labels = random_labels(rng, t, static_cast<std::size_t>(uniform(rng, 2 * t, 300)), 8);
    CHECK(parse_labels(format_labels(labels, t), t) == labels);

    const auto s = random_system(rng, static_cast<int>(uniform(rng, 1, 4)), static_cast<int>(uniform(rng, 1, 4)), 8, 40);
    REQUIRE(validate_system(s).empty());
    const auto text = serialize_system(s);
    CHECK(parse_system(text) == s);
    CHECK(serialize_system(parse_system(text)) == text);
  }
}

TEST_CASE("property: every tower built passes both verifiers") {
  Rng rng(15);
  int built = 0, oracled = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int N = static_cast<int>(uniform(rng, 2, 4));
    const int t = static_cast<int>(uniform(rng, 1, 3));
    const int k = static_cast<int>(uniform(rng, 1, 3));
    const auto s = random_system(rng, t, k, 60, 260);
    TowerResult r;
    try {
      r = build_tower(s, N, {.allow_small_M = true});
    } catch (const Error& e) {
      CAPTURE(e.what());
      CHECK(construction_error(e.code()));
      continue;
    }
    ++built;
    const auto comb = verify_tower(s, r);
    CAPTURE(serialize_system(s));
    CHECK(comb.verdicts().all());
    CHECK(comb.combined.measure == Ratio(1, N));
    CHECK(tower_measures(s, r.params, r.columns) == r.measures);
    for (const auto& col : r.columns)
      for (const auto& sel : col.blocks)
        CHECK(audit_net_skips(s.column(col.column_id), t, sel, r.params.for_column(col.column_id).gamma,
                              r.params.delta)
                  .ok());
    try {
      const auto grid = build_grid(s, r.params, 200000);
      CHECK(oracle_verify(grid, s, r).verdicts == comb.verdicts());
      ++oracled;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::GridTooLarge);
    }
  }
  MESSAGE("built " << built << " of 60, " << oracled << " checked by the oracle");
  CHECK(built >= 20);
  CHECK(oracled >= 10);
}

TEST_CASE("property: mutations are judged alike by both verifiers") {
  Rng rng(16);
  const auto s = fixtures::two_column_system();
  const auto r = build_tower(s, 4, {.allow_small_M = true});
  const auto grid = build_grid(s, r.params, 4'000'000);
  for (int trial = 0; trial < 40; ++trial) {
    auto m = r;
    auto& col = m.columns[static_cast<std::size_t>(uniform(rng, 0, 1))];
    auto& sel = col.blocks[static_cast<std::size_t>(uniform(rng, 0, 1))];
    const auto which = uniform(rng, 0, 2);
    auto& subs = which == 0 ? sel.b : (which == 1 ? sel.a : sel.e);
    auto& levels = subs[static_cast<std::size_t>(uniform(rng, 0, 3))];
    const Level R = s.column(col.column_id).height();
    const Level level = uniform(rng, 0, R - 1);
    const auto it = std::lower_bound(levels.begin(), levels.end(), level);
    if (it != levels.end() && *it == level)
      levels.erase(it);
    else
      levels.insert(it, level);
    const auto comb = verify_tower(s, m);
    CHECK_FALSE(comb.verdicts().all());
    CHECK(oracle_verify(grid, s, m).verdicts == comb.verdicts());
  }
}
