#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "nblink/mab_engine.hpp"

using namespace nblink;

namespace {
MabParams params_with(int c, double d, std::size_t k) {
  MabParams p;
  p.c = c;
  p.d = d;
  p.big_k = k;
  return p;
}

MabParams never_explore() {
  MabParams p;
  p.c = 1;
  p.d = 1e3;
  p.big_k = 1;
  return p;  // epsilon = 1e-6 / t
}

const LinkConfig A1{3, 1, 1};
const LinkConfig A2{5, 2, 1};
}  // namespace

TEST_CASE("epsilon schedule") {
  CHECK(epsilon(1, params_with(2, 0.5, 100)) == 1.0);
  CHECK(epsilon(1000, params_with(2, 0.5, 100)) == doctest::Approx(0.8));
  CHECK(epsilon(1'000'000'000'000ULL, params_with(2, 0.5, 100)) < 1e-8);
  CHECK_THROWS_AS(epsilon(0, params_with(2, 0.5, 100)), std::domain_error);
  const auto p = params_with(5, 0.1, 624);
  double prev = 1.0;
  for (std::uint64_t t = 1; t < 5'000'000; t = t * 3 + 1) {
    const double e = epsilon(t, p);
    CHECK(e <= 1.0);
    CHECK(e <= prev);
    prev = e;
  }
}

TEST_CASE("reward") {
  MabParams p;
  CHECK(reward(0.2, p) == doctest::Approx(5.0));
  CHECK(reward(1.0, p) == 1.0);
  CHECK(reward(0.0, p) == doctest::Approx(1000.0));
}

TEST_CASE("params validation") {
  MabParams p;
  p.c = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.d = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.delta_db = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("exploitation cases") {
  StatisticTable t;
  t.push({10.0, A1, 0.30, 0});
  t.push({10.5, A2, 0.10, 1});
  const MabParams p = never_explore();
  CHECK(exploit_arm(10.2, t, p) == A2);  // local minimum
  CHECK(exploit_arm(30.0, t, p) == A2);  // nothing within delta: global minimum
  Rng rng(3);
  const std::vector<LinkConfig> arms{A1, A2};
  CHECK(select_arm(10.2, 1, t, p, arms, rng) == A2);
}

TEST_CASE("local subset wins over global minimum") {
  StatisticTable t;
  t.push({10.0, A1, 0.30, 0});
  t.push({20.0, A2, 0.05, 1});
  CHECK(exploit_arm(10.4, t, never_explore()) == A1);
}

TEST_CASE("ties go to the most recent entry") {
  StatisticTable t;
  t.push({10.0, A1, 0.2, 0});
  t.push({10.1, A2, 0.2, 1});
  CHECK(exploit_arm(10.0, t, never_explore()) == A2);
  t.push({9.9, A1, 0.2, 2});
  CHECK(exploit_arm(10.0, t, never_explore()) == A1);
}

TEST_CASE("exploration") {
  const std::vector<LinkConfig> one{A1};
  StatisticTable empty;
  Rng rng(1);
  for (int i = 0; i < 20; ++i) CHECK(select_arm(12.0, 1, empty, MabParams{}, one, rng) == A1);
  // Empty table explores even when epsilon is tiny.
  const std::vector<LinkConfig> two{A1, A2};
  int seen_a2 = 0;
  for (int i = 0; i < 200; ++i) seen_a2 += select_arm(12.0, 1, empty, never_explore(), two, rng) == A2;
  CHECK(seen_a2 > 50);
  CHECK(seen_a2 < 150);
}

TEST_CASE("table updates and capacity") {
  MabParams p;
  p.table_capacity = 3;
  MabEngine e({A1, A2}, p, 7);
  CHECK(e.table().empty());
  e.update(10.0, A1, 0.3, 1);
  CHECK(e.table().size() == 1);
  e.update(10.0, A1, 0.1, 2);
  CHECK(e.table().size() == 2);
  CHECK(e.table()[0].plr == 0.3);
  CHECK(e.table()[1].plr == 0.1);
  e.update(11.0, A2, 0.5, 3);
  e.update(12.0, A2, 0.6, 4);
  CHECK(e.table().size() == 3);
  CHECK(e.table()[0].timestamp_ms == 2);
  CHECK_THROWS_AS(e.update(10.0, A1, 1.5, 5), std::domain_error);
}

TEST_CASE("eviction keeps the index consistent") {
  StatisticTable t(2);
  t.push({10.0, A1, 0.0, 0});
  t.push({10.0, A2, 0.5, 1});
  t.push({10.0, A1, 0.7, 2});  // evicts the zero-PLR entry
  CHECK(t.best_overall()->arm == A2);
  CHECK(t.best_in_range(9.0, 11.0)->plr == 0.5);
}

TEST_CASE("exploitation matches an exhaustive oracle") {
  Rng rng(11);
  std::uniform_real_distribution<double> sinr(0.0, 30.0);
  std::uniform_int_distribution<int> plr_steps(0, 20);
  const auto arms = full_arm_space(RepetitionSet::uplink(), 6);
  std::uniform_int_distribution<std::size_t> pick(0, arms.size() - 1);
  MabParams p = never_explore();
  for (int trial = 0; trial < 20; ++trial) {
    StatisticTable t(500, 0.25);
    std::vector<StatEntry> all;
    for (int i = 0; i < 700; ++i) {
      StatEntry e{sinr(rng), arms[pick(rng)], plr_steps(rng) / 20.0, i};
      t.push(e);
      all.push_back(e);
    }
    all.erase(all.begin(), all.end() - 500);
    for (int q = 0; q < 50; ++q) {
      const double s = sinr(rng) * 1.2 - 3.0;
      const StatEntry* best = nullptr;
      for (const auto& e : all)
        if (e.sinr_db >= s - p.delta_db && e.sinr_db <= s + p.delta_db &&
            (!best || e.plr <= best->plr))
          best = &e;
      if (!best)
        for (const auto& e : all)
          if (!best || e.plr <= best->plr) best = &e;
      const auto got = exploit_arm(s, t, p);
      REQUIRE(got);
      CHECK(*got == best->arm);
    }
  }
}

TEST_CASE("two-arm bandit concentrates on the better arm") {
  MabParams p;
  p.c = 5;
  p.d = 0.2;
  MabEngine e({A1, A2}, p, 2024);
  Rng env(99);
  std::binomial_distribution<int> good(20, 0.1), bad(20, 0.3);
  int late_subopt = 0;
  for (int t = 1; t <= 20000; ++t) {
    const auto arm = e.select_arm(10.0);
    const int lost = arm == A1 ? good(env) : bad(env);
    e.update(10.0, arm, lost / 20.0, t);
    if (t > 18000) late_subopt += arm == A2;
  }
  CHECK(late_subopt / 2000.0 < 0.05);
}
