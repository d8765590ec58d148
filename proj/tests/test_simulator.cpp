#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "nblink/dataset.hpp"
#include "nblink/metrics.hpp"
#include "nblink/policies.hpp"
#include "nblink/simulator.hpp"

using namespace nblink;

namespace {

SimConfig small(int n_ues, std::int64_t duration_ms, double rate) {
  SimConfig c;
  c.n_ues = n_ues;
  c.duration_ms = duration_ms;
  c.arrival_rate_per_ue = rate;
  c.seed = 5;
  return c;
}

// Every policy under test sees the conservation and accounting identities.
class Accounting : public SimObserver {
 public:
  std::int64_t subframes = 0;
  std::uint64_t tx = 0;
  ChannelModelParams ch;
  int bits = 800;
  void on_transmission(const TxRecord& r) override {
    ++tx;
    subframes += r.outcome.subframes;
    CHECK(r.outcome.subframes == subframes_needed(bits, r.decision.config, ch));
  }
};

class ForcedPolicy : public Policy {
 public:
  explicit ForcedPolicy(LinkConfig c) : c_(c) {}
  std::string name() const override { return "forced"; }
  Decision choose(const TxContext&) override { return {c_, -1}; }

 private:
  LinkConfig c_;
};

}  // namespace

TEST_CASE("channel walk") {
  SimConfig c;
  Rng rng(1);
  c.sinr_step_db = 0.0;
  CHECK(channel_step(12.3, rng, c) == 12.3);
  c.sinr_step_db = 0.5;
  double s = 15.0;
  for (int i = 0; i < 10000; ++i) {
    s = channel_step(s, rng, c);
    CHECK(s >= c.sinr_low_db);
    CHECK(s <= c.sinr_high_db);
  }
  // Step spread measured from the middle of the range.
  c.sinr_low_db = -1e9;
  c.sinr_high_db = 1e9;
  double sum = 0.0, sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double d = channel_step(0.0, rng, c);
    sum += d;
    sq += d * d;
  }
  const double sd = std::sqrt(sq / n - (sum / n) * (sum / n));
  CHECK(sd == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("proportional fair selection") {
  const ChannelModelParams ch;
  std::vector<UeState> ues(2);
  ues[0].id = 0;
  ues[1].id = 1;
  CHECK_FALSE(proportional_fair_select(ues, ch));
  ues[1].queue.push_back({});
  ues[1].sinr_db = 5.0;
  CHECK(proportional_fair_select(ues, ch) == 1);
  ues[0].queue.push_back({});
  ues[0].sinr_db = 20.0;
  CHECK(proportional_fair_select(ues, ch) == 0);
  ues[0].sinr_db = 5.0;
  CHECK(proportional_fair_select(ues, ch) == 0);  // tie: lowest id
  ues[0].ewma_rate_bps = 1e6;
  CHECK(proportional_fair_select(ues, ch) == 1);
}

TEST_CASE("fifo selection") {
  std::vector<UeState> ues(3);
  for (int i = 0; i < 3; ++i) ues[i].id = i;
  ues[2].queue.push_back({0, 3.0});
  ues[1].queue.push_back({1, 7.0});
  CHECK(fifo_select(ues) == 2);
}

TEST_CASE("transmit") {
  ChannelModelParams ch;
  Rng rng(3);
  CHECK(transmit(800, {6, 2, 1}, 20.0, rng, ch).subframes == 16);
  for (int i = 0; i < 200; ++i) CHECK(transmit(800, {0, 1, 1}, 1e4, rng, ch).delivered);
  for (int i = 0; i < 200; ++i) {
    const auto o = transmit(800, {12, 1, 1}, -1e4, rng, ch);
    CHECK_FALSE(o.delivered);
    CHECK(o.subframes == 4);
  }
}

TEST_CASE("threshold rule") {
  const ChannelModelParams ch;
  const auto hi = threshold_config(25.0, Direction::uplink, ch);
  CHECK(hi.mcs == 12);
  CHECK(hi.repetitions == 1);
  CHECK(hi.prb_count == 1);
  CHECK(threshold_config(-5.0, Direction::uplink, ch).repetitions == 2);
  CHECK(threshold_config(-5.1, Direction::uplink, ch).repetitions == 4);
  CHECK(threshold_config(-100.0, Direction::uplink, ch).repetitions == 128);
  CHECK(threshold_config(-100.0, Direction::downlink, ch).repetitions == 2048);
  CHECK(threshold_config(-2.0, Direction::uplink, ch).repetitions == 1);
}

TEST_CASE("zero traffic") {
  StaticFifoPolicy p;
  const auto r = simulate(p, small(5, 2000, 0.0), {});
  CHECK(r.throughput_bps == 0.0);
  CHECK(r.consumed_subframes == 0);
  CHECK(r.generated == 0);
}

TEST_CASE("static baseline at fixed SINR") {
  SimConfig c = small(10, 200'000, 5.5);  // 11k packets
  c.sinr_step_db = 0.0;
  c.tcp_fraction = 0.0;
  c.initial_sinr_db = 25.0;
  StaticFifoPolicy p;
  const auto good = simulate(p, c, {});
  CHECK(good.delivered + good.lost >= 10000);
  CHECK(good.avg_plr < 0.01);

  c.initial_sinr_db = 5.0;
  const auto bad = simulate(p, c, {});
  CHECK(bad.delivered + bad.lost >= 10000);
  CHECK(bad.avg_plr == doctest::Approx(1.0 - 1.0 / (1.0 + std::exp(3.8))).epsilon(0.01 / 0.978));
}

TEST_CASE("threshold policy follows the rule in closed loop") {
  class Check : public SimObserver {
   public:
    double expect_sinr;
    void on_transmission(const TxRecord& r) override {
      const auto cfg = threshold_config(expect_sinr, r.direction, ChannelModelParams{});
      CHECK(r.decision.config == cfg);
    }
  };
  for (double s : {25.0, -5.0}) {
    SimConfig c = small(4, 20'000, 4.0);
    c.sinr_low_db = -20.0;
    c.sinr_step_db = 0.0;
    c.initial_sinr_db = s;
    ThresholdPolicy p;
    Check obs;
    obs.expect_sinr = s;
    simulate(p, c, {}, &obs);
  }
}

TEST_CASE("conservation, accounting and capacity bound") {
  for (int k = 0; k < 4; ++k) {
    SimConfig c = small(8 + 5 * k, 30'000, 3.0 + 4 * k);
    c.seed = 100 + k;
    std::vector<std::unique_ptr<Policy>> ps;
    ps.push_back(std::make_unique<StaticFifoPolicy>());
    ps.push_back(std::make_unique<ThresholdPolicy>());
    ps.push_back(std::make_unique<MabPolicy>(MabParams{}, c.max_prb, c.seed));
    ps.push_back(std::make_unique<ForcedPolicy>(LinkConfig{12, 1, 6}));
    for (auto& p : ps) {
      Accounting acc;
      const auto r = simulate(*p, c, {}, &acc);
      CHECK(r.delivered + r.lost + r.queued == r.generated);
      CHECK(r.consumed_subframes == acc.subframes);
      CHECK(r.transmissions == acc.tx);
      CHECK(r.throughput_bps <= 208.0 * c.max_prb * 1000.0);
      CHECK(r.avg_plr >= 0.0);
      CHECK(r.avg_plr <= 1.0);
      CHECK(std::is_sorted(r.delay_cdf.begin(), r.delay_cdf.end()));
    }
  }
}

TEST_CASE("runs are deterministic") {
  const SimConfig c = small(12, 20'000, 6.0);
  MabPolicy a(MabParams{}, c.max_prb, 9), b(MabParams{}, c.max_prb, 9);
  CHECK(simulate(a, c, {}) == simulate(b, c, {}));
  ThresholdPolicy t1, t2;
  CHECK(simulate(t1, c, {}) == simulate(t2, c, {}));
}

TEST_CASE("config validation") {
  SimConfig c;
  c.n_ues = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.sinr_low_db = 30.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.duration_ms = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("mape") {
  const std::vector<double> a{1.0, 2.0}, p{1.1, 1.8};
  CHECK(*mape(a, p).percent == doctest::Approx(10.0));
  CHECK(*mape(a, a).percent == 0.0);
  const std::vector<double> z{0.0, 0.0};
  CHECK_FALSE(mape(z, p).percent);
  CHECK(mape(z, p).excluded_zeros == 2);
  const std::vector<double> az{0.0, 2.0}, pz{5.0, 1.0};
  CHECK(*mape(az, pz).percent == doctest::Approx(50.0));
  const MapeResult parts[] = {{10.0, 0}, {std::nullopt, 3}, {30.0, 0}};
  CHECK(*mape_avg(parts) == doctest::Approx(20.0));
  CHECK_THROWS_AS(mape(a, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("delay cdf") {
  CHECK_THROWS_AS(EmpiricalCdf({}), std::invalid_argument);
  const EmpiricalCdf one({7.0});
  for (double q : {0.0, 0.3, 1.0}) CHECK(one.quantile(q) == 7.0);
  const EmpiricalCdf four({4.0, 1.0, 3.0, 2.0});
  CHECK(four.quantile(0.5) == doctest::Approx(2.5));
  Rng rng(4);
  std::vector<double> xs(500);
  for (auto& x : xs) x = uniform01(rng) * 100.0;
  const EmpiricalCdf cdf(xs);
  double prev = 0.0;
  for (double x = -1.0; x <= 101.0; x += 0.5) {
    CHECK(cdf(x) >= prev);
    prev = cdf(x);
  }
  CHECK(std::is_sorted(cdf.sorted().begin(), cdf.sorted().end()));
}

TEST_CASE("dataset generation") {
  SUBCASE("no traffic gives only unscheduled records") {
    DatasetOptions o;
    o.sim = small(3, 1000, 0.0);
    const auto d = generate_dataset(o);
    CHECK(d.size() == 100);
    for (const auto& r : d) {
      CHECK(r.alpha == 0);
      CHECK(r.gamma == 0.0);
      CHECK(r.m_norm == 0.0);
      CHECK(r.r_norm == 0.0);
    }
  }
  SUBCASE("record normalization") {
    const auto r = make_record(7.0, Direction::uplink, {6, 8, 3}, 6, 11.0, 0.25);
    CHECK(r.t_ms == 7.0);
    CHECK(r.alpha == 1);
    CHECK(r.gamma == doctest::Approx(0.4));
    CHECK(r.m_norm == doctest::Approx(0.5));
    CHECK(r.r_norm == doctest::Approx(0.42857).epsilon(1e-5));
  }
  SUBCASE("scheduled records and determinism") {
    DatasetOptions o;
    o.episodes = 2;
    o.sim = small(6, 5000, 8.0);
    o.seed = 21;
    const auto d = generate_dataset(o);
    const auto again = generate_dataset(o);
    CHECK(d == again);
    std::size_t sched = 0;
    for (const auto& r : d) {
      CHECK(r.valid());
      sched += r.alpha;
    }
    CHECK(sched > 0);
    // Two episodes: time restarts once.
    int resets = 0;
    for (std::size_t i = 1; i < d.size(); ++i) resets += !(d[i].t_ms > d[i - 1].t_ms);
    CHECK(resets == 1);
  }
}

TEST_CASE("mab policy holds an arm for one observation window") {
  class Log : public SimObserver {
   public:
    std::map<std::int64_t, std::vector<TxRecord>> by_tag;
    void on_transmission(const TxRecord& r) override { by_tag[r.decision.tag].push_back(r); }
  };
  MabParams mp;
  mp.t_d_ms = 100;
  MabPolicy p(mp, 6, 4);
  Log log;
  SimConfig c = small(3, 20'000, 20.0);
  simulate(p, c, {}, &log);
  CHECK(log.by_tag.size() > 10);
  for (const auto& [tag, txs] : log.by_tag) {
    for (const auto& t : txs) {
      CHECK(t.decision.config == txs.front().decision.config);
      CHECK(t.ue == txs.front().ue);
      CHECK(t.direction == txs.front().direction);
      CHECK(t.start_ms - txs.front().start_ms < 100);
    }
  }
  CHECK(p.engine(Direction::uplink).table().size() + p.engine(Direction::downlink).table().size() > 10);
}

TEST_CASE("pearson and retrain decision") {
  const std::vector<double> x{0.1, 0.2, 0.3, 0.4}, y{0.1, 0.2, 0.3, 0.5};
  CHECK(*pearson(x, y) == doctest::Approx(0.9827).epsilon(1e-4));
  CHECK_FALSE(should_retrain(x, y, 0.3));
  CHECK_FALSE(should_retrain(x, x, 0.3));
  const std::vector<double> neg{-0.1, -0.2, -0.3, -0.4};
  CHECK(*pearson(x, neg) == doctest::Approx(-1.0));
  CHECK(should_retrain(x, neg, 0.3));
  const std::vector<double> flat{0.2, 0.2, 0.2, 0.2};
  CHECK_FALSE(should_retrain(x, flat, 0.3));
}

TEST_CASE("retrain monitor raises at most one signal per window") {
  Rng rng(3);
  std::vector<double> training(600);
  for (auto& v : training) v = uniform01(rng);
  RetrainOptions o;
  o.rho_ms = 10'000;
  o.record_threshold = 50;
  RetrainMonitor m(training, o, 1);
  for (std::int64_t t = 0; t < 100'000; t += 10) m.on_outcome(t, uniform01(rng) > 0.3);
  CHECK(m.signals() >= 1);
  CHECK(m.signals() <= 10);
  CHECK(m.retrain_due());
}
