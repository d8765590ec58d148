#include <doctest.h>

#include <random>

#include "nblink/tpp_gan/trainer.hpp"

using namespace nblink;
using namespace nblink::tpp;

namespace {

std::vector<Sequence> poisson_data(double rate, int n_seq, double horizon_ms, std::uint64_t seed) {
  Rng rng(seed);
  std::exponential_distribution<double> gap(rate);
  std::vector<Sequence> out;
  for (int s = 0; s < n_seq; ++s) {
    Sequence q;
    q.horizon_ms = horizon_ms;
    for (double t = gap(rng) * 1000.0; t < horizon_ms; t += gap(rng) * 1000.0)
      q.events.push_back({t, 1, uniform01(rng), uniform01(rng), uniform01(rng)});
    out.push_back(std::move(q));
  }
  return out;
}

template <typename P>
bool same(const P& a, const P& b) {
  std::vector<Matrix<double>> xs;
  visit_trainable(a, [&](std::string_view, const auto& m) { xs.push_back(m); });
  std::size_t i = 0;
  bool eq = true;
  visit_trainable(b, [&](std::string_view, const auto& m) { eq = eq && xs[i++] == m; });
  return eq;
}

}  // namespace

TEST_CASE("window splitting") {
  std::vector<EventRecord> r{{100.0, 1, 0.2, 0.3, 0.4}, {9000.0, 1, 0.2, 0.3, 0.4},
                             {12000.0, 0, 0.0, 0.0, 0.0}, {25000.0, 1, 0.2, 0.3, 0.4},
                             // new episode
                             {50.0, 1, 0.2, 0.3, 0.4}, {70.0, 1, 0.2, 0.3, 0.4}};
  const auto w = split_windows(r, 10000.0);
  // Episode 1: windows [0,10), [10,20) kept, trailing [20,30) dropped.
  // Episode 2: one window, kept.
  REQUIRE(w.size() == 3);
  CHECK(w[0].events.size() == 2);
  CHECK(w[1].events.size() == 1);
  CHECK(w[1].events[0].t_ms == doctest::Approx(2000.0));
  CHECK(w[2].events.size() == 2);
  for (const auto& s : w) CHECK(s.horizon_ms == 10000.0);
  CHECK_THROWS_AS(split_windows(r, 0.0), std::invalid_argument);
}

TEST_CASE("zero epochs return the seeded initialization") {
  const auto data = poisson_data(2.0, 3, 5000.0, 1);
  TrainOptions o;
  o.hidden = 8;
  o.seed = 12;
  const auto res = train(data, o);
  const auto init = initialize<double>(8, 1.0, 2.0, 0.1, 12);
  CHECK(same(res.params.gen, init.gen));
  CHECK(same(res.params.disc, init.disc));
  CHECK(res.generator_loss.empty());
}

TEST_CASE("training is deterministic under a seed") {
  const auto data = poisson_data(2.0, 6, 5000.0, 2);
  TrainOptions o;
  o.hidden = 6;
  o.epochs = 5;
  o.seed = 3;
  const auto a = train(data, o);
  const auto b = train(data, o);
  CHECK(a.generator_loss == b.generator_loss);
  CHECK(a.discriminator_loss == b.discriminator_loss);
  CHECK(same(a.params.gen, b.params.gen));
  CHECK(a.generator_loss.size() == 5);
}

TEST_CASE("empty dataset is an error") {
  std::vector<Sequence> none;
  CHECK_THROWS_AS(train(none, TrainOptions{}), std::invalid_argument);
}

TEST_CASE("likelihood training moves the rate toward the data") {
  const auto data = poisson_data(2.0, 100, 10000.0, 4);
  TrainOptions o;
  o.hidden = 8;
  o.epochs = 200;
  o.seed = 5;
  const auto res = train(data, o);
  const double rate = generated_rate(res.params.gen, 100'000.0, 50, 9);
  CHECK(rate >= 1.7);
  CHECK(rate <= 2.3);
  CHECK(all_finite(res.params));
}
