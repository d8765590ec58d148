#include "nblink/tpp_gan/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nblink::tpp {

std::vector<Sequence> split_windows(std::span<const EventRecord> records, double window_ms) {
  if (!(window_ms > 0.0)) throw std::invalid_argument("window length must be positive");
  std::vector<Sequence> out;
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t end = i + 1;
    while (end < records.size() && records[end].t_ms > records[end - 1].t_ms) ++end;
    const double origin = records[i].t_ms < 0.0 ? records[i].t_ms : 0.0;
    const double t_last = records[end - 1].t_ms - origin;
    const auto n_windows = static_cast<std::size_t>(std::floor(t_last / window_ms)) + 1;
    std::vector<Sequence> episode(n_windows);
    for (auto& s : episode) s.horizon_ms = window_ms;
    for (std::size_t k = i; k < end; ++k) {
      const double rel = records[k].t_ms - origin;
      const auto w = static_cast<std::size_t>(std::floor(rel / window_ms));
      EventRecord e = records[k];
      e.t_ms = rel - static_cast<double>(w) * window_ms;
      episode[w].events.push_back(e);
    }
    if (n_windows > 1) episode.pop_back();
    for (auto& s : episode)
      if (!s.events.empty()) out.push_back(std::move(s));
    i = end;
  }
  return out;
}

namespace {

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

NoisySequence with_noise(const Sequence& s, double mu, Rng& rng) {
  NoisySequence n{s.events, {}, s.horizon_ms};
  n.eta.reserve(s.events.size());
  for (std::size_t i = 0; i < s.events.size(); ++i) n.eta.push_back(sample_noise(mu, rng));
  return n;
}

}  // namespace

TrainResult train(std::span<const Sequence> data, const TrainOptions& opt) {
  return train(initialize<double>(opt.hidden, opt.noise_mean, opt.mark_rate, opt.init_scale,
                                  opt.seed),
               data, opt);
}

TrainResult train(GanParamsd init, std::span<const Sequence> data, const TrainOptions& opt) {
  if (data.empty()) throw std::invalid_argument("training dataset is empty");
  if (!(opt.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  for (const auto& s : data) detail::check_sequence(s.events, s.horizon_ms);

  TrainResult res;
  res.params = std::move(init);
  Rng rng = make_rng(opt.seed, "gan-train");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < opt.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> g_losses, d_losses;
    for (std::size_t idx : order) {
      const Sequence& s = data[idx];
      try {
        const NoisySequence real = with_noise(s, res.params.gen.noise_mean, rng);
        const NoisySequence fake =
            generate_sequence(res.params.gen, s.horizon_ms, rng,
                              opt.fake_factor * s.events.size() + opt.fake_extra, opt.window_s);

        const auto gd = gan_gradients(real, fake, res.params);
        if (!sgd_step(res.params.disc, gd.disc, opt.learning_rate, true, opt.grad_clip))
          ++res.skipped_steps;

        const auto gg = gan_gradients(real, fake, res.params);
        if (!sgd_step(res.params.gen, gg.gen, opt.learning_rate, false, opt.grad_clip))
          ++res.skipped_steps;

        if (std::isfinite(gd.value.discriminator)) d_losses.push_back(gd.value.discriminator);
        if (std::isfinite(gg.value.generator)) g_losses.push_back(gg.value.generator);
      } catch (const std::range_error&) {
        ++res.skipped_steps;
      }
    }
    res.generator_loss.push_back(mean(g_losses));
    res.discriminator_loss.push_back(mean(d_losses));
    if (opt.on_epoch) opt.on_epoch(epoch, res.generator_loss.back(), res.discriminator_loss.back());
  }
  return res;
}

double generated_rate(const GeneratorParamsd& g, double horizon_ms, std::size_t n_sequences,
                      std::uint64_t seed, std::size_t max_events) {
  if (n_sequences == 0 || !(horizon_ms > 0.0)) throw std::invalid_argument("empty rate estimate");
  Rng rng = make_rng(seed, "gan-rate");
  double events = 0.0;
  for (std::size_t i = 0; i < n_sequences; ++i)
    events += static_cast<double>(generate_sequence(g, horizon_ms, rng, max_events).events.size());
  return events / (static_cast<double>(n_sequences) * horizon_ms / kMsPerSecond);
}

}  // namespace nblink::tpp
