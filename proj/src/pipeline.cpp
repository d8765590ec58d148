#include "nblink/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace nblink {

PolicyKind parse_policy(const std::string& name) {
  if (name == "static") return PolicyKind::static_fifo;
  if (name == "threshold") return PolicyKind::threshold;
  if (name == "mab") return PolicyKind::mab;
  if (name == "smartcon") return PolicyKind::smartcon;
  throw std::invalid_argument("unknown policy '" + name + "'");
}

std::vector<DatasetRecord> run_gen_dataset(const persist::RunConfig& cfg, std::size_t episodes,
                                           std::uint64_t seed) {
  DatasetOptions opt;
  opt.episodes = episodes;
  opt.idle_every = cfg.idle_every;
  opt.sim = cfg.sim;
  opt.channel = cfg.channel;
  opt.mab = cfg.mab;
  opt.seed = seed;
  return generate_dataset(opt);
}

tpp::TrainOptions train_options(const persist::RunConfig& cfg, std::size_t epochs,
                                std::uint64_t seed) {
  tpp::TrainOptions o;
  o.epochs = epochs;
  o.learning_rate = cfg.gan.lr;
  o.seed = seed;
  o.hidden = cfg.gan.hidden;
  o.noise_mean = cfg.gan.mu;
  o.mark_rate = cfg.gan.beta;
  o.init_scale = cfg.gan.init_scale;
  o.grad_clip = cfg.gan.grad_clip;
  o.window_s = cfg.gan.ogata_window_s;
  return o;
}

std::vector<tpp::Sequence> training_sequences(const persist::RunConfig& cfg,
                                              std::span<const DatasetRecord> records) {
  const auto events = to_events(records);
  return tpp::split_windows(events, cfg.gan.seq_window_s * tpp::kMsPerSecond);
}

tpp::TrainResult run_train(const persist::RunConfig& cfg, std::span<const DatasetRecord> records,
                           std::size_t epochs, std::uint64_t seed) {
  if (records.empty()) throw std::invalid_argument("training dataset is empty");
  const auto seqs = training_sequences(cfg, records);
  return tpp::train(seqs, train_options(cfg, epochs, seed));
}

std::optional<double> TeacherForcedMape::average() const {
  const MapeResult parts[] = {prb, mcs, rep, schedule};
  return mape_avg(parts);
}

TeacherForcedMape teacher_forced_mape(const tpp::GanParamsd& model,
                                      std::span<const DatasetRecord> records,
                                      const persist::RunConfig& cfg, std::uint64_t seed) {
  const int u = cfg.sim.max_prb;
  Rng rng = make_rng(seed, "gan", 1);
  const tpp::MarkHash hash{rng()};
  std::vector<double> a_prb, p_prb, a_mcs, p_mcs, a_rep, p_rep, a_sched, p_sched;

  tpp::Vector<double> h = tpp::Vector<double>::Zero(model.hidden());
  double prev_t = -INFINITY;
  std::uint64_t index = 0;
  for (const auto& r : records) {
    if (!(r.t_ms > prev_t)) {
      h.setZero();
      index = 0;
    }
    prev_t = r.t_ms;
    const double xi = tpp::alpha_probability<double>(h, model.gen.schedule_readout);
    const double eta = tpp::sample_noise(model.gen.noise_mean, rng);
    a_sched.push_back(r.alpha);
    p_sched.push_back(xi);
    if (r.alpha == 1) {
      const auto mr = tpp::sample_mcs_rep(eta, model.gen.mark_rate, 1, hash, index);
      const LinkConfig pred = tpp::denormalize_marks(tpp::gamma_from_noise(eta), mr.m_norm,
                                                     mr.r_norm, r.direction, u);
      const LinkConfig act =
          tpp::denormalize_marks(r.gamma, r.m_norm, r.r_norm, r.direction, u);
      a_prb.push_back(act.prb_count);
      p_prb.push_back(pred.prb_count);
      a_mcs.push_back(act.mcs);
      p_mcs.push_back(pred.mcs);
      a_rep.push_back(act.repetitions);
      p_rep.push_back(pred.repetitions);
    }
    h = tpp::step_hidden<double>(h, r.event(), eta, model.gen);
    ++index;
  }
  return {mape(a_prb, p_prb), mape(a_mcs, p_mcs), mape(a_rep, p_rep), mape(a_sched, p_sched)};
}

std::unique_ptr<Policy> make_policy(PolicyKind kind, const persist::RunConfig& cfg,
                                    const tpp::GanParamsd* model,
                                    std::span<const DatasetRecord> training, std::uint64_t seed) {
  switch (kind) {
    case PolicyKind::static_fifo: return std::make_unique<StaticFifoPolicy>();
    case PolicyKind::threshold: return std::make_unique<ThresholdPolicy>(cfg.channel);
    case PolicyKind::mab: return std::make_unique<MabPolicy>(cfg.mab, cfg.sim.max_prb, seed);
    case PolicyKind::smartcon: {
      if (!model) throw std::invalid_argument("smartcon policy needs a trained model (--model)");
      SmartConOptions o;
      o.rho_ms = cfg.retrain.rho_ms;
      o.max_prb = cfg.sim.max_prb;
      o.seed = seed;
      o.retrain = cfg.retrain;
      if (!training.empty()) o.training_plr_per_s = plr_per_second(training);
      return std::make_unique<SmartConPolicy>(*model, cfg.channel, o);
    }
  }
  throw std::logic_error("unhandled policy kind");
}

MetricsReport run_eval(const persist::RunConfig& cfg, PolicyKind kind,
                       const tpp::GanParamsd* model, std::span<const DatasetRecord> dataset,
                       std::uint64_t seed) {
  auto policy = make_policy(kind, cfg, model, dataset, seed);
  SimConfig sim = cfg.sim;
  sim.seed = seed;
  MetricsReport rep = simulate(*policy, sim, cfg.channel);
  if (model && !dataset.empty())
    rep.mape_avg = teacher_forced_mape(*model, dataset, cfg, seed).average();
  return rep;
}

}  // namespace nblink
