#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <stdexcept>

#include "nblink/persist/atomic_file.hpp"
#include "nblink/persist/checkpoint.hpp"
#include "nblink/persist/config.hpp"
#include "nblink/persist/dataset_io.hpp"
#include "nblink/persist/metrics_io.hpp"
#include "nblink/pipeline.hpp"
#include "nblink/tpp_gan/gradcheck.hpp"

namespace nblink::cli {

namespace {

struct UeRange {
  int first = 10;
  int last = 100;
};

UeRange parse_range(const std::string& s) {
  const auto dots = s.find("..");
  auto num = [&](std::string_view v) {
    int x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || ec != std::errc() || p != v.data() + v.size())
      throw std::invalid_argument("--ues expects A..B, got '" + s + "'");
    return x;
  };
  if (dots == std::string::npos) {
    const int n = num(s);
    return {n, n};
  }
  UeRange r{num(std::string_view(s).substr(0, dots)), num(std::string_view(s).substr(dots + 2))};
  if (r.first < 1 || r.last < r.first) throw std::invalid_argument("--ues range is empty");
  return r;
}

persist::RunConfig config_from(const std::string& path) {
  return path.empty() ? persist::RunConfig{} : persist::load_config(path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"NB-IoT link adaptation workbench"};
  app.require_subcommand(1);

  std::string config, out_path, dataset_path, model_path, policy = "static", ues = "10..100",
                                                         loss_path;
  std::uint64_t seed = 1;
  std::size_t episodes = 1, epochs = 0;
  int ue_step = 10, ue_override = 0;

  auto* gen = app.add_subcommand("gen-dataset", "MAB-driven scheduling dataset");
  gen->add_option("--config", config)->check(CLI::ExistingFile);
  gen->add_option("--out", out_path)->required();
  gen->add_option("--episodes", episodes)->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed);

  auto* train = app.add_subcommand("train", "adversarial training of the point-process model");
  train->add_option("--config", config)->check(CLI::ExistingFile);
  train->add_option("--dataset", dataset_path)->required()->check(CLI::ExistingFile);
  train->add_option("--out", out_path)->required();
  train->add_option("--epochs", epochs)->required();
  train->add_option("--seed", seed);
  train->add_option("--losses", loss_path, "per-epoch loss CSV");

  auto add_eval_opts = [&](CLI::App* c) {
    c->add_option("--config", config)->check(CLI::ExistingFile);
    c->add_option("--policy", policy)
        ->check(CLI::IsMember({"static", "threshold", "mab", "smartcon"}));
    c->add_option("--model", model_path)->check(CLI::ExistingFile);
    c->add_option("--dataset", dataset_path, "training dataset (MAPE, retrain monitor)")
        ->check(CLI::ExistingFile);
    c->add_option("--out", out_path)->required();
    c->add_option("--seed", seed);
  };
  auto* eval = app.add_subcommand("eval", "closed-loop run of one policy");
  add_eval_opts(eval);
  eval->add_option("--ues", ue_override, "override sim.n_ues")->check(CLI::PositiveNumber);
  auto* sweep = app.add_subcommand("sweep", "eval over a range of UE counts");
  add_eval_opts(sweep);
  sweep->add_option("--ues", ues, "A..B");
  sweep->add_option("--step", ue_step)->check(CLI::PositiveNumber);

  auto* grads = app.add_subcommand("check-grads", "finite-difference gradient oracle");
  grads->add_option("--seed", seed);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*gen) {
      const auto cfg = config_from(config);
      const auto records = run_gen_dataset(cfg, episodes, seed);
      persist::save_dataset(out_path, records);
      out << "wrote " << records.size() << " records to " << out_path << "\n";
    } else if (*train) {
      const auto cfg = config_from(config);
      const auto records = persist::load_dataset(dataset_path);
      const auto res = run_train(cfg, records, epochs, seed);
      std::string losses;
      if (!loss_path.empty()) {
        losses = "epoch,generator_loss,discriminator_loss\n";
        for (std::size_t i = 0; i < res.generator_loss.size(); ++i) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g\n", i, res.generator_loss[i],
                        res.discriminator_loss[i]);
          losses += buf;
        }
      }
      persist::save_checkpoint(out_path, res.params);
      if (!loss_path.empty()) persist::write_file_atomic(loss_path, losses);
      out << "trained " << epochs << " epochs, " << res.skipped_steps << " skipped steps\n";
    } else if (*eval || *sweep) {
      auto cfg = config_from(config);
      const PolicyKind kind = parse_policy(policy);
      std::optional<tpp::GanParamsd> model;
      if (!model_path.empty()) model = persist::load_checkpoint(model_path, cfg.gan.hidden);
      if (kind == PolicyKind::smartcon && !model)
        throw std::invalid_argument("smartcon policy needs --model");
      std::vector<DatasetRecord> data;
      if (!dataset_path.empty()) data = persist::load_dataset(dataset_path);
      std::vector<MetricsReport> reports;
      if (*eval) {
        if (ue_override > 0) cfg.sim.n_ues = ue_override;
        reports.push_back(run_eval(cfg, kind, model ? &*model : nullptr, data, seed));
      } else {
        const UeRange r = parse_range(ues);
        for (int n = r.first; n <= r.last; n += ue_step) {
          cfg.sim.n_ues = n;
          reports.push_back(run_eval(cfg, kind, model ? &*model : nullptr, data, seed));
        }
      }
      persist::save_metrics(out_path, reports);
      out << "wrote " << reports.size() << " metrics rows to " << out_path << "\n";
    } else if (*grads) {
      const auto rep = tpp::check_gradients(seed);
      for (const auto& t : rep.tensors) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-8s max_rel_err=%.3e\n", t.tag.c_str(),
                      t.max_relative_error);
        out << buf;
      }
      out << (rep.passed ? "PASS" : "FAIL") << " worst=" << rep.worst_tag
          << " max_rel_err=" << rep.max_relative_error << "\n";
      if (!rep.passed) {
        err << "error: gradient check failed on " << rep.worst_tag << "\n";
        return 1;
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace nblink::cli
