#include "omtl/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "omtl/baselines.hpp"
#include "omtl/errors.hpp"
#include "omtl/model.hpp"
#include "omtl/rng.hpp"

namespace omtl {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

class AdmmLearner final : public Learner {
 public:
  AdmmLearner(const ExperimentConfig& cfg, Hyperparameters hp, std::optional<Topology> topo)
      : hp_(hp),
        topo_(std::move(topo)),
        state_(ModelState::zeros(hp.K, hp.d)),
        omega_(RelationshipMatrix::initial(hp.K)) {
    options_.threads = cfg.threads;
    options_.update_omega = cfg.relationship_learning;
    options_.neighbor_u_averaging = cfg.neighbor_u_averaging;
  }

  RoundTrace step(std::span<const Sample> samples, std::size_t t) override {
    options_.round_index = t;
    RoundResult r = topo_ ? run_decentralized_round(state_, omega_, samples, *topo_, hp_, options_)
                          : run_centralized_round(state_, omega_, samples, hp_, options_);
    state_ = std::move(r.state);
    omega_ = std::move(r.omega);
    return std::move(r.trace);
  }

  std::vector<Vector> weights() const override { return state_.w; }

 private:
  Hyperparameters hp_;
  std::optional<Topology> topo_;
  ModelState state_;
  RelationshipMatrix omega_;
  ProtocolOptions options_;
};

RoundTrace begin_trace(std::span<const Sample> samples, const std::vector<Vector>& w,
                       std::size_t t) {
  RoundTrace trace;
  trace.round_index = t;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    trace.predictions.push_back(predict(w[k], samples[k].features));
    trace.labels.push_back(samples[k].label);
    trace.losses.push_back(hinge_loss(w[k], samples[k].features, samples[k].label));
  }
  return trace;
}

class AdmmSingleLearner final : public Learner {
 public:
  explicit AdmmSingleLearner(Hyperparameters hp)
      : hp_(hp), states_(hp.K, SingleTaskState::zeros(hp.d)) {}

  RoundTrace step(std::span<const Sample> samples, std::size_t t) override {
    const auto start = Clock::now();
    Hyperparameters hp_t = hp_;
    hp_t.eta = hp_.eta_at(t);
    RoundTrace trace = begin_trace(samples, weights(), t);
    for (std::size_t k = 0; k < states_.size(); ++k) {
      states_[k] = admm_single_round(states_[k], samples[k], hp_t);
    }
    trace.wall_clock = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
    return trace;
  }

  std::vector<Vector> weights() const override {
    std::vector<Vector> w;
    for (const auto& s : states_) w.push_back(s.w);
    return w;
  }

 private:
  Hyperparameters hp_;
  std::vector<SingleTaskState> states_;
};

class DpsgdLearner final : public Learner {
 public:
  DpsgdLearner(const ExperimentConfig& cfg, const Hyperparameters& hp)
      : topo_(Topology::make(cfg.topology, hp.K)),
        state_(DPSGDState::zeros(topo_, hp.d, cfg.dpsgd_step0, cfg.dpsgd_schedule)),
        d_(hp.d) {}

  RoundTrace step(std::span<const Sample> samples, std::size_t t) override {
    const auto start = Clock::now();
    RoundTrace trace = begin_trace(samples, state_.w, t);
    state_ = dpsgd_round(state_, samples, t);
    for (std::size_t k = 0; k < topo_.size(); ++k) {
      for (std::size_t j = 0; j < topo_.degree(k); ++j) trace.count_message(d_);
    }
    trace.wall_clock = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
    return trace;
  }

  std::vector<Vector> weights() const override { return state_.w; }

 private:
  Topology topo_;
  DPSGDState state_;
  std::size_t d_;
};

void append_number(std::string& out, double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  out.append(buf, ptr);
}

double to_ms(std::chrono::nanoseconds ns) { return static_cast<double>(ns.count()) / 1e6; }

json manifest_json(const DatasetManifest& m) {
  return {{"name", m.name},
          {"K", m.K},
          {"d", m.d},
          {"counts", m.counts},
          {"positive_ratios", m.positive_ratios}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::unique_ptr<Learner> make_learner(const ExperimentConfig& cfg, std::size_t K, std::size_t d) {
  const Hyperparameters hp = cfg.hyperparameters(K, d);
  hp.validate();
  switch (cfg.algorithm) {
    case Algorithm::kCAdmm:
      return std::make_unique<AdmmLearner>(cfg, hp, std::nullopt);
    case Algorithm::kDAdmm:
      return std::make_unique<AdmmLearner>(cfg, hp, Topology::make(cfg.topology, K));
    case Algorithm::kAdmmSingle:
      return std::make_unique<AdmmSingleLearner>(hp);
    case Algorithm::kDpsgd:
      return std::make_unique<DpsgdLearner>(cfg, hp);
  }
  throw ConfigError("unknown algorithm");
}

Dataset load_dataset(const ExperimentConfig& cfg) {
  Dataset ds;
  if (cfg.dataset.synthetic) {
    SyntheticConfig sc = *cfg.dataset.synthetic;
    sc.seed = cfg.seed;
    ds = generate_synthetic(sc);
  } else if (cfg.dataset.csv) {
    ds = load_csv(*cfg.dataset.csv);
  } else {
    ds = load_csv_files(cfg.dataset.csv_files);
  }
  for (auto& s : ds.streams) {
    s.set_epoch_reshuffle(cfg.dataset.epoch_reshuffle);
    s.set_shuffle_seed(derive_seed(cfg.seed, 0x5eed, s.task_index()));
    s.rewind();
  }
  return ds;
}

std::string rounds_csv(const MetricsLedger& ledger, bool record_timing) {
  std::string out = "round";
  const std::size_t K = ledger.num_tasks();
  for (std::size_t k = 0; k < K; ++k) out += ",task_" + std::to_string(k) + "_err";
  out += ",avg_err,ms_per_round,messages,bytes\n";
  for (std::size_t t = 1; t <= ledger.rounds(); ++t) {
    out += std::to_string(t);
    for (std::size_t k = 0; k < K; ++k) {
      out += ',';
      append_number(out, ledger.task_error(t, k));
    }
    out += ',';
    append_number(out, ledger.average_error(t));
    out += ',';
    append_number(out, record_timing ? to_ms(ledger.wall_clock(t)) : 0.0);
    out += ',' + std::to_string(ledger.messages(t)) + ',' + std::to_string(ledger.bytes(t)) + '\n';
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Dataset ds = load_dataset(cfg);
  const std::size_t K = ds.manifest.K;
  const std::size_t d = ds.manifest.d;
  auto learner = make_learner(cfg, K, d);

  ExperimentResult result;
  result.ledger = MetricsLedger(K);
  result.manifest = ds.manifest;
  std::vector<std::vector<Sample>> seen(cfg.compute_regret ? K : 0);
  for (std::size_t t = 1; t <= cfg.rounds; ++t) {
    std::vector<Sample> samples = next_round(ds.streams);
    result.ledger.record(learner->step(samples, t));
    if (cfg.compute_regret) {
      for (std::size_t k = 0; k < K; ++k) seen[k].push_back(std::move(samples[k]));
    }
  }
  if (cfg.target_accuracy) result.rounds_to_target = rounds_to_target(result.ledger, *cfg.target_accuracy);
  if (cfg.compute_regret) {
    const auto losses = result.ledger.losses_by_task();
    result.regret = compute_regret(losses, seen, cfg.oracle);
  }

  const MetricsLedger& ledger = result.ledger;
  const double total_ms = cfg.record_timing ? to_ms(ledger.total_wall_clock()) : 0.0;
  json s;
  s["config"] = config_to_json(cfg);
  s["dataset"] = manifest_json(ds.manifest);
  s["rounds"] = ledger.rounds();
  s["final_avg_err"] = ledger.final_average_error();
  s["rounds_to_target"] = result.rounds_to_target ? json(*result.rounds_to_target) : json(nullptr);
  s["regret"] = result.regret ? json(result.regret->regret) : json(nullptr);
  s["learner_loss"] = result.regret ? json(result.regret->learner_loss) : json(nullptr);
  s["comparator_loss"] = result.regret ? json(result.regret->comparator_loss) : json(nullptr);
  s["total_messages"] = ledger.total_messages();
  s["total_bytes"] = ledger.total_bytes();
  s["wall_clock_total"] = total_ms;
  s["ms_per_round_mean"] = ledger.rounds() == 0 ? 0.0 : total_ms / static_cast<double>(ledger.rounds());
  s["oracle"] = {{"method", "averaged multi-pass subgradient descent"},
                 {"passes", cfg.oracle.passes},
                 {"step_scale", cfg.oracle.step_scale}};
  result.summary = std::move(s);
  result.rounds_csv = rounds_csv(ledger, cfg.record_timing);
  return result;
}

void write_result(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "rounds.csv", result.rounds_csv);
  write_file(dir / "summary.json", result.summary.dump(2) + "\n");
}

namespace {

json mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {{"mean", nullptr}, {"stddev", nullptr}, {"n", 0}};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double sd = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
  return {{"mean", mean}, {"stddev", sd}, {"n", xs.size()}};
}

}  // namespace

json aggregate_summaries(std::span<const ExperimentResult> results) {
  std::vector<double> err;
  std::vector<double> regret;
  std::vector<double> rtt;
  std::vector<double> ms;
  std::vector<double> messages;
  json seeds = json::array();
  for (const auto& r : results) {
    seeds.push_back(r.summary.at("config").at("seed"));
    err.push_back(r.summary.at("final_avg_err").get<double>());
    if (r.regret) regret.push_back(r.regret->regret);
    if (r.rounds_to_target) rtt.push_back(static_cast<double>(*r.rounds_to_target));
    ms.push_back(r.summary.at("ms_per_round_mean").get<double>());
    messages.push_back(static_cast<double>(r.summary.at("total_messages").get<std::uint64_t>()));
  }
  json agg;
  agg["seeds"] = seeds;
  agg["final_avg_err"] = mean_std(err);
  agg["regret"] = mean_std(regret);
  agg["rounds_to_target"] = mean_std(rtt);
  agg["rounds_to_target_reached"] = rtt.size();
  agg["ms_per_round_mean"] = mean_std(ms);
  agg["total_messages"] = mean_std(messages);
  return agg;
}

std::vector<ExperimentResult> run_and_write(const ExperimentConfig& cfg) {
  std::vector<ExperimentResult> results;
  if (cfg.seeds.empty()) {
    results.push_back(run_experiment(cfg));
    write_result(results.back(), cfg.output_dir);
    return results;
  }
  for (std::uint64_t seed : cfg.seeds) {
    ExperimentConfig one = cfg;
    one.seed = seed;
    one.seeds.clear();
    results.push_back(run_experiment(one));
    write_result(results.back(), cfg.output_dir / ("seed_" + std::to_string(seed)));
  }
  std::filesystem::create_directories(cfg.output_dir);
  write_file(cfg.output_dir / "aggregate.json", aggregate_summaries(results).dump(2) + "\n");
  return results;
}

std::string build_report(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> found;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename() == "summary.json") {
      found.push_back(entry.path());
    }
  }
  std::sort(found.begin(), found.end());
  std::string out =
      "run,algorithm,topology,relationship_learning,seed,rounds,final_avg_err,rounds_to_target,"
      "ms_per_round,total_messages,total_bytes,regret\n";
  for (const auto& path : found) {
    std::ifstream in(path);
    json s;
    in >> s;
    const json& c = s.at("config");
    auto num = [](const json& v) -> std::string {
      if (v.is_null()) return "";
      return v.dump();
    };
    out += std::filesystem::relative(path.parent_path(), dir).generic_string() + ',' +
           c.at("algorithm").get<std::string>() + ',' + c.at("topology").get<std::string>() + ',' +
           (c.at("relationship_learning").get<bool>() ? "true" : "false") + ',' +
           num(c.at("seed")) + ',' + num(s.at("rounds")) + ',' + num(s.at("final_avg_err")) + ',' +
           num(s.at("rounds_to_target")) + ',' + num(s.at("ms_per_round_mean")) + ',' +
           num(s.at("total_messages")) + ',' + num(s.at("total_bytes")) + ',' +
           num(s.at("regret")) + '\n';
  }
  return out;
}

}  // namespace omtl
