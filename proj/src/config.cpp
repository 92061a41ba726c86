#include "omtl/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "omtl/errors.hpp"

namespace omtl {

using nlohmann::json;

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kCAdmm: return "c-admm";
    case Algorithm::kDAdmm: return "d-admm";
    case Algorithm::kAdmmSingle: return "admm-single";
    case Algorithm::kDpsgd: return "d-psgd";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "c-admm") return Algorithm::kCAdmm;
  if (name == "d-admm") return Algorithm::kDAdmm;
  if (name == "admm-single") return Algorithm::kAdmmSingle;
  if (name == "d-psgd") return Algorithm::kDpsgd;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  const bool centralized = algorithm == Algorithm::kCAdmm || algorithm == Algorithm::kAdmmSingle;
  if (centralized && topology != TopologyKind::kStar) {
    throw ConfigError(to_string(algorithm) + " runs on the star topology only");
  }
  if (!centralized && topology == TopologyKind::kStar) {
    throw ConfigError(to_string(algorithm) + " needs a ring or full topology");
  }
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  if (eta && !(*eta >= 0.0)) throw ConfigError("eta must be nonnegative");
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw ConfigError("lambda1 and lambda2 must be positive");
  if (!(lambda3 >= 0.0) || !(lambda4 >= 0.0)) throw ConfigError("lambda3 and lambda4 must be nonnegative");
  if (!(eps_inv >= 0.0) || !(eps_tr > 0.0)) throw ConfigError("eps_inv >= 0 and eps_tr > 0 required");
  if (target_accuracy && !(*target_accuracy > 0.0 && *target_accuracy < 1.0)) {
    throw ConfigError("target_accuracy must lie in (0, 1)");
  }
  const int sources = (dataset.synthetic ? 1 : 0) + (dataset.csv ? 1 : 0) +
                      (dataset.csv_files.empty() ? 0 : 1);
  if (sources != 1) throw ConfigError("dataset needs exactly one of synthetic, csv, csv_files");
  if (dataset.synthetic) dataset.synthetic->validate();
  if (threads == 0) throw ConfigError("threads must be at least 1");
  if (!(dpsgd_step0 > 0.0)) throw ConfigError("dpsgd step0 must be positive");
  if (oracle.passes == 0 || !(oracle.step_scale > 0.0)) {
    throw ConfigError("oracle passes and step_scale must be positive");
  }
}

Hyperparameters ExperimentConfig::hyperparameters(std::size_t K, std::size_t d) const {
  Hyperparameters hp = Hyperparameters::defaults(K, d, rounds);
  hp.rho = rho;
  if (eta) hp.eta = *eta;
  hp.eta_schedule = eta_schedule;
  hp.lambda1 = lambda1;
  hp.lambda2 = lambda2;
  hp.lambda3 = lambda3;
  hp.lambda4 = relationship_learning ? lambda4 : 0.0;
  hp.eps_inv = eps_inv;
  hp.eps_tr = eps_tr;
  return hp;
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!names.contains(key)) {
      throw ConfigError("unknown field '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

std::string eta_schedule_name(EtaSchedule s) {
  return s == EtaSchedule::kFixed ? "fixed" : "sqrt_t";
}

std::string step_schedule_name(StepSchedule s) {
  return s == StepSchedule::kInvSqrt ? "inv_sqrt" : "inv_square";
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  try {
    reject_unknown(j,
                   {"algorithm", "topology", "hyperparameters", "relationship_learning", "dataset",
                    "rounds", "target_accuracy", "seed", "seeds", "output_dir", "threads",
                    "neighbor_u_averaging", "dpsgd", "oracle", "compute_regret", "record_timing"},
                   "config");
    ExperimentConfig cfg;
    cfg.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    if (j.contains("topology")) {
      cfg.topology = parse_topology_kind(j.at("topology").get<std::string>());
    } else {
      cfg.topology = (cfg.algorithm == Algorithm::kCAdmm || cfg.algorithm == Algorithm::kAdmmSingle)
                         ? TopologyKind::kStar
                         : TopologyKind::kFull;
    }
    if (j.contains("hyperparameters")) {
      const json& h = j.at("hyperparameters");
      reject_unknown(h,
                     {"rho", "eta", "eta_schedule", "lambda1", "lambda2", "lambda3", "lambda4",
                      "eps_inv", "eps_tr"},
                     "hyperparameters");
      read(h, "rho", cfg.rho);
      if (h.contains("eta") && !h.at("eta").is_null()) cfg.eta = h.at("eta").get<double>();
      if (h.contains("eta_schedule")) {
        const auto name = h.at("eta_schedule").get<std::string>();
        if (name == "fixed") cfg.eta_schedule = EtaSchedule::kFixed;
        else if (name == "sqrt_t") cfg.eta_schedule = EtaSchedule::kSqrtRound;
        else throw ConfigError("unknown eta_schedule '" + name + "'");
      }
      read(h, "lambda1", cfg.lambda1);
      read(h, "lambda2", cfg.lambda2);
      read(h, "lambda3", cfg.lambda3);
      read(h, "lambda4", cfg.lambda4);
      read(h, "eps_inv", cfg.eps_inv);
      read(h, "eps_tr", cfg.eps_tr);
    }
    read(j, "relationship_learning", cfg.relationship_learning);

    const json& ds = j.at("dataset");
    reject_unknown(ds, {"synthetic", "csv", "csv_files", "epoch_reshuffle"}, "dataset");
    if (ds.contains("synthetic")) {
      const json& s = ds.at("synthetic");
      reject_unknown(s, {"K", "n_per_task", "rotation_step", "noise", "shared_task_seed"},
                     "dataset.synthetic");
      SyntheticConfig sc;
      read(s, "K", sc.K);
      read(s, "n_per_task", sc.n_per_task);
      read(s, "rotation_step", sc.rotation_step);
      read(s, "noise", sc.noise);
      read(s, "shared_task_seed", sc.shared_task_seed);
      cfg.dataset.synthetic = sc;
    }
    if (ds.contains("csv")) cfg.dataset.csv = ds.at("csv").get<std::string>();
    if (ds.contains("csv_files")) {
      for (const auto& p : ds.at("csv_files")) cfg.dataset.csv_files.emplace_back(p.get<std::string>());
    }
    read(ds, "epoch_reshuffle", cfg.dataset.epoch_reshuffle);

    read(j, "rounds", cfg.rounds);
    if (j.contains("target_accuracy") && !j.at("target_accuracy").is_null()) {
      cfg.target_accuracy = j.at("target_accuracy").get<double>();
    }
    read(j, "seed", cfg.seed);
    read(j, "seeds", cfg.seeds);
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    read(j, "threads", cfg.threads);
    read(j, "neighbor_u_averaging", cfg.neighbor_u_averaging);
    if (j.contains("dpsgd")) {
      const json& p = j.at("dpsgd");
      reject_unknown(p, {"step0", "schedule"}, "dpsgd");
      read(p, "step0", cfg.dpsgd_step0);
      if (p.contains("schedule")) {
        const auto name = p.at("schedule").get<std::string>();
        if (name == "inv_sqrt") cfg.dpsgd_schedule = StepSchedule::kInvSqrt;
        else if (name == "inv_square") cfg.dpsgd_schedule = StepSchedule::kInvSquare;
        else throw ConfigError("unknown dpsgd schedule '" + name + "'");
      }
    }
    if (j.contains("oracle")) {
      const json& o = j.at("oracle");
      reject_unknown(o, {"passes", "step_scale"}, "oracle");
      read(o, "passes", cfg.oracle.passes);
      read(o, "step_scale", cfg.oracle.step_scale);
    }
    read(j, "compute_regret", cfg.compute_regret);
    read(j, "record_timing", cfg.record_timing);
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["algorithm"] = to_string(cfg.algorithm);
  j["topology"] = to_string(cfg.topology);
  j["hyperparameters"] = {
      {"rho", cfg.rho},
      {"eta", cfg.eta ? json(*cfg.eta) : json(nullptr)},
      {"eta_schedule", eta_schedule_name(cfg.eta_schedule)},
      {"lambda1", cfg.lambda1},
      {"lambda2", cfg.lambda2},
      {"lambda3", cfg.lambda3},
      {"lambda4", cfg.lambda4},
      {"eps_inv", cfg.eps_inv},
      {"eps_tr", cfg.eps_tr},
  };
  j["relationship_learning"] = cfg.relationship_learning;
  json ds = json::object();
  if (cfg.dataset.synthetic) {
    const auto& s = *cfg.dataset.synthetic;
    ds["synthetic"] = {{"K", s.K},
                       {"n_per_task", s.n_per_task},
                       {"rotation_step", s.rotation_step},
                       {"noise", s.noise},
                       {"shared_task_seed", s.shared_task_seed}};
  }
  if (cfg.dataset.csv) ds["csv"] = cfg.dataset.csv->string();
  if (!cfg.dataset.csv_files.empty()) {
    json files = json::array();
    for (const auto& p : cfg.dataset.csv_files) files.push_back(p.string());
    ds["csv_files"] = files;
  }
  ds["epoch_reshuffle"] = cfg.dataset.epoch_reshuffle;
  j["dataset"] = ds;
  j["rounds"] = cfg.rounds;
  j["target_accuracy"] = cfg.target_accuracy ? json(*cfg.target_accuracy) : json(nullptr);
  j["seed"] = cfg.seed;
  j["seeds"] = cfg.seeds;
  j["output_dir"] = cfg.output_dir.string();
  j["threads"] = cfg.threads;
  j["neighbor_u_averaging"] = cfg.neighbor_u_averaging;
  j["dpsgd"] = {{"step0", cfg.dpsgd_step0}, {"schedule", step_schedule_name(cfg.dpsgd_schedule)}};
  j["oracle"] = {{"passes", cfg.oracle.passes}, {"step_scale", cfg.oracle.step_scale}};
  j["compute_regret"] = cfg.compute_regret;
  j["record_timing"] = cfg.record_timing;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace omtl
