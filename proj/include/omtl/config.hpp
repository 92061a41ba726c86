#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "omtl/baselines.hpp"
#include "omtl/datasets.hpp"
#include "omtl/metrics.hpp"
#include "omtl/topology.hpp"
#include "omtl/types.hpp"

namespace omtl {

enum class Algorithm { kCAdmm, kDAdmm, kAdmmSingle, kDpsgd };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

struct DatasetConfig {
  // Exactly one of the three sources is set.
  std::optional<SyntheticConfig> synthetic;
  std::optional<std::filesystem::path> csv;
  std::vector<std::filesystem::path> csv_files;
  bool epoch_reshuffle = true;
};

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kCAdmm;
  TopologyKind topology = TopologyKind::kStar;

  double rho = 0.1;
  std::optional<double> eta;  // unset: sqrt(rounds)
  EtaSchedule eta_schedule = EtaSchedule::kFixed;
  double lambda1 = 0.01;
  double lambda2 = 0.1;
  double lambda3 = 0.01;
  double lambda4 = 0.01;
  double eps_inv = 1e-6;
  double eps_tr = 1e-10;

  bool relationship_learning = true;
  DatasetConfig dataset;
  std::size_t rounds = 2000;
  std::optional<double> target_accuracy;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir = "results";

  std::size_t threads = 1;
  bool neighbor_u_averaging = false;
  double dpsgd_step0 = 0.1;
  StepSchedule dpsgd_schedule = StepSchedule::kInvSqrt;
  OracleSettings oracle;
  bool compute_regret = true;
  // When false, ms_per_round and wall-clock fields are written as 0 so result
  // files are byte-reproducible.
  bool record_timing = true;

  // Throws ConfigError for invalid combinations.
  void validate() const;

  // Hyperparameters for a dataset with K tasks of dimension d; forces
  // lambda4 = 0 when relationship learning is off.
  Hyperparameters hyperparameters(std::size_t K, std::size_t d) const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace omtl
