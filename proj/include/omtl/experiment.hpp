#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "omtl/config.hpp"
#include "omtl/datasets.hpp"
#include "omtl/metrics.hpp"
#include "omtl/protocol.hpp"

namespace omtl {

// Uniform round interface over the main learners and the baselines.
class Learner {
 public:
  virtual ~Learner() = default;
  // t is the 1-based round index. Predictions in the trace use the weights
  // held before the round's update.
  virtual RoundTrace step(std::span<const Sample> samples, std::size_t t) = 0;
  virtual std::vector<Vector> weights() const = 0;
};

std::unique_ptr<Learner> make_learner(const ExperimentConfig& cfg, std::size_t K, std::size_t d);

Dataset load_dataset(const ExperimentConfig& cfg);

struct ExperimentResult {
  MetricsLedger ledger{0};
  std::optional<std::size_t> rounds_to_target;
  std::optional<RegretReport> regret;
  DatasetManifest manifest;
  std::string rounds_csv;
  nlohmann::json summary;
};

// Runs cfg.rounds rounds for cfg.seed; no files are written.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Writes rounds.csv and summary.json into `dir`.
void write_result(const ExperimentResult& result, const std::filesystem::path& dir);

// Runs every seed (cfg.seeds, or cfg.seed alone when empty). With several
// seeds each lands in output_dir/seed_<s>/ and output_dir/aggregate.json
// holds mean and stddev; a single seed writes straight into output_dir.
std::vector<ExperimentResult> run_and_write(const ExperimentConfig& cfg);

nlohmann::json aggregate_summaries(std::span<const ExperimentResult> results);

// Collects every summary.json below `dir` into one table (CSV text).
std::string build_report(const std::filesystem::path& dir);

std::string rounds_csv(const MetricsLedger& ledger, bool record_timing);

}  // namespace omtl
