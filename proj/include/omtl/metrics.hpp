#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "omtl/protocol.hpp"
#include "omtl/types.hpp"

namespace omtl {

// Per-round record of an online run.
class MetricsLedger {
 public:
  explicit MetricsLedger(std::size_t K);

  void record(const RoundTrace& trace);

  std::size_t num_tasks() const { return K_; }
  std::size_t rounds() const { return mistakes_.size(); }

  // mistake(t, k) for 1-based round t.
  bool mistake(std::size_t t, std::size_t k) const { return mistakes_.at(t - 1).at(k) != 0; }
  double loss(std::size_t t, std::size_t k) const { return losses_.at(t - 1).at(k); }

  // Incrementally maintained values after round t (1-based).
  double task_error(std::size_t t, std::size_t k) const;
  double average_error(std::size_t t) const { return avg_err_.at(t - 1); }

  std::uint64_t messages(std::size_t t) const { return messages_.at(t - 1); }
  std::uint64_t bytes(std::size_t t) const { return bytes_.at(t - 1); }
  std::chrono::nanoseconds wall_clock(std::size_t t) const { return wall_.at(t - 1); }

  std::uint64_t total_messages() const;
  std::uint64_t total_bytes() const;
  std::chrono::nanoseconds total_wall_clock() const;

  // Losses per task, one entry per round.
  std::vector<std::vector<double>> losses_by_task() const;

  double final_average_error() const { return avg_err_.empty() ? 0.0 : avg_err_.back(); }

 private:
  std::size_t K_;
  std::vector<std::vector<std::uint8_t>> mistakes_;
  std::vector<std::vector<double>> losses_;
  std::vector<std::size_t> running_;
  std::vector<std::vector<double>> task_err_;
  std::vector<double> avg_err_;
  std::vector<std::uint64_t> messages_;
  std::vector<std::uint64_t> bytes_;
  std::vector<std::chrono::nanoseconds> wall_;
};

// (1/K) sum_k mistakes_k(1..t) / t, recomputed from the raw flags.
// Throws UndefinedMetricError for t == 0 or t beyond the recorded rounds.
double cumulative_error(const MetricsLedger& ledger, std::size_t t);

// Smallest t with 1 - average_error(t) >= target_accuracy.
std::optional<std::size_t> rounds_to_target(const MetricsLedger& ledger, double target_accuracy);

// Batch comparator: per-sample subgradient passes over the task's samples
// with step step_scale / sqrt(pass); the iterate average over passes and the
// last iterate compete and the lower total loss wins.
struct OracleSettings {
  std::size_t passes = 200;
  double step_scale = 0.1;
};

Vector batch_oracle(std::span<const Sample> samples, const OracleSettings& settings);

struct RegretReport {
  double regret = 0.0;
  double learner_loss = 0.0;
  double comparator_loss = 0.0;
  std::vector<Vector> comparators;
};

// sum_t sum_k l_t^k(w_t^k) - sum_t sum_k l_t^k(w_*^k). `learner_losses[k]`
// and `seen[k]` are the per-round losses and samples of task k.
RegretReport compute_regret(std::span<const std::vector<double>> learner_losses,
                            std::span<const std::vector<Sample>> seen,
                            const OracleSettings& settings = {});

}  // namespace omtl
