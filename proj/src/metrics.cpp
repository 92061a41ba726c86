#include "omtl/metrics.hpp"

#include <cmath>
#include <numeric>

#include "omtl/errors.hpp"
#include "omtl/model.hpp"

namespace omtl {

MetricsLedger::MetricsLedger(std::size_t K) : K_(K), running_(K, 0) {}

void MetricsLedger::record(const RoundTrace& trace) {
  if (trace.predictions.size() != K_ || trace.labels.size() != K_ ||
      trace.losses.size() != K_) {
    throw DimensionError("round trace does not cover " + std::to_string(K_) + " tasks");
  }
  std::vector<std::uint8_t> flags(K_);
  for (std::size_t k = 0; k < K_; ++k) {
    flags[k] = trace.predictions[k] != trace.labels[k] ? 1 : 0;
    running_[k] += flags[k];
  }
  const double t = static_cast<double>(mistakes_.size() + 1);
  std::vector<double> per_task(K_);
  double sum = 0.0;
  for (std::size_t k = 0; k < K_; ++k) {
    per_task[k] = static_cast<double>(running_[k]) / t;
    sum += per_task[k];
  }
  mistakes_.push_back(std::move(flags));
  losses_.push_back(trace.losses);
  task_err_.push_back(std::move(per_task));
  avg_err_.push_back(K_ == 0 ? 0.0 : sum / static_cast<double>(K_));
  messages_.push_back(trace.messages_sent);
  bytes_.push_back(trace.bytes_sent);
  wall_.push_back(trace.wall_clock);
}

double MetricsLedger::task_error(std::size_t t, std::size_t k) const {
  return task_err_.at(t - 1).at(k);
}

std::uint64_t MetricsLedger::total_messages() const {
  return std::accumulate(messages_.begin(), messages_.end(), std::uint64_t{0});
}

std::uint64_t MetricsLedger::total_bytes() const {
  return std::accumulate(bytes_.begin(), bytes_.end(), std::uint64_t{0});
}

std::chrono::nanoseconds MetricsLedger::total_wall_clock() const {
  return std::accumulate(wall_.begin(), wall_.end(), std::chrono::nanoseconds{0});
}

std::vector<std::vector<double>> MetricsLedger::losses_by_task() const {
  std::vector<std::vector<double>> out(K_);
  for (auto& per_task : out) per_task.reserve(losses_.size());
  for (const auto& round : losses_) {
    for (std::size_t k = 0; k < K_; ++k) out[k].push_back(round[k]);
  }
  return out;
}

double cumulative_error(const MetricsLedger& ledger, std::size_t t) {
  if (t == 0) throw UndefinedMetricError("cumulative error is undefined before round 1");
  if (t > ledger.rounds()) {
    throw UndefinedMetricError("round " + std::to_string(t) + " not recorded (have " +
                               std::to_string(ledger.rounds()) + ")");
  }
  const std::size_t K = ledger.num_tasks();
  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    std::size_t count = 0;
    for (std::size_t r = 1; r <= t; ++r) count += ledger.mistake(r, k) ? 1 : 0;
    sum += static_cast<double>(count) / static_cast<double>(t);
  }
  return sum / static_cast<double>(K);
}

std::optional<std::size_t> rounds_to_target(const MetricsLedger& ledger, double target_accuracy) {
  for (std::size_t t = 1; t <= ledger.rounds(); ++t) {
    if (1.0 - ledger.average_error(t) >= target_accuracy) return t;
  }
  return std::nullopt;
}

namespace {

double total_loss(const Vector& w, std::span<const Sample> samples) {
  double sum = 0.0;
  for (const auto& s : samples) sum += hinge_loss(w, s.features, s.label);
  return sum;
}

}  // namespace

Vector batch_oracle(std::span<const Sample> samples, const OracleSettings& settings) {
  if (samples.empty()) return Vector{};
  const Eigen::Index d = samples.front().features.size();
  Vector w = Vector::Zero(d);
  Vector avg = Vector::Zero(d);
  for (std::size_t pass = 1; pass <= settings.passes; ++pass) {
    const double step = settings.step_scale / std::sqrt(static_cast<double>(pass));
    for (const auto& s : samples) w -= step * hinge_subgradient(w, s.features, s.label);
    avg += (w - avg) / static_cast<double>(pass);
  }
  if (!w.allFinite() || !avg.allFinite()) {
    throw OracleDivergenceError("batch comparator produced non-finite weights");
  }
  return total_loss(avg, samples) <= total_loss(w, samples) ? avg : w;
}

RegretReport compute_regret(std::span<const std::vector<double>> learner_losses,
                            std::span<const std::vector<Sample>> seen,
                            const OracleSettings& settings) {
  if (learner_losses.size() != seen.size()) {
    throw DimensionError("regret: loss and sample task counts differ");
  }
  RegretReport report;
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (learner_losses[k].size() != seen[k].size()) {
      throw DimensionError("regret: task " + std::to_string(k) + " has " +
                           describe_dims(learner_losses[k].size(), seen[k].size()) +
                           " losses/samples");
    }
    for (double l : learner_losses[k]) report.learner_loss += l;
    Vector w_star = batch_oracle(seen[k], settings);
    const double comparator = total_loss(w_star, seen[k]);
    if (!std::isfinite(comparator)) {
      throw OracleDivergenceError("batch comparator loss is not finite");
    }
    report.comparator_loss += comparator;
    report.comparators.push_back(std::move(w_star));
  }
  report.regret = report.learner_loss - report.comparator_loss;
  return report;
}

}  // namespace omtl
