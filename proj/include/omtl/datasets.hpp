#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "omtl/types.hpp"

namespace omtl {

// Rotated sine-boundary tasks on [-1, 1]^2 lifted to 9 cubic monomials.
struct SyntheticConfig {
  std::size_t K = 5;
  std::size_t n_per_task = 2000;
  double rotation_step = 0.3;
  double noise = 0.0;
  std::uint64_t seed = 0;
  // Every task draws from the same sub-seed (identical points, labels differ
  // only through rotation).
  bool shared_task_seed = false;

  void validate() const;
};

inline constexpr std::size_t kSyntheticDim = 9;

// Per-task feed that cycles forever. Epoch 0 visits samples in stored order;
// later epochs use a permutation derived from (shuffle_seed, epoch) when
// epoch_reshuffle is set, otherwise stored order again.
class TaskStream {
 public:
  TaskStream(std::size_t task_index, std::vector<Sample> samples, bool epoch_reshuffle = true,
             std::uint64_t shuffle_seed = 0);

  std::size_t task_index() const { return task_index_; }
  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  std::size_t cursor() const { return cursor_; }
  std::size_t epoch() const { return epoch_; }
  std::size_t dim() const;
  bool epoch_reshuffle() const { return epoch_reshuffle_; }

  void set_epoch_reshuffle(bool on) { epoch_reshuffle_ = on; }
  void set_shuffle_seed(std::uint64_t seed) { shuffle_seed_ = seed; }

  const Sample& next();

  // Back to epoch 0, cursor 0.
  void rewind();

 private:
  void start_epoch(std::size_t epoch);

  std::size_t task_index_;
  std::vector<Sample> samples_;
  bool epoch_reshuffle_;
  std::uint64_t shuffle_seed_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::size_t epoch_ = 0;
};

struct DatasetManifest {
  std::string name;
  std::size_t K = 0;
  std::size_t d = 0;
  std::vector<std::size_t> counts;
  std::vector<double> positive_ratios;
};

struct Dataset {
  std::vector<TaskStream> streams;
  DatasetManifest manifest;
};

DatasetManifest make_manifest(std::string name, std::span<const TaskStream> streams);

Dataset generate_synthetic(const SyntheticConfig& cfg);

// Single file with a task_id column. Task ids must be integers; they map to
// stream indices in ascending order of id.
Dataset load_csv(const std::filesystem::path& path);

// One file per task, no task_id column; stream k comes from paths[k].
Dataset load_csv_files(std::span<const std::filesystem::path> paths);

// Writes the task_id layout, task-major, labels as -1/1, features in
// shortest round-trip form. Rereading and rewriting reproduces the bytes.
void write_csv(std::span<const TaskStream> streams, const std::filesystem::path& path);
std::string to_csv(std::span<const TaskStream> streams);

// One sample per task in ascending task order.
std::vector<Sample> next_round(std::span<TaskStream> streams);

}  // namespace omtl
