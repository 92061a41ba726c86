#include "omtl/datasets.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "omtl/errors.hpp"
#include "omtl/rng.hpp"

namespace omtl {

void SyntheticConfig::validate() const {
  if (K == 0) throw ConfigError("synthetic K must be positive");
  if (n_per_task < 1) throw ConfigError("synthetic n_per_task must be at least 1");
  if (!(noise >= 0.0 && noise < 0.5)) throw ConfigError("synthetic noise must be in [0, 0.5)");
  if (!std::isfinite(rotation_step)) throw ConfigError("synthetic rotation_step must be finite");
}

TaskStream::TaskStream(std::size_t task_index, std::vector<Sample> samples, bool epoch_reshuffle,
                       std::uint64_t shuffle_seed)
    : task_index_(task_index),
      samples_(std::move(samples)),
      epoch_reshuffle_(epoch_reshuffle),
      shuffle_seed_(shuffle_seed) {
  if (samples_.empty()) {
    throw EmptyStreamError("task " + std::to_string(task_index_) + " has no samples");
  }
  const auto d = samples_.front().features.size();
  for (const auto& s : samples_) {
    if (s.features.size() != d) {
      throw DimensionError("task " + std::to_string(task_index_) + " mixes feature dimensions");
    }
  }
  start_epoch(0);
}

std::size_t TaskStream::dim() const {
  return static_cast<std::size_t>(samples_.front().features.size());
}

void TaskStream::start_epoch(std::size_t epoch) {
  epoch_ = epoch;
  cursor_ = 0;
  order_.resize(samples_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (epoch > 0 && epoch_reshuffle_) {
    Rng rng(derive_seed(shuffle_seed_, task_index_, epoch));
    for (std::size_t i = order_.size(); i > 1; --i) {
      std::swap(order_[i - 1], order_[rng.below(i)]);
    }
  }
}

const Sample& TaskStream::next() {
  const Sample& s = samples_[order_[cursor_]];
  if (++cursor_ == samples_.size()) start_epoch(epoch_ + 1);
  return s;
}

void TaskStream::rewind() { start_epoch(0); }

DatasetManifest make_manifest(std::string name, std::span<const TaskStream> streams) {
  DatasetManifest m;
  m.name = std::move(name);
  m.K = streams.size();
  m.d = streams.empty() ? 0 : streams.front().dim();
  for (const auto& s : streams) {
    m.counts.push_back(s.size());
    std::size_t pos = 0;
    for (const auto& sample : s.samples()) pos += sample.label == Label::kPositive ? 1 : 0;
    m.positive_ratios.push_back(static_cast<double>(pos) / static_cast<double>(s.size()));
  }
  return m;
}

Dataset generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  Dataset ds;
  ds.streams.reserve(cfg.K);
  for (std::size_t k = 0; k < cfg.K; ++k) {
    Rng rng(derive_seed(cfg.seed, cfg.shared_task_seed ? 0 : k + 1));
    const double theta = static_cast<double>(k) * cfg.rotation_step;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    std::vector<Sample> samples;
    samples.reserve(cfg.n_per_task);
    for (std::size_t i = 0; i < cfg.n_per_task; ++i) {
      const double a = rng.uniform(-1.0, 1.0);
      const double b = rng.uniform(-1.0, 1.0);
      const bool flip = rng.bernoulli(cfg.noise);
      const double ar = c * a - s * b;
      const double br = s * a + c * b;
      bool positive = br - std::sin(3.0 * ar) >= 0.0;
      if (flip) positive = !positive;
      Sample sample;
      sample.features.resize(kSyntheticDim);
      sample.features << 1.0, a, b, a * a, a * b, b * b, a * a * a, a * a * b, a * b * b;
      sample.label = positive ? Label::kPositive : Label::kNegative;
      samples.push_back(std::move(sample));
    }
    ds.streams.emplace_back(k, std::move(samples), true, derive_seed(cfg.seed, 0x5eed, k));
  }
  ds.manifest = make_manifest("synthetic", ds.streams);
  return ds;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

struct ParsedFile {
  std::vector<std::pair<long long, Sample>> rows;  // (task id, sample)
  std::size_t d = 0;
};

ParsedFile parse_csv(const std::filesystem::path& path, bool with_task_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": missing header row", 1);
  ++line_no;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split(line);

  std::size_t col = 0;
  if (with_task_column) {
    if (header.size() <= col || trim(header[col]) != "task_id") {
      throw FormatError(path.string() + ": first header column must be task_id", line_no);
    }
    ++col;
  }
  if (header.size() <= col || trim(header[col]) != "label") {
    throw FormatError(path.string() + ": expected a label column", line_no);
  }
  ++col;
  const std::size_t feature_start = col;
  ParsedFile parsed;
  parsed.d = header.size() - feature_start;
  if (parsed.d == 0) throw FormatError(path.string() + ": no feature columns", line_no);
  for (std::size_t f = 0; f < parsed.d; ++f) {
    if (trim(header[feature_start + f]) != "f" + std::to_string(f)) {
      throw FormatError(path.string() + ": feature column " + std::to_string(f) +
                            " must be named f" + std::to_string(f),
                        line_no);
    }
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw FormatError(path.string() + ": line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " fields, expected " +
                            std::to_string(header.size()),
                        line_no);
    }
    long long task = 0;
    if (with_task_column) {
      const auto cell = trim(cells[0]);
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), task);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                             ", column 1: task_id is not an integer",
                         line_no, 1);
      }
    }
    double label_value = 0.0;
    if (!parse_double(cells[feature_start - 1], label_value) ||
        !(label_value == 0.0 || label_value == 1.0 || label_value == -1.0)) {
      throw LabelError(path.string() + ": line " + std::to_string(line_no) +
                           ": unknown label '" + std::string(trim(cells[feature_start - 1])) + "'",
                       line_no);
    }
    Sample s;
    s.label = label_value > 0.0 ? Label::kPositive : Label::kNegative;
    s.features.resize(static_cast<Eigen::Index>(parsed.d));
    for (std::size_t f = 0; f < parsed.d; ++f) {
      double value = 0.0;
      if (!parse_double(cells[feature_start + f], value)) {
        const std::size_t column = feature_start + f + 1;
        throw ParseError(path.string() + ": line " + std::to_string(line_no) + ", column " +
                             std::to_string(column) + ": '" +
                             std::string(trim(cells[feature_start + f])) + "' is not a number",
                         line_no, column);
      }
      s.features(static_cast<Eigen::Index>(f)) = value;
    }
    parsed.rows.emplace_back(task, std::move(s));
  }
  return parsed;
}

void append_number(std::string& out, double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  out.append(buf, ptr);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  ParsedFile parsed = parse_csv(path, true);
  std::map<long long, std::vector<Sample>> by_task;
  for (auto& [task, sample] : parsed.rows) by_task[task].push_back(std::move(sample));
  if (by_task.empty()) throw EmptyStreamError(path.string() + ": no data rows");
  Dataset ds;
  std::size_t k = 0;
  for (auto& [task, samples] : by_task) ds.streams.emplace_back(k++, std::move(samples));
  ds.manifest = make_manifest(path.stem().string(), ds.streams);
  return ds;
}

Dataset load_csv_files(std::span<const std::filesystem::path> paths) {
  if (paths.empty()) throw ConfigError("no CSV files given");
  Dataset ds;
  std::size_t d = 0;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    ParsedFile parsed = parse_csv(paths[k], false);
    if (k == 0) d = parsed.d;
    if (parsed.d != d) {
      throw FormatError(paths[k].string() + ": feature count differs from the first file", 1);
    }
    if (parsed.rows.empty()) throw EmptyStreamError(paths[k].string() + ": no data rows");
    std::vector<Sample> samples;
    for (auto& row : parsed.rows) samples.push_back(std::move(row.second));
    ds.streams.emplace_back(k, std::move(samples));
  }
  ds.manifest = make_manifest(paths.front().parent_path().filename().string(), ds.streams);
  return ds;
}

std::string to_csv(std::span<const TaskStream> streams) {
  std::string out = "task_id,label";
  const std::size_t d = streams.empty() ? 0 : streams.front().dim();
  for (std::size_t f = 0; f < d; ++f) out += ",f" + std::to_string(f);
  out += '\n';
  for (const auto& stream : streams) {
    for (const auto& s : stream.samples()) {
      out += std::to_string(stream.task_index());
      out += s.label == Label::kPositive ? ",1" : ",-1";
      for (Eigen::Index f = 0; f < s.features.size(); ++f) {
        out += ',';
        append_number(out, s.features(f));
      }
      out += '\n';
    }
  }
  return out;
}

void write_csv(std::span<const TaskStream> streams, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_csv(streams);
}

std::vector<Sample> next_round(std::span<TaskStream> streams) {
  std::vector<Sample> out;
  out.reserve(streams.size());
  for (auto& s : streams) out.push_back(s.next());
  return out;
}

}  // namespace omtl
