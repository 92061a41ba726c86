#include <doctest.h>

#include "omtl/datasets.hpp"
#include "omtl/errors.hpp"
#include "test_util.hpp"

using namespace omtl;
using omtl::testing::vec;

namespace {

bool same_samples(const std::vector<Sample>& a, const std::vector<Sample>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].label != b[i].label || a[i].features != b[i].features) return false;
  }
  return true;
}

std::vector<Sample> numbered(std::size_t n) {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(testing::sample(vec({static_cast<double>(i)}), 1));
  }
  return out;
}

}  // namespace

TEST_CASE("synthetic features are the cubic lift") {
  SyntheticConfig cfg;
  cfg.K = 2;
  cfg.n_per_task = 50;
  const auto ds = generate_synthetic(cfg);
  CHECK(ds.manifest.d == kSyntheticDim);
  for (const auto& s : ds.streams[1].samples()) {
    const double a = s.features(1), b = s.features(2);
    CHECK(s.features(0) == 1.0);
    CHECK(std::abs(a) <= 1.0);
    CHECK(s.features(4) == a * b);
    CHECK(s.features(8) == a * b * b);
  }
}

TEST_CASE("zero rotation with a shared seed gives identical tasks") {
  SyntheticConfig cfg;
  cfg.K = 4;
  cfg.n_per_task = 300;
  cfg.rotation_step = 0.0;
  cfg.shared_task_seed = true;
  const auto ds = generate_synthetic(cfg);
  for (std::size_t k = 1; k < cfg.K; ++k) {
    CHECK(same_samples(ds.streams[k].samples(), ds.streams[0].samples()));
  }
  cfg.rotation_step = 0.5;
  const auto rotated = generate_synthetic(cfg);
  CHECK(!same_samples(rotated.streams[1].samples(), rotated.streams[0].samples()));
  // Same points, only labels differ.
  for (std::size_t i = 0; i < cfg.n_per_task; ++i) {
    CHECK(rotated.streams[2].samples()[i].features == ds.streams[2].samples()[i].features);
  }
}

TEST_CASE("labels are balanced") {
  SyntheticConfig cfg;
  cfg.K = 5;
  cfg.n_per_task = 10000;
  cfg.noise = 0.0;
  const auto ds = generate_synthetic(cfg);
  for (double r : ds.manifest.positive_ratios) CHECK(std::abs(r - 0.5) <= 0.02);
}

TEST_CASE("noise flips about the requested fraction") {
  SyntheticConfig clean;
  clean.K = 1;
  clean.n_per_task = 20000;
  SyntheticConfig noisy = clean;
  noisy.noise = 0.2;
  const auto a = generate_synthetic(clean), b = generate_synthetic(noisy);
  std::size_t flips = 0;
  for (std::size_t i = 0; i < clean.n_per_task; ++i) {
    CHECK(a.streams[0].samples()[i].features == b.streams[0].samples()[i].features);
    flips += a.streams[0].samples()[i].label != b.streams[0].samples()[i].label ? 1 : 0;
  }
  CHECK(std::abs(static_cast<double>(flips) / 20000.0 - 0.2) < 0.015);
}

TEST_CASE("generation is deterministic in the seed") {
  SyntheticConfig cfg;
  cfg.K = 3;
  cfg.n_per_task = 200;
  cfg.noise = 0.1;
  cfg.seed = 99;
  const auto a = generate_synthetic(cfg), b = generate_synthetic(cfg);
  CHECK(to_csv(a.streams) == to_csv(b.streams));
  cfg.seed = 100;
  CHECK(to_csv(generate_synthetic(cfg).streams) != to_csv(a.streams));
}

TEST_CASE("synthetic config validation") {
  SyntheticConfig cfg;
  cfg.K = 0;
  CHECK_THROWS_AS(generate_synthetic(cfg), ConfigError);
  cfg = {};
  cfg.noise = 0.5;
  CHECK_THROWS_AS(generate_synthetic(cfg), ConfigError);
  cfg = {};
  cfg.n_per_task = 0;
  CHECK_THROWS_AS(generate_synthetic(cfg), ConfigError);
}

TEST_CASE("csv loading") {
  const auto dir = testing::scratch_dir("csv_loading");
  const auto path = dir / "tiny.csv";
  testing::write_file(path,
                      "task_id,label,f0,f1\n"
                      "7,1,0.5,-1\n"
                      "3,0,2,3e-2\n"
                      "7,-1,1,1\n"
                      "\n");
  const auto ds = load_csv(path);
  REQUIRE(ds.streams.size() == 2);
  CHECK(ds.manifest.K == 2);
  CHECK(ds.manifest.d == 2);
  CHECK(ds.manifest.counts == std::vector<std::size_t>{1, 2});
  CHECK(ds.manifest.positive_ratios[1] == 0.5);
  CHECK(ds.streams[0].samples()[0].label == Label::kNegative);
  CHECK(ds.streams[0].samples()[0].features == vec({2, 0.03}));
  CHECK(ds.streams[1].samples()[0].label == Label::kPositive);
  CHECK(ds.streams[1].samples()[1].label == Label::kNegative);
}

TEST_CASE("csv errors carry the line") {
  const auto dir = testing::scratch_dir("csv_errors");
  const auto path = dir / "bad.csv";

  testing::write_file(path, "task_id,label,f0\n0,1,1\n0,1\n");
  try {
    load_csv(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 3);
  }

  testing::write_file(path, "task_id,label,f0,f1\n0,1,1,2\n1,0,1,abc\n");
  try {
    load_csv(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 4);
  }

  testing::write_file(path, "task_id,label,f0\n0,2,1\n");
  try {
    load_csv(path);
    FAIL("expected LabelError");
  } catch (const LabelError& e) {
    CHECK(e.line() == 2);
  }

  testing::write_file(path, "label,f0\n1,1\n");
  CHECK_THROWS_AS(load_csv(path), FormatError);
  testing::write_file(path, "task_id,label,f0\n");
  CHECK_THROWS_AS(load_csv(path), EmptyStreamError);
  CHECK_THROWS_AS(load_csv(dir / "missing.csv"), Error);
}

TEST_CASE("csv round trip reproduces the bytes") {
  SyntheticConfig cfg;
  cfg.K = 3;
  cfg.n_per_task = 40;
  cfg.noise = 0.1;
  const auto ds = generate_synthetic(cfg);
  const auto dir = testing::scratch_dir("csv_round_trip");
  write_csv(ds.streams, dir / "a.csv");
  const auto back = load_csv(dir / "a.csv");
  for (std::size_t k = 0; k < cfg.K; ++k) {
    CHECK(same_samples(back.streams[k].samples(), ds.streams[k].samples()));
  }
  write_csv(back.streams, dir / "b.csv");
  CHECK(testing::read_file(dir / "a.csv") == testing::read_file(dir / "b.csv"));
}

TEST_CASE("one file per task") {
  const auto dir = testing::scratch_dir("csv_files");
  testing::write_file(dir / "t0.csv", "label,f0,f1\n1,1,2\n0,3,4\n");
  testing::write_file(dir / "t1.csv", "label,f0,f1\n-1,5,6\n");
  const std::vector<std::filesystem::path> paths{dir / "t0.csv", dir / "t1.csv"};
  const auto ds = load_csv_files(paths);
  CHECK(ds.manifest.counts == std::vector<std::size_t>{2, 1});
  CHECK(ds.streams[1].samples()[0].features == vec({5, 6}));

  testing::write_file(dir / "t2.csv", "label,f0\n1,1\n");
  const std::vector<std::filesystem::path> mixed{dir / "t0.csv", dir / "t2.csv"};
  CHECK_THROWS_AS(load_csv_files(mixed), FormatError);
}

TEST_CASE("streams wrap and reshuffle per epoch") {
  TaskStream s(2, numbered(5), true, 17);
  std::vector<double> first, second;
  for (int i = 0; i < 5; ++i) first.push_back(s.next().features(0));
  CHECK(first == std::vector<double>{0, 1, 2, 3, 4});
  CHECK(s.epoch() == 1);
  for (int i = 0; i < 5; ++i) second.push_back(s.next().features(0));
  auto sorted = second;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == first);

  TaskStream again(2, numbered(5), true, 17);
  for (int i = 0; i < 5; ++i) again.next();
  for (int i = 0; i < 5; ++i) CHECK(again.next().features(0) == second[static_cast<std::size_t>(i)]);

  s.rewind();
  CHECK(s.next().features(0) == 0.0);

  TaskStream fixed(0, numbered(3), false);
  for (int i = 0; i < 9; ++i) CHECK(fixed.next().features(0) == static_cast<double>(i % 3));

  CHECK_THROWS_AS(TaskStream(0, {}), EmptyStreamError);
}

TEST_CASE("reshuffles differ across epochs") {
  TaskStream s(0, numbered(50), true, 3);
  for (int i = 0; i < 50; ++i) s.next();
  std::vector<double> e1, e2;
  for (int i = 0; i < 50; ++i) e1.push_back(s.next().features(0));
  for (int i = 0; i < 50; ++i) e2.push_back(s.next().features(0));
  CHECK(e1 != e2);
}

TEST_CASE("next_round returns one sample per task in order") {
  std::vector<TaskStream> streams;
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<Sample> xs;
    for (std::size_t i = 0; i < 2; ++i) {
      xs.push_back(testing::sample(vec({static_cast<double>(10 * k + i)}), 1));
    }
    streams.emplace_back(k, std::move(xs), false);
  }
  const auto r1 = next_round(streams);
  const auto r2 = next_round(streams);
  const auto r3 = next_round(streams);
  CHECK(r1[1].features(0) == 10.0);
  CHECK(r2[2].features(0) == 21.0);
  CHECK(r3[0].features(0) == 0.0);
}
