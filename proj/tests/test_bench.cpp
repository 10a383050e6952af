// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ofdmrx/bench.hpp"
#include "ofdmrx/channel.hpp"
#include "ofdmrx/error.hpp"

using namespace ofdmrx;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

std::string error_text(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

ChannelModel noisy_rayleigh(std::size_t) {
  ChannelModel m = ChannelModel::rayleigh(20.0, 3);
  m.timing_offset = 100;
  return m;
}

BenchRecord record(std::size_t fft, std::size_t n, const std::string& engine, const std::string& phase,
                   const std::string& stage, double mean) {
  return {fft, fft == 64 ? 16u : 72u, n, engine, 2, phase, stage, mean, 0.0, 1};
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("default matrix") {
  const ExperimentMatrix m = ExperimentMatrix::defaults();
  CHECK(m.antenna_counts.size() == 16);
  CHECK(m.antenna_counts.front() == 1);
  CHECK(m.antenna_counts.back() == 16);
  CHECK(m.fft_lens == std::vector<std::size_t>{64, 1024});
  CHECK(m.engines.size() == 2);
  CHECK(m.payload_qam_samples == 100000);
  CHECK(m.antenna_counts.size() * m.fft_lens.size() * m.engines.size() == 64);
  m.validate();

  ExperimentMatrix bad = m;
  bad.fft_lens = {100};
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::config);
  bad = m;
  bad.repetitions = 0;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::config);
  bad = m;
  bad.engines.clear();
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::config);
  bad = m;
  bad.antenna_counts = {0};
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::config);
}

TEST_CASE("small sweep emits every stage record") {
  ExperimentMatrix m = ExperimentMatrix::defaults();
  m.antenna_counts = {1, 3};
  m.fft_lens = {64, 1024};
  m.payload_qam_samples = 4096;
  m.repetitions = 3;
  m.workers = 2;
  std::vector<std::string> progress;
  const BenchReport r = run_matrix(m, noisy_rayleigh, 5, [&](const std::string& l) { progress.push_back(l); });
  CHECK(r.failures.empty());
  CHECK(r.cells_completed == 8);
  CHECK(r.records.size() == 8 * 10);
  CHECK(progress.size() >= 8);

  std::set<std::string> stages;
  for (const auto& rec : r.records) {
    stages.insert(rec.phase + "/" + rec.stage);
    CHECK(rec.mean_us >= 0.0);
    CHECK(rec.std_us >= 0.0);
    CHECK(rec.n_symbols >= 1);
    if (rec.engine == "data_parallel") {
      CHECK(rec.workers == 2);
    } else {
      CHECK(rec.workers == 1);
    }
    if (rec.phase == "demodulation" && rec.stage != "warmup") {
      CHECK(rec.n_symbols == 3 * (rec.fft_len == 64 ? 64u : 4u));
    }
    if (rec.phase == "estimation" && rec.stage != "warmup") CHECK(rec.n_symbols == 3);
  }
  const std::set<std::string> expected{
      "estimation/read",   "estimation/cp_drop",   "estimation/fft",   "estimation/ls",
      "estimation/warmup", "demodulation/read",    "demodulation/cp_drop", "demodulation/fft",
      "demodulation/mrc",  "demodulation/warmup"};
  CHECK(stages == expected);

  const auto rows = speedup_table(r.records);
  for (std::size_t fft : {64u, 1024u}) {
    for (std::size_t n : {1u, 3u}) {
      for (const char* phase : {"estimation", "demodulation"}) {
        CHECK(std::count_if(rows.begin(), rows.end(), [&](const SpeedupRow& row) {
                return row.fft_len == fft && row.n_antennas == n && row.phase == phase &&
                       row.stage == "compute";
              }) == 1);
      }
    }
  }
}

TEST_CASE("a cell whose packet is not detected fails without stopping the sweep") {
  ExperimentMatrix m = ExperimentMatrix::defaults();
  m.antenna_counts = {1, 2};
  m.fft_lens = {64};
  m.payload_qam_samples = 640;
  m.workers = 2;
  auto channel = [](std::size_t n) {
    ChannelModel model = ChannelModel::rayleigh(n == 1 ? -40.0 : 20.0, 3);
    model.timing_offset = 500;
    return model;
  };
  const BenchReport r = run_matrix(m, channel, 5);
  CHECK(r.failures.size() == 2);
  for (const auto& f : r.failures) {
    CHECK(f.n_antennas == 1);
    CHECK(f.reason.find("not detected") != std::string::npos);
  }
  CHECK(r.cells_completed == 2);
  for (const auto& rec : r.records) CHECK(rec.n_antennas == 2);
}

TEST_CASE("bench CSV round trip") {
  ExperimentMatrix m = ExperimentMatrix::defaults();
  m.antenna_counts = {2};
  m.fft_lens = {64};
  m.payload_qam_samples = 640;
  m.repetitions = 2;
  const BenchReport r = run_matrix(m, noisy_rayleigh, 1);
  const std::string csv = bench_to_csv(r.records);
  CHECK(csv.rfind(std::string(kBenchCsvHeader) + "\n", 0) == 0);
  CHECK(bench_from_csv(csv) == r.records);

  CHECK(code_of([] { bench_from_csv(""); }) == ErrorCode::input);
  CHECK(code_of([] { bench_from_csv("a,b\n1,2\n"); }) == ErrorCode::input);
  CHECK(code_of([] {
          bench_from_csv(std::string(kBenchCsvHeader) + "\n64,16,1,sequential,1,estimation,fft,x,0,1\n");
        }) == ErrorCode::input);
}

TEST_CASE("speedup arithmetic") {
  std::vector<BenchRecord> recs{
      record(64, 1, "sequential", "demodulation", "fft", 10.0),
      record(64, 1, "data_parallel", "demodulation", "fft", 2.0),
      record(64, 1, "sequential", "demodulation", "mrc", 3.0),
      record(64, 1, "data_parallel", "demodulation", "mrc", 3.0),
      record(64, 1, "sequential", "demodulation", "read", 100.0),
      record(64, 1, "data_parallel", "demodulation", "read", 1.0),
  };
  const auto rows = speedup_table(recs);
  auto find = [&](const std::string& stage) {
    return *std::find_if(rows.begin(), rows.end(), [&](const SpeedupRow& r) { return r.stage == stage; });
  };
  CHECK(find("fft").speedup == 5.0);
  CHECK(find("mrc").speedup == 1.0);
  CHECK(find("read").speedup == 100.0);
  CHECK(find("compute").sequential_us == 13.0);
  CHECK(find("compute").parallel_us == 5.0);
  const std::string csv = speedup_to_csv(rows);
  CHECK(csv.rfind(std::string(kSpeedupCsvHeader) + "\n", 0) == 0);

  recs.push_back(record(1024, 4, "sequential", "demodulation", "fft", 1.0));
  recs.push_back(record(1024, 8, "data_parallel", "demodulation", "fft", 1.0));
  CHECK(code_of([&] { speedup_table(recs); }) == ErrorCode::incomplete_data);
  const std::string msg = error_text([&] { speedup_table(recs); });
  CHECK(msg.find("fft_len=1024 n_antennas=4 lacks data_parallel") != std::string::npos);
  CHECK(msg.find("fft_len=1024 n_antennas=8 lacks sequential") != std::string::npos);
}

TEST_CASE("front-end throughput model") {
  CHECK(frontend_throughput(16, 20e6, 4) == 10.24e9);
  CHECK(frontend_throughput(16, 20e6) >= 10e9);
  CHECK(frontend_throughput(1, 10e6, 4) == 320e6);
  CHECK(frontend_throughput(1, 0, 4) == 0.0);
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.1, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double n = u(gen);
    const double bw = u(gen) * 1e6;
    const double b = u(gen);
    const double base = frontend_throughput(n, bw, b);
    CHECK(frontend_throughput(n * 1.01, bw, b) > base);
    CHECK(frontend_throughput(n, bw * 1.01, b) > base);
    CHECK(frontend_throughput(n, bw, b * 1.01) > base);
  }
}

}  // TEST_SUITE
