// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMRX_BENCH_HPP
#define OFDMRX_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ofdmrx/channel.hpp"
#include "ofdmrx/receiver.hpp"

namespace ofdmrx {

struct ExperimentMatrix {
  std::vector<std::size_t> antenna_counts;
  std::vector<std::size_t> fft_lens{64, 1024};
  std::vector<EngineVariant> engines{EngineVariant::sequential, EngineVariant::data_parallel};
  std::size_t workers = 4;  // data_parallel worker count
  std::size_t repetitions = 1;
  std::size_t payload_qam_samples = 100000;
  unsigned qam_order = 4;

  static ExperimentMatrix defaults();  // 1..16 antennas
  void validate() const;
};

struct BenchRecord {
  std::size_t fft_len = 0;
  std::size_t cp_len = 0;
  std::size_t n_antennas = 0;
  std::string engine;
  std::size_t workers = 1;
  std::string phase;  // estimation | demodulation
  std::string stage;  // read | cp_drop | fft | ls | mrc | warmup
  double mean_us = 0.0;
  double std_us = 0.0;
  std::size_t n_symbols = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct CellFailure {
  std::size_t fft_len = 0;
  std::size_t n_antennas = 0;
  std::string engine;
  std::string reason;
};

struct BenchReport {
  std::vector<BenchRecord> records;
  std::vector<CellFailure> failures;
  std::size_t cells_completed = 0;
};

// Builds the channel for a given antenna count.
using ChannelFactory = std::function<ChannelModel(std::size_t n_antennas)>;

using BenchProgress = std::function<void(const std::string& line)>;

// Cells run one at a time. Per (fft_len, antennas) one frame is generated,
// passed through the channel and detected. Both engines are then run once
// untimed and their outputs compared; on mismatch every cell of that pair
// fails. Each engine cell then runs one untimed warm-up frame and
// `repetitions` timed frames.
BenchReport run_matrix(const ExperimentMatrix& matrix, const ChannelFactory& channel,
                       std::uint64_t seed, const BenchProgress& progress = {});

inline constexpr std::string_view kBenchCsvHeader =
    "fft_len,cp_len,n_antennas,engine,workers,phase,stage,mean_us,std_us,n_symbols";

std::string bench_to_csv(const std::vector<BenchRecord>& records);
// Throws ErrorCode::input on a malformed header or row.
std::vector<BenchRecord> bench_from_csv(std::string_view text);

struct SpeedupRow {
  std::size_t fft_len = 0;
  std::size_t n_antennas = 0;
  std::string phase;
  std::string stage;  // a bench stage, or "compute" for cp_drop+fft+ls/mrc
  double sequential_us = 0.0;
  double parallel_us = 0.0;
  double speedup = 0.0;  // sequential / parallel
};

// Throws ErrorCode::incomplete_data listing every (fft_len, antennas) cell
// that lacks one of the two engines.
std::vector<SpeedupRow> speedup_table(const std::vector<BenchRecord>& records);

inline constexpr std::string_view kSpeedupCsvHeader =
    "fft_len,n_antennas,phase,stage,sequential_us,parallel_us,speedup";
std::string speedup_to_csv(const std::vector<SpeedupRow>& rows);

// Front-end to back-end data rate: antennas * bandwidth * bytes * 8.
double frontend_throughput(double n_antennas, double bandwidth_hz,
                           double bytes_per_complex_sample = 4.0);

}  // namespace ofdmrx

#endif  // OFDMRX_BENCH_HPP
