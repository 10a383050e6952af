// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMRX_RECEIVER_HPP
#define OFDMRX_RECEIVER_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "ofdmrx/numerics.hpp"
#include "ofdmrx/ringbuf.hpp"
#include "ofdmrx/types.hpp"
#include "ofdmrx/waveform.hpp"
#include "ofdmrx/worker_pool.hpp"

namespace ofdmrx {

using Nanos = std::chrono::nanoseconds;

// Floor on the MRC denominator; subcarriers below it are reported erased.
inline constexpr double kMrcFloor = 1e-12;

enum class EngineVariant { sequential, data_parallel };

std::string_view engine_name(EngineVariant v) noexcept;
EngineVariant parse_engine(std::string_view name);

// Hardware threads clamped to [1, 8].
std::size_t default_worker_count() noexcept;

struct EngineKind {
  EngineVariant variant = EngineVariant::sequential;
  std::size_t workers = 1;  // data_parallel only

  static EngineKind sequential() { return {EngineVariant::sequential, 1}; }
  static EngineKind data_parallel(std::size_t workers) {
    return {EngineVariant::data_parallel, workers};
  }
};

// Execution back-end for the per-symbol kernels. The sequential engine runs
// loops on the calling thread. The data-parallel engine fans the same
// per-element work out over a worker pool: rows (antennas) for the FFT,
// (antenna, subcarrier) cells for LS, subcarriers for MRC, where each
// subcarrier's sum over antennas is a tree reduction.
class Engine {
 public:
  explicit Engine(EngineKind kind);

  const EngineKind& kind() const noexcept { return kind_; }
  bool parallel() const noexcept { return pool_ != nullptr; }

  void for_range(std::size_t n, const WorkerPool::RangeFn& fn);

 private:
  EngineKind kind_;
  std::unique_ptr<WorkerPool> pool_;
};

struct ChannelEstimate {
  ComplexMatrix h_hat;  // antennas x subcarriers
  std::uint64_t source_seq = 0;
};

struct CombinedSymbol {
  ComplexVector s_hat;
  std::uint64_t seq_no = 0;
  std::vector<double> weight_norm;  // sum_n |H_n[k]|^2
  std::size_t erased = 0;           // subcarriers with weight_norm below kMrcFloor
};

struct StageTimings {
  SlotKind kind = SlotKind::data;
  Nanos read{0};     // time spent waiting on / copying out of the ring
  Nanos cp_drop{0};
  Nanos fft{0};      // FFT and fftshift
  Nanos equalize{0}; // LS for the pilot, MRC for data

  Nanos total() const noexcept { return read + cp_drop + fft + equalize; }
};

// Last M samples of every antenna row. Throws ErrorCode::framing when the
// row length is not M + cp.
ComplexMatrix cp_drop(const SymbolSlot& slot, const OfdmConfig& cfg);
ComplexMatrix cp_drop(const ComplexMatrix& rows, const OfdmConfig& cfg);

// Per-row FFT followed by fftshift.
ComplexMatrix to_freq(const ComplexMatrix& time, Engine& engine);
ComplexMatrix to_freq(const ComplexMatrix& time);

// H_n[k] = Y_n[k] / P[k].
ChannelEstimate ls_estimate(const ComplexMatrix& y, const PilotDefinition& pilot,
                            Engine& engine, std::uint64_t source_seq = 0);
ChannelEstimate ls_estimate(const ComplexMatrix& y, const PilotDefinition& pilot);

// s[k] = sum_n conj(H_n[k]) Y_n[k] / max(sum_n |H_n[k]|^2, kMrcFloor).
CombinedSymbol mrc_combine(const ComplexMatrix& y, const ChannelEstimate& est,
                           Engine& engine, std::uint64_t seq_no = 0);
CombinedSymbol mrc_combine(const ComplexMatrix& y, const ChannelEstimate& est);

struct ProcessedSymbol {
  std::uint64_t seq_no = 0;
  SlotKind kind = SlotKind::data;
  std::optional<CombinedSymbol> combined;  // data slots
  Bits bits;                               // data slots
  StageTimings timings;
};

// Stateful per-frame receiver: the pilot slot produces the channel estimate
// used by every following data slot.
class Receiver {
 public:
  Receiver(OfdmConfig cfg, PilotDefinition pilot, EngineKind engine);

  // Throws ErrorCode::pipeline_order for a data slot before any pilot.
  ProcessedSymbol process_symbol(const SymbolSlot& slot, Nanos read_time = Nanos{0});

  const std::optional<ChannelEstimate>& estimate() const noexcept { return estimate_; }
  // Drop the estimate so the next frame starts with its pilot.
  void reset() noexcept { estimate_.reset(); }

  const OfdmConfig& cfg() const noexcept { return cfg_; }
  Engine& engine() noexcept { return engine_; }

 private:
  OfdmConfig cfg_;
  PilotDefinition pilot_;
  Engine engine_;
  std::optional<ChannelEstimate> estimate_;
};

}  // namespace ofdmrx

#endif  // OFDMRX_RECEIVER_HPP
