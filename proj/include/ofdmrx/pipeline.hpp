// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMRX_PIPELINE_HPP
#define OFDMRX_PIPELINE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ofdmrx/channel.hpp"
#include "ofdmrx/receiver.hpp"
#include "ofdmrx/ringbuf.hpp"
#include "ofdmrx/sync.hpp"

namespace ofdmrx {

// Whole symbols (pilot included) that fit in the capture after
// symbol0_offset, capped by the frame layout.
std::size_t available_symbols(const RxCapture& capture, std::size_t symbol0_offset);

// Slot `index` (0 is the pilot) cut from every antenna stream.
SymbolSlot make_slot(const RxCapture& capture, std::size_t symbol0_offset, std::size_t index);

struct ReceiveOptions {
  EngineKind engine = EngineKind::sequential();
  std::size_t ring_capacity = kDefaultRingCapacity;
};

struct ReceiveRun {
  ChannelEstimate estimate;
  StageTimings pilot_timings;
  std::vector<ProcessedSymbol> data;
};

// Producer thread writes the frame's slots into a SymbolRing; the calling
// thread consumes them through a Receiver. Throws ErrorCode::input when the
// capture does not hold a pilot symbol after the offset.
ReceiveRun run_receiver(const RxCapture& capture, std::size_t symbol0_offset,
                        Receiver& receiver, std::size_t ring_capacity = kDefaultRingCapacity);
ReceiveRun run_receiver(const RxCapture& capture, std::size_t symbol0_offset,
                        const ReceiveOptions& options = {});

// Demapped payload bits with pad positions removed.
Bits payload_bits(const ReceiveRun& run, const OfdmConfig& cfg, const FrameLayout& layout);
// Equalized payload samples with pad positions removed.
ComplexVector payload_samples(const ReceiveRun& run, const OfdmConfig& cfg,
                              const FrameLayout& layout);

struct SymbolScore {
  std::uint64_t seq_no = 0;
  SlotKind kind = SlotKind::data;
  std::optional<double> ber;
  std::optional<double> evm_db;
  std::size_t bit_errors = 0;
  std::size_t n_bits = 0;
};

struct ReceiveScore {
  std::vector<SymbolScore> symbols;  // pilot first
  std::optional<double> ber;
  std::size_t bit_errors = 0;
  std::size_t n_bits = 0;
  double evm_db = 0.0;
};

// With truth bits, BER and EVM are measured against the transmitted
// payload; without, BER is absent and EVM is decision-directed.
ReceiveScore score_run(const ReceiveRun& run, const OfdmConfig& cfg, const FrameLayout& layout,
                       const Bits* truth);

}  // namespace ofdmrx

#endif  // OFDMRX_PIPELINE_HPP
