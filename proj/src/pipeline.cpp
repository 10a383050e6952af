// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include "ofdmrx/pipeline.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

namespace ofdmrx {

std::size_t available_symbols(const RxCapture& capture, std::size_t symbol0_offset) {
  const std::size_t len = capture.length();
  if (symbol0_offset >= len) return 0;
  const std::size_t fit = (len - symbol0_offset) / capture.cfg.symbol_len();
  return std::min(fit, capture.layout.n_data_symbols + 1);
}

SymbolSlot make_slot(const RxCapture& capture, std::size_t symbol0_offset, std::size_t index) {
  const std::size_t sym = capture.cfg.symbol_len();
  const std::size_t begin = symbol0_offset + index * sym;
  require(begin + sym <= capture.length(), ErrorCode::input,
          "symbol " + std::to_string(index) + " extends past the end of the capture");
  SymbolSlot slot;
  slot.seq_no = index;
  slot.kind = index == 0 ? SlotKind::pilot : SlotKind::data;
  slot.payload = ComplexMatrix(capture.streams.size(), sym);
  for (std::size_t n = 0; n < capture.streams.size(); ++n) {
    const auto& s = capture.streams[n];
    std::copy(s.begin() + static_cast<std::ptrdiff_t>(begin),
              s.begin() + static_cast<std::ptrdiff_t>(begin + sym), slot.payload.row(n).begin());
  }
  return slot;
}

ReceiveRun run_receiver(const RxCapture& capture, std::size_t symbol0_offset,
                        Receiver& receiver, std::size_t ring_capacity) {
  capture.validate();
  const std::size_t n_slots = available_symbols(capture, symbol0_offset);
  require(n_slots >= 1, ErrorCode::input,
          "capture holds no complete OFDM symbol after offset " + std::to_string(symbol0_offset));

  SymbolRing ring(ring_capacity, FullPolicy::block);
  const auto consumer = ring.register_consumer();
  std::exception_ptr producer_error;
  std::thread producer([&] {
    try {
      for (std::size_t i = 0; i < n_slots; ++i) ring.write(make_slot(capture, symbol0_offset, i));
    } catch (...) {
      producer_error = std::current_exception();
    }
    ring.close();
  });

  ReceiveRun run;
  run.data.reserve(n_slots - 1);
  receiver.reset();
  try {
    using Clock = std::chrono::steady_clock;
    for (;;) {
      const auto t0 = Clock::now();
      auto slot = ring.read(consumer);
      const auto read_time = std::chrono::duration_cast<Nanos>(Clock::now() - t0);
      if (!slot) break;
      require(slot->verify(), ErrorCode::internal,
              "checksum mismatch on symbol " + std::to_string(slot->seq_no));
      ProcessedSymbol p = receiver.process_symbol(*slot, read_time);
      if (p.kind == SlotKind::pilot) {
        run.pilot_timings = p.timings;
      } else {
        run.data.push_back(std::move(p));
      }
    }
  } catch (...) {
    ring.close();
    producer.join();
    throw;
  }
  producer.join();
  if (producer_error) std::rethrow_exception(producer_error);
  run.estimate = *receiver.estimate();
  return run;
}

ReceiveRun run_receiver(const RxCapture& capture, std::size_t symbol0_offset,
                        const ReceiveOptions& options) {
  const PilotDefinition pilot = PilotDefinition::bpsk(capture.cfg.fft_len, capture.layout.pilot_seed);
  Receiver receiver(capture.cfg, pilot, options.engine);
  return run_receiver(capture, symbol0_offset, receiver, options.ring_capacity);
}

namespace {

// Payload QAM positions [begin, end) carried by data symbol `index`.
std::pair<std::size_t, std::size_t> payload_span(std::size_t index, const OfdmConfig& cfg,
                                                 const FrameLayout& layout) {
  const std::size_t begin = std::min(index * cfg.fft_len, layout.payload_qam_samples);
  const std::size_t end = std::min(begin + cfg.fft_len, layout.payload_qam_samples);
  return {begin, end};
}

}  // namespace

Bits payload_bits(const ReceiveRun& run, const OfdmConfig& cfg, const FrameLayout& layout) {
  const std::size_t bpq = cfg.bits_per_qam();
  Bits out;
  out.reserve(layout.payload_qam_samples * bpq);
  for (std::size_t i = 0; i < run.data.size(); ++i) {
    const auto [begin, end] = payload_span(i, cfg, layout);
    const auto& bits = run.data[i].bits;
    out.insert(out.end(), bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>((end - begin) * bpq));
  }
  return out;
}

ComplexVector payload_samples(const ReceiveRun& run, const OfdmConfig& cfg,
                              const FrameLayout& layout) {
  ComplexVector out;
  out.reserve(layout.payload_qam_samples);
  for (std::size_t i = 0; i < run.data.size(); ++i) {
    const auto [begin, end] = payload_span(i, cfg, layout);
    const auto& s = run.data[i].combined->s_hat;
    out.insert(out.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(end - begin));
  }
  return out;
}

ReceiveScore score_run(const ReceiveRun& run, const OfdmConfig& cfg, const FrameLayout& layout,
                       const Bits* truth) {
  const std::size_t bpq = cfg.bits_per_qam();
  ComplexVector truth_qam;
  if (truth) {
    require(truth->size() == layout.payload_qam_samples * bpq, ErrorCode::input,
            "truth has " + std::to_string(truth->size()) + " bits, frame carries " +
                std::to_string(layout.payload_qam_samples * bpq));
    truth_qam = qam_map(*truth, cfg.qam_order);
  }

  ReceiveScore score;
  SymbolScore pilot;
  pilot.seq_no = 0;
  pilot.kind = SlotKind::pilot;
  score.symbols.push_back(pilot);

  double err_total = 0.0;
  double ref_total = 0.0;
  for (std::size_t i = 0; i < run.data.size(); ++i) {
    const ProcessedSymbol& p = run.data[i];
    const auto [begin, end] = payload_span(i, cfg, layout);
    const std::size_t n = end - begin;
    SymbolScore s;
    s.seq_no = p.seq_no;
    s.kind = SlotKind::data;
    s.n_bits = n * bpq;

    ComplexVector ref;
    if (truth) {
      ref.assign(truth_qam.begin() + static_cast<std::ptrdiff_t>(begin),
                 truth_qam.begin() + static_cast<std::ptrdiff_t>(end));
      for (std::size_t b = 0; b < s.n_bits; ++b) {
        s.bit_errors += p.bits[b] != (*truth)[begin * bpq + b] ? 1u : 0u;
      }
      s.ber = s.n_bits ? static_cast<double>(s.bit_errors) / static_cast<double>(s.n_bits) : 0.0;
    } else {
      ref = qam_map(std::span(p.bits).first(s.n_bits), cfg.qam_order);
    }
    double err = 0.0;
    double pwr = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      err += std::norm(p.combined->s_hat[k] - ref[k]);
      pwr += std::norm(ref[k]);
    }
    if (n > 0 && pwr > 0.0) {
      s.evm_db = err > 0.0 ? 10.0 * std::log10(err / pwr) : -std::numeric_limits<double>::infinity();
    }
    err_total += err;
    ref_total += pwr;
    score.bit_errors += s.bit_errors;
    score.n_bits += s.n_bits;
    score.symbols.push_back(s);
  }
  if (truth) {
    // Symbols missing from a truncated capture count as errors.
    const std::size_t expected = truth->size();
    score.bit_errors += expected - std::min(expected, score.n_bits);
    score.n_bits = expected;
    score.ber = expected ? static_cast<double>(score.bit_errors) / static_cast<double>(expected) : 0.0;
  }
  score.evm_db = ref_total > 0.0 && err_total > 0.0 ? 10.0 * std::log10(err_total / ref_total)
                                                    : -std::numeric_limits<double>::infinity();
  return score;
}

}  // namespace ofdmrx
