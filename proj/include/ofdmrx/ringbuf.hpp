// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMRX_RINGBUF_HPP
#define OFDMRX_RINGBUF_HPP

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <vector>

#include "ofdmrx/types.hpp"

namespace ofdmrx {

enum class SlotKind : std::uint8_t { pilot, data };

struct SymbolSlot {
  std::uint64_t seq_no = 0;
  SlotKind kind = SlotKind::data;
  ComplexMatrix payload;  // n_antennas x (M + cp)
  std::uint64_t checksum = 0;

  // FNV-1a over seq_no, kind and the payload bytes.
  std::uint64_t compute_checksum() const noexcept;
  void seal() noexcept { checksum = compute_checksum(); }
  bool verify() const noexcept { return checksum == compute_checksum(); }
};

enum class FullPolicy { block, fail_fast };

inline constexpr std::size_t kDefaultRingCapacity = 64;

// Single-producer, multi-consumer symbol buffer. Each registered consumer
// has its own read cursor and sees every slot in seq order. The producer
// may run at most `capacity` slots ahead of the slowest consumer.
//
// Slot contents are copied outside the lock: a slot is only written when no
// consumer can still read it, and only read once the write cursor has been
// published past it.
class SymbolRing {
 public:
  using ConsumerId = std::size_t;

  explicit SymbolRing(std::size_t capacity = kDefaultRingCapacity,
                      FullPolicy policy = FullPolicy::block);

  SymbolRing(const SymbolRing&) = delete;
  SymbolRing& operator=(const SymbolRing&) = delete;

  std::size_t capacity() const noexcept { return slots_.size(); }

  // New consumers start at the oldest slot still held.
  ConsumerId register_consumer();

  // Seals the slot checksum. Throws ErrorCode::lifecycle after close() and
  // ErrorCode::backpressure when full under FullPolicy::fail_fast.
  void write(SymbolSlot slot);

  // Blocks until a slot is available. Returns nullopt once closed and
  // drained. Throws ErrorCode::contract for an unknown consumer.
  std::optional<SymbolSlot> read(ConsumerId consumer);

  void close();
  bool closed() const;

  std::uint64_t write_cursor() const;

 private:
  std::uint64_t slowest_cursor_locked() const noexcept;

  std::vector<SymbolSlot> slots_;
  std::uint64_t mask_;
  FullPolicy policy_;

  mutable std::mutex mutex_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
  std::uint64_t write_ = 0;
  std::vector<std::uint64_t> read_;
  bool closed_ = false;
  bool writing_ = false;
};

}  // namespace ofdmrx

#endif  // OFDMRX_RINGBUF_HPP
