// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include "ofdmrx/ringbuf.hpp"

#include <algorithm>
#include <cstring>
#include <string>

namespace ofdmrx {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) noexcept {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

std::uint64_t SymbolSlot::compute_checksum() const noexcept {
  std::uint64_t h = fnv1a(kFnvOffset, &seq_no, sizeof seq_no);
  const auto k = static_cast<std::uint8_t>(kind);
  h = fnv1a(h, &k, sizeof k);
  const std::uint64_t dims[2] = {payload.rows(), payload.cols()};
  h = fnv1a(h, dims, sizeof dims);
  const auto flat = payload.flat();
  return fnv1a(h, flat.data(), flat.size_bytes());
}

SymbolRing::SymbolRing(std::size_t capacity, FullPolicy policy)
    : slots_(capacity), mask_(capacity - 1), policy_(policy) {
  require(capacity >= 1 && is_power_of_two(capacity), ErrorCode::config,
          "ring capacity must be a power of two, got " + std::to_string(capacity));
}

std::uint64_t SymbolRing::slowest_cursor_locked() const noexcept {
  if (read_.empty()) return write_;
  return *std::min_element(read_.begin(), read_.end());
}

SymbolRing::ConsumerId SymbolRing::register_consumer() {
  std::lock_guard lock(mutex_);
  read_.push_back(slowest_cursor_locked());
  return read_.size() - 1;
}

void SymbolRing::write(SymbolSlot slot) {
  std::uint64_t position = 0;
  {
    std::unique_lock lock(mutex_);
    require(!closed_, ErrorCode::lifecycle, "write to a closed symbol ring");
    require(!writing_, ErrorCode::contract, "symbol ring has a single producer");
    const auto full = [this] { return write_ - slowest_cursor_locked() >= slots_.size(); };
    if (full()) {
      if (policy_ == FullPolicy::fail_fast) {
        fail(ErrorCode::backpressure, "symbol ring full: slowest consumer lags by " +
                                          std::to_string(slots_.size()) + " slots");
      }
      not_full_.wait(lock, [&] { return closed_ || !full(); });
      require(!closed_, ErrorCode::lifecycle, "symbol ring closed while the producer waited");
    }
    position = write_;
    writing_ = true;
  }
  // Every consumer is past position - capacity, so nobody reads this slot.
  slot.seal();
  slots_[position & mask_] = std::move(slot);
  {
    std::lock_guard lock(mutex_);
    ++write_;
    writing_ = false;
  }
  not_empty_.notify_all();
}

std::optional<SymbolSlot> SymbolRing::read(ConsumerId consumer) {
  std::uint64_t position = 0;
  {
    std::unique_lock lock(mutex_);
    require(consumer < read_.size(), ErrorCode::contract,
            "consumer " + std::to_string(consumer) + " is not registered");
    not_empty_.wait(lock, [&] { return read_[consumer] < write_ || closed_; });
    if (read_[consumer] >= write_) return std::nullopt;
    position = read_[consumer];
  }
  // The producer cannot reuse this slot until our cursor moves past it.
  SymbolSlot copy = slots_[position & mask_];
  {
    std::lock_guard lock(mutex_);
    ++read_[consumer];
  }
  not_full_.notify_one();
  return copy;
}

void SymbolRing::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  not_empty_.notify_all();
  not_full_.notify_all();
}

bool SymbolRing::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

std::uint64_t SymbolRing::write_cursor() const {
  std::lock_guard lock(mutex_);
  return write_;
}

}  // namespace ofdmrx
