// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include "ofdmrx/numerics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace ofdmrx {

namespace {

void check_fft_input(std::span<const cplx> x) {
  require(x.size() >= 2 && is_power_of_two(x.size()), ErrorCode::config,
          "fft length must be a power of two >= 2, got " + std::to_string(x.size()));
  require(all_finite(x), ErrorCode::numeric_input, "fft input contains NaN or Inf");
}

}  // namespace

bool all_finite(std::span<const cplx> x) noexcept {
  return std::all_of(x.begin(), x.end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

FftPlan::FftPlan(std::size_t length) : length_(length) {
  require(length >= 2 && is_power_of_two(length), ErrorCode::config,
          "fft length must be a power of two >= 2, got " + std::to_string(length));
  const unsigned bits = static_cast<unsigned>(std::countr_zero(length));
  bitrev_.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    std::uint32_t r = 0;
    for (unsigned b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    bitrev_[i] = r;
  }
  twiddles_.resize(length / 2);
  for (std::size_t k = 0; k < length / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(length);
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void FftPlan::transform(std::span<cplx> x, bool inverse) const noexcept {
  const std::size_t n = length_;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t half = 1; half < n; half <<= 1) {
    const std::size_t stride = n / (2 * half);
    for (std::size_t start = 0; start < n; start += 2 * half) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx w = twiddles_[k * stride];
        if (inverse) w = std::conj(w);
        const cplx a = x[start + k];
        const cplx b = x[start + k + half] * w;
        x[start + k] = a + b;
        x[start + k + half] = a - b;
      }
    }
  }
}

void FftPlan::forward(std::span<cplx> x) const noexcept { transform(x, false); }

void FftPlan::inverse(std::span<cplx> x) const noexcept {
  transform(x, true);
  const double scale = 1.0 / static_cast<double>(length_);
  for (auto& v : x) v *= scale;
}

std::shared_ptr<const FftPlan> FftPlan::cached(std::size_t length) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const FftPlan>> plans;
  std::lock_guard lock(mutex);
  auto& slot = plans[length];
  if (!slot) slot = std::make_shared<const FftPlan>(length);
  return slot;
}

ComplexVector fft(std::span<const cplx> x) {
  check_fft_input(x);
  ComplexVector out(x.begin(), x.end());
  FftPlan::cached(x.size())->forward(out);
  return out;
}

ComplexVector ifft(std::span<const cplx> x) {
  check_fft_input(x);
  ComplexVector out(x.begin(), x.end());
  FftPlan::cached(x.size())->inverse(out);
  return out;
}

ComplexVector fftshift(std::span<const cplx> x) {
  ComplexVector out(x.begin(), x.end());
  fftshift_inplace(out);
  return out;
}

void fftshift_inplace(std::span<cplx> x) {
  require(x.size() % 2 == 0, ErrorCode::config,
          "fftshift requires an even length, got " + std::to_string(x.size()));
  std::rotate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(x.size() / 2), x.end());
}

namespace {

ComplexVector direct_dft(std::span<const cplx> x, double sign) {
  const std::size_t n = x.size();
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      // Reduce k*t mod n first so the angle stays small and exact.
      const std::size_t idx = (k * t) % n;
      const double angle =
          sign * 2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(n);
      acc += x[t] * cplx{std::cos(angle), std::sin(angle)};
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

ComplexVector naive_dft(std::span<const cplx> x) { return direct_dft(x, -1.0); }

ComplexVector naive_idft(std::span<const cplx> x) {
  ComplexVector out = direct_dft(x, +1.0);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= scale;
  return out;
}

ReductionPlan::ReductionPlan(std::size_t n_inputs) : n_inputs_(n_inputs) {
  require(n_inputs >= 1, ErrorCode::contract, "reduction plan needs at least one input");
  std::size_t width = n_inputs;
  while (width > 1) {
    Level level;
    level.width = width;
    for (std::size_t j = 0; 2 * j + 1 < width; ++j) level.pairs.emplace_back(2 * j, 2 * j + 1);
    if (width % 2 == 1) level.carry = width - 1;
    levels_.push_back(std::move(level));
    width = (width + 1) / 2;
  }
}

cplx parallel_reduce_sum(std::span<const cplx> values, const ReductionPlan& plan,
                         std::span<cplx> scratch) {
  require(values.size() == plan.n_inputs(), ErrorCode::contract,
          "reduction plan expects " + std::to_string(plan.n_inputs()) + " inputs, got " +
              std::to_string(values.size()));
  require(scratch.size() >= values.size(), ErrorCode::contract, "reduction scratch too small");
  std::copy(values.begin(), values.end(), scratch.begin());
  // Level outputs are written in place: entry j of the next level only reads
  // entries 2j and 2j+1, which are at or after j.
  for (const auto& level : plan.levels()) {
    std::size_t out = 0;
    for (const auto& [a, b] : level.pairs) scratch[out++] = scratch[a] + scratch[b];
    if (level.carry) scratch[out] = scratch[*level.carry];
  }
  return scratch[0];
}

cplx parallel_reduce_sum(std::span<const cplx> values, const ReductionPlan& plan) {
  ComplexVector scratch(values.size());
  return parallel_reduce_sum(values, plan, scratch);
}

}  // namespace ofdmrx
