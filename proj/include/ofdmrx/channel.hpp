// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMRX_CHANNEL_HPP
#define OFDMRX_CHANNEL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ofdmrx/types.hpp"
#include "ofdmrx/waveform.hpp"

namespace ofdmrx {

enum class ChannelMode { identity, fixed_gains, flat_rayleigh, multipath };

std::string_view channel_mode_name(ChannelMode mode) noexcept;
ChannelMode parse_channel_mode(std::string_view name);

struct ChannelModel {
  ChannelMode mode = ChannelMode::identity;
  std::vector<cplx> gains;           // fixed_gains: one per antenna
  std::vector<ComplexVector> taps;   // multipath: one FIR per antenna
  std::optional<double> snr_db;      // nullopt means noiseless
  std::size_t timing_offset = 0;     // noise-only samples before the frame
  std::uint64_t rng_seed = 0;

  static ChannelModel identity();
  static ChannelModel fixed(std::vector<cplx> gains);
  static ChannelModel rayleigh(std::optional<double> snr_db, std::uint64_t seed);
  static ChannelModel with_taps(std::vector<ComplexVector> taps);
  // n_taps complex Gaussian taps per antenna with an exponential power-delay
  // profile, normalized to unit total power.
  static ChannelModel random_multipath(std::size_t n_antennas, std::size_t n_taps,
                                       std::uint64_t seed);

  void validate(const OfdmConfig& cfg) const;
};

struct ChannelTruth {
  std::size_t frame_start = 0;
  std::size_t symbol0_offset = 0;
  ChannelMode mode = ChannelMode::identity;
  std::vector<ComplexVector> taps;   // effective impulse response per antenna
  std::vector<double> noise_variance;
  std::optional<double> snr_db;
  std::uint64_t rng_seed = 0;
};

struct RxCapture {
  OfdmConfig cfg;
  FrameLayout layout;
  std::vector<ComplexVector> streams;  // one per antenna, equal lengths
  std::optional<ChannelTruth> truth;

  std::size_t length() const noexcept { return streams.empty() ? 0 : streams.front().size(); }
  void validate() const;
};

// Per antenna: noise prefix ++ (h_n * tx) + AWGN. The FIR output is truncated
// to the frame length. Noise variance is the antenna's received signal power
// (sum |h_n|^2 times unit transmit power) divided by the linear SNR, so
// snr_db is the per-antenna received SNR. Antenna n draws from
// mix_seed(rng_seed, n), so output does not depend on evaluation order.
RxCapture apply_channel(const OfdmFrame& frame, const ChannelModel& model,
                        const OfdmConfig& cfg);
RxCapture apply_channel(std::span<const cplx> tx, const FrameLayout& layout,
                        const ChannelModel& model, const OfdmConfig& cfg);

// 10 log10(sum|clean|^2 / sum|noisy - clean|^2). +infinity when identical.
// Throws ErrorCode::measurement for zero clean power and ErrorCode::contract
// for unequal lengths.
double measure_snr(std::span<const cplx> clean, std::span<const cplx> noisy);

double mean_power(std::span<const cplx> x) noexcept;

}  // namespace ofdmrx

#endif  // OFDMRX_CHANNEL_HPP
