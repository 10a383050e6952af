// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMRX_WAVEFORM_HPP
#define OFDMRX_WAVEFORM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ofdmrx/types.hpp"

namespace ofdmrx {

inline constexpr std::uint32_t kDefaultPnTaps = 0xB8;  // x^8 + x^6 + x^5 + x^4 + 1
inline constexpr std::uint32_t kDefaultPnSeed = 1;
inline constexpr std::uint64_t kDefaultPilotSeed = 0x5EED0F0Dull;

struct OfdmConfig {
  std::size_t fft_len = 64;
  std::size_t cp_len = 16;
  std::size_t n_antennas = 1;
  unsigned qam_order = 4;
  std::size_t pn_len = 255;
  double sample_rate_hz = 10e6;  // metadata only

  // Canonical numerology: CP 16 for 64 subcarriers, 72 for 1024, otherwise
  // a quarter of the FFT length.
  static OfdmConfig canonical(std::size_t fft_len, std::size_t n_antennas,
                              unsigned qam_order = 4);

  std::size_t symbol_len() const noexcept { return fft_len + cp_len; }
  unsigned bits_per_qam() const;

  // Throws ErrorCode::config naming the first violated invariant.
  void validate() const;

  friend bool operator==(const OfdmConfig&, const OfdmConfig&) = default;
};

struct PnSequence {
  std::vector<double> chips;  // +1 / -1
  std::uint32_t taps = kDefaultPnTaps;
  std::uint32_t seed = kDefaultPnSeed;

  std::size_t length() const noexcept { return chips.size(); }
};

// Galois LFSR m-sequence. Bit k-1 of `taps` is the coefficient of x^k; the
// register degree r is implied by length == 2^r - 1. Output bit 1 maps to
// chip +1, so +1 outnumbers -1 by one. Throws ErrorCode::config for a zero
// seed or bad length, and for taps whose period is not `length`.
PnSequence generate_pn(std::uint32_t taps, std::uint32_t seed, std::size_t length);
PnSequence default_pn(std::size_t length = 255);

// Gray-coded square QAM normalized to unit average symbol energy. Bits are
// consumed in groups of log2(order); even positions drive I, odd drive Q,
// the first bit of each axis selects the sign (0 -> positive).
ComplexVector qam_map(std::span<const std::uint8_t> bits, unsigned order);
// Minimum-distance hard decision onto the same constellation.
Bits qam_demap(std::span<const cplx> symbols, unsigned order);
// Every constellation point, indexed by the integer formed from its bits
// (first bit most significant).
ComplexVector qam_constellation(unsigned order);

struct PilotDefinition {
  ComplexVector values;  // one per subcarrier in fftshift order, |P[k]| == 1

  // BPSK +-1 from a seeded stream.
  static PilotDefinition bpsk(std::size_t fft_len, std::uint64_t seed = kDefaultPilotSeed);
  void validate(std::size_t fft_len) const;
};

// Everything the receiver needs to know about how a frame was assembled.
struct FrameLayout {
  std::size_t n_data_symbols = 0;
  std::size_t payload_qam_samples = 0;
  std::size_t pad_len = 0;  // zero QAM samples appended to the last symbol
  std::uint32_t pn_taps = kDefaultPnTaps;
  std::uint32_t pn_seed = kDefaultPnSeed;
  std::uint64_t pilot_seed = kDefaultPilotSeed;

  friend bool operator==(const FrameLayout&, const FrameLayout&) = default;
};

struct OfdmFrame {
  OfdmConfig cfg;
  FrameLayout layout;
  ComplexVector preamble;                   // pn_len samples
  ComplexVector pilot_symbol;               // M + cp samples
  std::vector<ComplexVector> data_symbols;  // each M + cp samples
  Bits tx_bits;
  ComplexVector tx_qam;  // unpadded

  std::size_t total_samples() const noexcept;
  ComplexVector samples() const;
};

// Sub-carrier values (fftshift order) to one time-domain symbol with CP.
// The IFFT output is scaled by sqrt(M) so symbols carry unit mean power,
// the same as the PN chips.
ComplexVector ofdm_modulate(std::span<const cplx> subcarriers, std::size_t cp_len);

std::size_t data_symbol_count(std::size_t qam_samples, std::size_t fft_len);
std::size_t frame_sample_count(const OfdmConfig& cfg, std::size_t qam_samples);

OfdmFrame build_frame(const OfdmConfig& cfg, const PilotDefinition& pilot,
                      std::span<const std::uint8_t> payload_bits, const PnSequence& pn,
                      std::uint64_t pilot_seed = kDefaultPilotSeed);

// Uniform random payload of `qam_samples` * bits_per_qam bits.
Bits random_payload(std::size_t qam_samples, unsigned qam_order, std::uint64_t seed);

// Convenience: default PN, seeded pilot, random payload.
OfdmFrame generate_frame(const OfdmConfig& cfg, std::size_t qam_samples, std::uint64_t seed);

}  // namespace ofdmrx

#endif  // OFDMRX_WAVEFORM_HPP
