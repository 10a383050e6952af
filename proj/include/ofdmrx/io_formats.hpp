// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMRX_IO_FORMATS_HPP
#define OFDMRX_IO_FORMATS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ofdmrx/channel.hpp"
#include "ofdmrx/pipeline.hpp"
#include "ofdmrx/types.hpp"
#include "ofdmrx/waveform.hpp"

namespace ofdmrx {

inline constexpr int kFormatVersion = 1;

// On-disk names inside a frame or capture directory.
inline constexpr std::string_view kTxSamplesFile = "tx.cf32";
inline constexpr std::string_view kTxMetaFile = "tx.meta";
inline constexpr std::string_view kTruthBitsFile = "tx_bits.u8";
inline constexpr std::string_view kRxMetaFile = "rx.meta";
inline constexpr std::string_view kDemodFile = "demod.bin";
std::string rx_antenna_file(std::size_t antenna);  // rx_ant<k>.cf32

// Interleaved little-endian float32 I/Q.
void write_cf32(const std::filesystem::path& path, std::span<const cplx> samples);
ComplexVector read_cf32(const std::filesystem::path& path);

// One byte per bit.
void write_bits(const std::filesystem::path& path, std::span<const std::uint8_t> bits);
Bits read_bits(const std::filesystem::path& path);

// Ordered key=value sidecar, one pair per line, '#' starts a comment.
class Metadata {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, double value);
  void set(std::string key, std::uint64_t value);

  std::optional<std::string> get(std::string_view key) const;
  std::string require(std::string_view key) const;
  std::uint64_t require_uint(std::string_view key) const;
  double require_double(std::string_view key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }

  std::string serialize() const;
  static Metadata parse(std::string_view text);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

void write_metadata(const std::filesystem::path& path, const Metadata& meta);
Metadata read_metadata(const std::filesystem::path& path);

// Shortest text form that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

// Transmitted frame as stored on disk.
struct TxRecord {
  OfdmConfig cfg;
  FrameLayout layout;
  ComplexVector samples;
  Bits bits;
};

// Writes tx.cf32, tx.meta and tx_bits.u8.
void save_frame(const TxRecord& record, const std::filesystem::path& dir);
void save_frame(const OfdmFrame& frame, const std::filesystem::path& dir);
TxRecord load_frame(const std::filesystem::path& dir);

// Writes rx_ant<k>.cf32 for every antenna plus rx.meta.
void save_capture(const RxCapture& capture, const std::filesystem::path& dir);
// Throws ErrorCode::input listing the expected file names when any antenna
// file is missing, and when a file's sample count disagrees with rx.meta.
RxCapture load_capture(const std::filesystem::path& dir);

// demod.bin layout, all little-endian:
//   char[8]  magic "OFDMRXD1"
//   u32      format_version
//   u32      fft_len
//   u32      qam_order
//   u32      n_data_symbols
//   u64      payload_qam_samples
//   u64      n_bits                     (payload bits, pad excluded)
//   f64[2 * n_data_symbols * fft_len]  s_hat, interleaved re/im, symbol-major
//   u8[n_bits]                         demapped payload bits, 0 or 1
struct DemodRecord {
  std::uint32_t fft_len = 0;
  std::uint32_t qam_order = 0;
  std::uint32_t n_data_symbols = 0;
  std::uint64_t payload_qam_samples = 0;
  ComplexVector s_hat;
  Bits bits;
};

void write_demod(const std::filesystem::path& path, const ReceiveRun& run,
                 const OfdmConfig& cfg, const FrameLayout& layout);
DemodRecord read_demod(const std::filesystem::path& path);

}  // namespace ofdmrx

#endif  // OFDMRX_IO_FORMATS_HPP
