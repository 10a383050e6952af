// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMRX_SYNC_HPP
#define OFDMRX_SYNC_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ofdmrx/channel.hpp"
#include "ofdmrx/waveform.hpp"

namespace ofdmrx {

inline constexpr double kDefaultDetectionThreshold = 0.6;

struct CorrelationPeak {
  std::size_t index = 0;
  double metric = 0.0;
};

struct DetectionResult {
  bool detected = false;
  std::size_t frame_start = 0;
  std::size_t symbol0_offset = 0;
  double peak_metric = 0.0;
  std::vector<CorrelationPeak> per_antenna_peaks;
};

// Normalized sliding correlation against the PN chips,
//   |sum_i pn[i] conj(x[d+i])| / (||pn|| ||x[d..d+L)||),
// evaluated at every lag d. Windows with zero energy score 0.
std::vector<double> correlation_metric(std::span<const cplx> stream, const PnSequence& pn);

// First lag of the maximum metric.
CorrelationPeak correlation_peak(std::span<const cplx> stream, const PnSequence& pn);

// Frame timing from antenna 0; the other antennas are correlated for
// diagnostics only. Throws ErrorCode::input for streams shorter than the PN.
DetectionResult detect_packet(const RxCapture& capture, const PnSequence& pn,
                              double threshold = kDefaultDetectionThreshold);

}  // namespace ofdmrx

#endif  // OFDMRX_SYNC_HPP
