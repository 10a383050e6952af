// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include "ofdmrx/sync.hpp"

#include <cmath>
#include <string>

namespace ofdmrx {

namespace {

// Calls visit(d, metric) for every lag in order.
template <typename Visit>
void scan_correlation(std::span<const cplx> stream, const PnSequence& pn, Visit&& visit) {
  const std::size_t len = pn.length();
  require(len > 0, ErrorCode::config, "pn sequence is empty");
  require(stream.size() >= len, ErrorCode::input,
          "stream of " + std::to_string(stream.size()) + " samples is shorter than the " +
              std::to_string(len) + "-chip pn sequence");

  std::vector<double> re(stream.size());
  std::vector<double> im(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    re[i] = stream[i].real();
    im[i] = stream[i].imag();
  }
  double pn_energy = 0.0;
  for (double c : pn.chips) pn_energy += c * c;
  const double pn_norm = std::sqrt(pn_energy);
  const double* chips = pn.chips.data();

  for (std::size_t d = 0; d + len <= stream.size(); ++d) {
    const double* xr = re.data() + d;
    const double* xi = im.data() + d;
    double cr = 0.0;
    double ci = 0.0;
    double energy = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      cr += chips[i] * xr[i];
      ci += chips[i] * xi[i];
      energy += xr[i] * xr[i] + xi[i] * xi[i];
    }
    // |sum pn conj(x)| == |sum pn x| for real chips.
    const double denom = pn_norm * std::sqrt(energy);
    visit(d, denom > 0.0 ? std::hypot(cr, ci) / denom : 0.0);
  }
}

}  // namespace

std::vector<double> correlation_metric(std::span<const cplx> stream, const PnSequence& pn) {
  std::vector<double> metric;
  metric.reserve(stream.size() >= pn.length() ? stream.size() - pn.length() + 1 : 0);
  scan_correlation(stream, pn, [&](std::size_t, double m) { metric.push_back(m); });
  return metric;
}

CorrelationPeak correlation_peak(std::span<const cplx> stream, const PnSequence& pn) {
  CorrelationPeak peak;
  bool first = true;
  scan_correlation(stream, pn, [&](std::size_t d, double m) {
    if (first || m > peak.metric) {
      peak = {d, m};
      first = false;
    }
  });
  return peak;
}

DetectionResult detect_packet(const RxCapture& capture, const PnSequence& pn, double threshold) {
  require(!capture.streams.empty(), ErrorCode::input, "capture has no streams");
  DetectionResult result;
  result.per_antenna_peaks.reserve(capture.streams.size());
  for (const auto& stream : capture.streams) {
    result.per_antenna_peaks.push_back(correlation_peak(stream, pn));
  }
  const CorrelationPeak& ref = result.per_antenna_peaks.front();
  result.peak_metric = ref.metric;
  result.detected = ref.metric >= threshold;
  result.frame_start = ref.index;
  result.symbol0_offset = ref.index + pn.length();
  return result;
}

}  // namespace ofdmrx
