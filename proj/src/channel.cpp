// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include "ofdmrx/channel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ofdmrx/random.hpp"

namespace ofdmrx {

std::string_view channel_mode_name(ChannelMode mode) noexcept {
  switch (mode) {
    case ChannelMode::identity: return "identity";
    case ChannelMode::fixed_gains: return "fixed_gains";
    case ChannelMode::flat_rayleigh: return "flat_rayleigh";
    case ChannelMode::multipath: return "multipath";
  }
  return "identity";
}

ChannelMode parse_channel_mode(std::string_view name) {
  if (name == "identity") return ChannelMode::identity;
  if (name == "fixed_gains") return ChannelMode::fixed_gains;
  if (name == "flat_rayleigh") return ChannelMode::flat_rayleigh;
  if (name == "multipath") return ChannelMode::multipath;
  fail(ErrorCode::config, "unknown channel mode '" + std::string(name) + "'");
}

ChannelModel ChannelModel::identity() { return {}; }

ChannelModel ChannelModel::fixed(std::vector<cplx> gains) {
  ChannelModel m;
  m.mode = ChannelMode::fixed_gains;
  m.gains = std::move(gains);
  return m;
}

ChannelModel ChannelModel::rayleigh(std::optional<double> snr_db, std::uint64_t seed) {
  ChannelModel m;
  m.mode = ChannelMode::flat_rayleigh;
  m.snr_db = snr_db;
  m.rng_seed = seed;
  return m;
}

ChannelModel ChannelModel::with_taps(std::vector<ComplexVector> taps) {
  ChannelModel m;
  m.mode = ChannelMode::multipath;
  m.taps = std::move(taps);
  return m;
}

ChannelModel ChannelModel::random_multipath(std::size_t n_antennas, std::size_t n_taps,
                                            std::uint64_t seed) {
  require(n_taps >= 1, ErrorCode::config, "multipath needs at least one tap");
  std::vector<ComplexVector> taps(n_antennas);
  for (std::size_t n = 0; n < n_antennas; ++n) {
    Rng rng(mix_seed(seed, 0x7A95000 + n));
    double power = 0.0;
    taps[n].resize(n_taps);
    for (std::size_t l = 0; l < n_taps; ++l) {
      taps[n][l] = rng.complex_normal(std::exp(-static_cast<double>(l)));
      power += std::norm(taps[n][l]);
    }
    const double norm = 1.0 / std::sqrt(power);
    for (auto& t : taps[n]) t *= norm;
  }
  ChannelModel m = with_taps(std::move(taps));
  m.rng_seed = seed;
  return m;
}

void ChannelModel::validate(const OfdmConfig& cfg) const {
  if (snr_db) {
    require(std::isfinite(*snr_db), ErrorCode::config, "snr_db must be finite");
  }
  switch (mode) {
    case ChannelMode::identity:
    case ChannelMode::flat_rayleigh:
      break;
    case ChannelMode::fixed_gains:
      require(gains.size() == cfg.n_antennas, ErrorCode::config,
              "fixed_gains needs " + std::to_string(cfg.n_antennas) + " gains, got " +
                  std::to_string(gains.size()));
      for (const auto& g : gains) {
        require(std::isfinite(g.real()) && std::isfinite(g.imag()), ErrorCode::config,
                "fixed gains must be finite");
      }
      break;
    case ChannelMode::multipath:
      require(taps.size() == cfg.n_antennas, ErrorCode::config,
              "multipath needs " + std::to_string(cfg.n_antennas) + " tap lists, got " +
                  std::to_string(taps.size()));
      for (const auto& t : taps) {
        require(!t.empty(), ErrorCode::config, "multipath tap list is empty");
        require(t.size() < cfg.cp_len, ErrorCode::config,
                "multipath tap count " + std::to_string(t.size()) +
                    " must be smaller than cp_len " + std::to_string(cfg.cp_len));
      }
      break;
  }
}

void RxCapture::validate() const {
  cfg.validate();
  require(streams.size() == cfg.n_antennas, ErrorCode::input,
          "capture has " + std::to_string(streams.size()) + " streams for " +
              std::to_string(cfg.n_antennas) + " antennas");
  for (const auto& s : streams) {
    require(s.size() == streams.front().size(), ErrorCode::input,
            "capture streams have unequal lengths");
  }
}

namespace {

ComplexVector antenna_response(const ChannelModel& model, std::size_t antenna) {
  switch (model.mode) {
    case ChannelMode::identity: return {cplx{1.0, 0.0}};
    case ChannelMode::fixed_gains: return {model.gains[antenna]};
    case ChannelMode::flat_rayleigh: {
      Rng rng(mix_seed(model.rng_seed, 0x6A1B000 + antenna));
      return {rng.complex_normal(1.0)};
    }
    case ChannelMode::multipath: return model.taps[antenna];
  }
  return {cplx{1.0, 0.0}};
}

}  // namespace

RxCapture apply_channel(const OfdmFrame& frame, const ChannelModel& model,
                        const OfdmConfig& cfg) {
  const ComplexVector tx = frame.samples();
  return apply_channel(tx, frame.layout, model, cfg);
}

RxCapture apply_channel(std::span<const cplx> tx, const FrameLayout& layout,
                        const ChannelModel& model, const OfdmConfig& cfg) {
  cfg.validate();
  model.validate(cfg);

  RxCapture cap;
  cap.cfg = cfg;
  cap.layout = layout;
  cap.streams.resize(cfg.n_antennas);

  ChannelTruth truth;
  truth.frame_start = model.timing_offset;
  truth.symbol0_offset = model.timing_offset + cfg.pn_len;
  truth.mode = model.mode;
  truth.snr_db = model.snr_db;
  truth.rng_seed = model.rng_seed;

  const double snr_lin = model.snr_db ? std::pow(10.0, *model.snr_db / 10.0) : 0.0;
  const std::size_t offset = model.timing_offset;

  for (std::size_t n = 0; n < cfg.n_antennas; ++n) {
    const ComplexVector h = antenna_response(model, n);
    double rx_power = 0.0;
    for (const auto& t : h) rx_power += std::norm(t);
    const double noise_var = model.snr_db ? rx_power / snr_lin : 0.0;

    ComplexVector& out = cap.streams[n];
    out.assign(offset + tx.size(), cplx{0.0, 0.0});
    for (std::size_t t = 0; t < tx.size(); ++t) {
      cplx acc{0.0, 0.0};
      const std::size_t taps = std::min(h.size(), t + 1);
      for (std::size_t l = 0; l < taps; ++l) acc += h[l] * tx[t - l];
      out[offset + t] = acc;
    }
    if (noise_var > 0.0) {
      Rng rng(mix_seed(model.rng_seed, 0x40153000 + n));
      for (auto& v : out) v += rng.complex_normal(noise_var);
    }
    truth.taps.push_back(h);
    truth.noise_variance.push_back(noise_var);
  }
  cap.truth = std::move(truth);
  return cap;
}

double mean_power(std::span<const cplx> x) noexcept {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& v : x) acc += std::norm(v);
  return acc / static_cast<double>(x.size());
}

double measure_snr(std::span<const cplx> clean, std::span<const cplx> noisy) {
  require(clean.size() == noisy.size(), ErrorCode::contract,
          "measure_snr needs equal lengths, got " + std::to_string(clean.size()) + " and " +
              std::to_string(noisy.size()));
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    signal += std::norm(clean[i]);
    noise += std::norm(noisy[i] - clean[i]);
  }
  require(signal > 0.0, ErrorCode::measurement, "reference signal has zero power");
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / noise);
}

}  // namespace ofdmrx
