// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include "ofdmrx/waveform.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "ofdmrx/numerics.hpp"
#include "ofdmrx/random.hpp"

namespace ofdmrx {

OfdmConfig OfdmConfig::canonical(std::size_t fft_len, std::size_t n_antennas, unsigned qam_order) {
  OfdmConfig cfg;
  cfg.fft_len = fft_len;
  cfg.cp_len = fft_len == 64 ? 16 : fft_len == 1024 ? 72 : fft_len / 4;
  cfg.n_antennas = n_antennas;
  cfg.qam_order = qam_order;
  return cfg;
}

unsigned OfdmConfig::bits_per_qam() const {
  switch (qam_order) {
    case 4: return 2;
    case 16: return 4;
    case 64: return 6;
    default:
      fail(ErrorCode::config, "qam_order must be 4, 16 or 64, got " + std::to_string(qam_order));
  }
}

void OfdmConfig::validate() const {
  require(fft_len >= 2 && is_power_of_two(fft_len), ErrorCode::config,
          "fft_len must be a power of two >= 2, got " + std::to_string(fft_len));
  require(cp_len < fft_len, ErrorCode::config,
          "cp_len must be smaller than fft_len, got " + std::to_string(cp_len));
  require(n_antennas >= 1, ErrorCode::config, "n_antennas must be at least 1");
  (void)bits_per_qam();
  require(pn_len >= 7 && pn_len < (std::size_t{1} << 31) && is_power_of_two(pn_len + 1),
          ErrorCode::config, "pn_len must be 2^r - 1 with r >= 3, got " + std::to_string(pn_len));
  require(std::isfinite(sample_rate_hz) && sample_rate_hz > 0.0, ErrorCode::config,
          "sample_rate_hz must be positive");
}

namespace {

// Primitive polynomials by degree, bit k-1 <-> x^k.
constexpr std::array<std::uint32_t, 17> kPrimitiveTaps = {
    0, 0, 0,
    0x6,     // 3: x^3 + x^2 + 1
    0xC,     // 4: x^4 + x^3 + 1
    0x14,    // 5: x^5 + x^3 + 1
    0x30,    // 6: x^6 + x^5 + 1
    0x60,    // 7: x^7 + x^6 + 1
    0xB8,    // 8: x^8 + x^6 + x^5 + x^4 + 1
    0x110,   // 9: x^9 + x^5 + 1
    0x240,   // 10: x^10 + x^7 + 1
    0x500,   // 11: x^11 + x^9 + 1
    0xE08,   // 12: x^12 + x^11 + x^10 + x^4 + 1
    0x1C80,  // 13: x^13 + x^12 + x^11 + x^8 + 1
    0x3802,  // 14: x^14 + x^13 + x^12 + x^2 + 1
    0x6000,  // 15: x^15 + x^14 + 1
    0xB400,  // 16: x^16 + x^14 + x^13 + x^11 + 1
};

unsigned pn_degree(std::size_t length) {
  require(length >= 7 && length < (std::size_t{1} << 31) && is_power_of_two(length + 1),
          ErrorCode::config, "pn length must be 2^r - 1 with r >= 3, got " + std::to_string(length));
  return static_cast<unsigned>(std::countr_zero(length + 1));
}

}  // namespace

PnSequence generate_pn(std::uint32_t taps, std::uint32_t seed, std::size_t length) {
  const unsigned degree = pn_degree(length);
  const std::uint32_t reg_mask =
      degree >= 32 ? 0xFFFFFFFFu : static_cast<std::uint32_t>((std::uint64_t{1} << degree) - 1);
  require(seed != 0, ErrorCode::config, "pn seed must be nonzero");
  require((seed & ~reg_mask) == 0, ErrorCode::config,
          "pn seed does not fit a degree-" + std::to_string(degree) + " register");
  require((taps & ~reg_mask) == 0 && (taps >> (degree - 1)) == 1u, ErrorCode::config,
          "pn taps must describe a degree-" + std::to_string(degree) + " polynomial");

  PnSequence pn;
  pn.taps = taps;
  pn.seed = seed;
  pn.chips.resize(length);
  std::uint32_t state = seed;
  for (std::size_t i = 0; i < length; ++i) {
    const std::uint32_t out = state & 1u;
    pn.chips[i] = out ? 1.0 : -1.0;
    state >>= 1;
    if (out) state ^= taps;
    if (state == seed && i + 1 < length) {
      fail(ErrorCode::config, "pn taps are not primitive: period " + std::to_string(i + 1) +
                                  " instead of " + std::to_string(length));
    }
  }
  if (state != seed) {
    fail(ErrorCode::config, "pn taps are not primitive: register did not return to the seed after " +
                                std::to_string(length) + " steps");
  }
  return pn;
}

PnSequence default_pn(std::size_t length) {
  const unsigned degree = pn_degree(length);
  require(degree < kPrimitiveTaps.size(), ErrorCode::config,
          "no default pn polynomial for length " + std::to_string(length));
  return generate_pn(kPrimitiveTaps[degree], kDefaultPnSeed, length);
}

namespace {

struct QamAxis {
  unsigned bits;              // per axis
  double scale;               // unit average energy
  std::vector<int> level_of;  // axis bit pattern (first bit MSB) -> odd level
  std::vector<unsigned> pattern_of;  // (level + max) / 2 -> bit pattern
};

const QamAxis& axis_for(unsigned order) {
  static const std::array<QamAxis, 3> axes = [] {
    std::array<QamAxis, 3> out{};
    for (unsigned m = 1; m <= 3; ++m) {
      QamAxis& ax = out[m - 1];
      ax.bits = m;
      const unsigned n_levels = 1u << m;
      ax.scale = 1.0 / std::sqrt(2.0 * (static_cast<double>(n_levels * n_levels) - 1.0) / 3.0);
      ax.level_of.resize(n_levels);
      ax.pattern_of.resize(n_levels);
      for (unsigned pattern = 0; pattern < n_levels; ++pattern) {
        auto bit = [&](unsigned j) { return (pattern >> (m - 1 - j)) & 1u; };
        int v = 1;
        for (unsigned j = m - 1; j >= 1; --j) {
          v = (1 << (m - j)) - (bit(j) ? -1 : 1) * v;
        }
        const int level = bit(0) ? -v : v;
        ax.level_of[pattern] = level;
        ax.pattern_of[static_cast<unsigned>((level + static_cast<int>(n_levels) - 1) / 2)] = pattern;
      }
    }
    return out;
  }();
  switch (order) {
    case 4: return axes[0];
    case 16: return axes[1];
    case 64: return axes[2];
    default:
      fail(ErrorCode::config, "qam_order must be 4, 16 or 64, got " + std::to_string(order));
  }
}

}  // namespace

ComplexVector qam_map(std::span<const std::uint8_t> bits, unsigned order) {
  const QamAxis& ax = axis_for(order);
  const std::size_t per_symbol = 2 * ax.bits;
  require(bits.size() % per_symbol == 0, ErrorCode::framing,
          std::to_string(bits.size()) + " bits do not divide into " + std::to_string(per_symbol) +
              "-bit QAM words");
  ComplexVector out(bits.size() / per_symbol);
  for (std::size_t s = 0; s < out.size(); ++s) {
    const std::uint8_t* b = bits.data() + s * per_symbol;
    unsigned pi = 0;
    unsigned pq = 0;
    for (unsigned j = 0; j < ax.bits; ++j) {
      pi = (pi << 1) | (b[2 * j] & 1u);
      pq = (pq << 1) | (b[2 * j + 1] & 1u);
    }
    out[s] = {ax.scale * ax.level_of[pi], ax.scale * ax.level_of[pq]};
  }
  return out;
}

Bits qam_demap(std::span<const cplx> symbols, unsigned order) {
  const QamAxis& ax = axis_for(order);
  const int max_level = (1 << ax.bits) - 1;
  auto decide = [&](double x) {
    const double u = x / ax.scale;
    int level = std::isfinite(u) ? 2 * static_cast<int>(std::floor(std::clamp(u, -1e6, 1e6) / 2.0)) + 1 : 1;
    level = std::clamp(level, -max_level, max_level);
    return ax.pattern_of[static_cast<unsigned>((level + max_level) / 2)];
  };
  Bits out(symbols.size() * 2 * ax.bits);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const unsigned pi = decide(symbols[s].real());
    const unsigned pq = decide(symbols[s].imag());
    std::uint8_t* b = out.data() + s * 2 * ax.bits;
    for (unsigned j = 0; j < ax.bits; ++j) {
      b[2 * j] = static_cast<std::uint8_t>((pi >> (ax.bits - 1 - j)) & 1u);
      b[2 * j + 1] = static_cast<std::uint8_t>((pq >> (ax.bits - 1 - j)) & 1u);
    }
  }
  return out;
}

ComplexVector qam_constellation(unsigned order) {
  const QamAxis& ax = axis_for(order);
  const unsigned per_symbol = 2 * ax.bits;
  ComplexVector points(order);
  Bits bits(per_symbol);
  for (unsigned idx = 0; idx < order; ++idx) {
    for (unsigned j = 0; j < per_symbol; ++j) {
      bits[j] = static_cast<std::uint8_t>((idx >> (per_symbol - 1 - j)) & 1u);
    }
    points[idx] = qam_map(bits, order).front();
  }
  return points;
}

PilotDefinition PilotDefinition::bpsk(std::size_t fft_len, std::uint64_t seed) {
  PilotDefinition p;
  p.values.resize(fft_len);
  Rng rng(seed);
  for (auto& v : p.values) v = rng.bit() ? cplx{-1.0, 0.0} : cplx{1.0, 0.0};
  return p;
}

void PilotDefinition::validate(std::size_t fft_len) const {
  require(values.size() == fft_len, ErrorCode::config,
          "pilot has " + std::to_string(values.size()) + " values for " + std::to_string(fft_len) +
              " subcarriers");
  for (std::size_t k = 0; k < values.size(); ++k) {
    require(std::abs(std::abs(values[k]) - 1.0) < 1e-12, ErrorCode::config,
            "pilot value at subcarrier " + std::to_string(k) + " is not unit modulus");
  }
}

std::size_t OfdmFrame::total_samples() const noexcept {
  std::size_t n = preamble.size() + pilot_symbol.size();
  for (const auto& s : data_symbols) n += s.size();
  return n;
}

ComplexVector OfdmFrame::samples() const {
  ComplexVector out;
  out.reserve(total_samples());
  out.insert(out.end(), preamble.begin(), preamble.end());
  out.insert(out.end(), pilot_symbol.begin(), pilot_symbol.end());
  for (const auto& s : data_symbols) out.insert(out.end(), s.begin(), s.end());
  return out;
}

ComplexVector ofdm_modulate(std::span<const cplx> subcarriers, std::size_t cp_len) {
  const std::size_t m = subcarriers.size();
  require(cp_len < m, ErrorCode::config, "cp_len must be smaller than the symbol length");
  ComplexVector natural = fftshift(subcarriers);
  ComplexVector time = ifft(natural);
  const double gain = std::sqrt(static_cast<double>(m));
  ComplexVector out(m + cp_len);
  for (std::size_t i = 0; i < m; ++i) out[cp_len + i] = gain * time[i];
  std::copy(out.end() - static_cast<std::ptrdiff_t>(cp_len), out.end(), out.begin());
  return out;
}

std::size_t data_symbol_count(std::size_t qam_samples, std::size_t fft_len) {
  return (qam_samples + fft_len - 1) / fft_len;
}

std::size_t frame_sample_count(const OfdmConfig& cfg, std::size_t qam_samples) {
  return cfg.pn_len + (1 + data_symbol_count(qam_samples, cfg.fft_len)) * cfg.symbol_len();
}

OfdmFrame build_frame(const OfdmConfig& cfg, const PilotDefinition& pilot,
                      std::span<const std::uint8_t> payload_bits, const PnSequence& pn,
                      std::uint64_t pilot_seed) {
  cfg.validate();
  pilot.validate(cfg.fft_len);
  require(!payload_bits.empty(), ErrorCode::config, "payload is empty");
  require(pn.length() == cfg.pn_len, ErrorCode::config,
          "pn sequence has " + std::to_string(pn.length()) + " chips, config expects " +
              std::to_string(cfg.pn_len));

  OfdmFrame frame;
  frame.cfg = cfg;
  frame.tx_bits.assign(payload_bits.begin(), payload_bits.end());
  frame.tx_qam = qam_map(payload_bits, cfg.qam_order);

  const std::size_t m = cfg.fft_len;
  const std::size_t n_sym = data_symbol_count(frame.tx_qam.size(), m);
  frame.layout.n_data_symbols = n_sym;
  frame.layout.payload_qam_samples = frame.tx_qam.size();
  frame.layout.pad_len = n_sym * m - frame.tx_qam.size();
  frame.layout.pn_taps = pn.taps;
  frame.layout.pn_seed = pn.seed;
  frame.layout.pilot_seed = pilot_seed;

  frame.preamble.reserve(pn.length());
  for (double chip : pn.chips) frame.preamble.emplace_back(chip, 0.0);
  frame.pilot_symbol = ofdm_modulate(pilot.values, cfg.cp_len);

  ComplexVector carriers(m);
  frame.data_symbols.reserve(n_sym);
  for (std::size_t s = 0; s < n_sym; ++s) {
    std::fill(carriers.begin(), carriers.end(), cplx{0.0, 0.0});
    const std::size_t begin = s * m;
    const std::size_t end = std::min(begin + m, frame.tx_qam.size());
    std::copy(frame.tx_qam.begin() + static_cast<std::ptrdiff_t>(begin),
              frame.tx_qam.begin() + static_cast<std::ptrdiff_t>(end), carriers.begin());
    frame.data_symbols.push_back(ofdm_modulate(carriers, cfg.cp_len));
  }
  return frame;
}

Bits random_payload(std::size_t qam_samples, unsigned qam_order, std::uint64_t seed) {
  OfdmConfig probe;
  probe.qam_order = qam_order;
  Bits bits(qam_samples * probe.bits_per_qam());
  Rng rng(seed);
  for (auto& b : bits) b = rng.bit();
  return bits;
}

OfdmFrame generate_frame(const OfdmConfig& cfg, std::size_t qam_samples, std::uint64_t seed) {
  cfg.validate();
  require(qam_samples > 0, ErrorCode::config, "payload is empty");
  const Bits bits = random_payload(qam_samples, cfg.qam_order, mix_seed(seed, 0xB175));
  return build_frame(cfg, PilotDefinition::bpsk(cfg.fft_len, kDefaultPilotSeed), bits,
                     default_pn(cfg.pn_len), kDefaultPilotSeed);
}

}  // namespace ofdmrx
