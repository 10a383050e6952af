// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ofdmrx/error.hpp"
#include "ofdmrx/numerics.hpp"
#include "ofdmrx/random.hpp"
#include "ofdmrx/waveform.hpp"

using namespace ofdmrx;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

// True when `bits` is a cyclic rotation of `ref`.
bool is_rotation(const std::vector<int>& bits, const std::vector<int>& ref) {
  if (bits.size() != ref.size()) return false;
  for (std::size_t r = 0; r < ref.size(); ++r) {
    bool same = true;
    for (std::size_t i = 0; i < ref.size() && same; ++i) same = bits[i] == ref[(i + r) % ref.size()];
    if (same) return true;
  }
  return false;
}

Bits random_bits(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Bits b(n);
  for (auto& x : b) x = rng.bit();
  return b;
}

}  // namespace

TEST_SUITE("waveform") {

TEST_CASE("canonical configurations validate") {
  const auto c64 = OfdmConfig::canonical(64, 4);
  CHECK(c64.cp_len == 16);
  CHECK(c64.pn_len == 255);
  CHECK(c64.qam_order == 4);
  CHECK(c64.symbol_len() == 80);
  const auto c1024 = OfdmConfig::canonical(1024, 16, 16);
  CHECK(c1024.cp_len == 72);
  CHECK(c1024.bits_per_qam() == 4);
  c64.validate();
  c1024.validate();

  OfdmConfig bad = c64;
  bad.fft_len = 100;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::config);
  bad = c64;
  bad.cp_len = 64;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::config);
  bad = c64;
  bad.n_antennas = 0;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::config);
  bad = c64;
  bad.qam_order = 8;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::config);
  bad = c64;
  bad.pn_len = 200;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::config);
}

TEST_CASE("default PN is the m-sequence of x^8 + x^6 + x^5 + x^4 + 1") {
  const PnSequence pn = default_pn();
  REQUIRE(pn.length() == 255);
  std::vector<int> bits;
  for (double c : pn.chips) {
    REQUIRE((c == 1.0 || c == -1.0));
    bits.push_back(c > 0 ? 1 : 0);
  }
  // The polynomial or its reciprocal, depending on register orientation.
  const auto forward = oracle::fibonacci_sequence(8, {0, 4, 5, 6}, 255);
  const auto reciprocal = oracle::fibonacci_sequence(8, {0, 2, 3, 4}, 255);
  CHECK((is_rotation(bits, forward) || is_rotation(bits, reciprocal)));
}

TEST_CASE("default PN balance and two-valued autocorrelation") {
  const PnSequence pn = default_pn();
  CHECK(std::count(pn.chips.begin(), pn.chips.end(), 1.0) == 128);
  CHECK(std::count(pn.chips.begin(), pn.chips.end(), -1.0) == 127);
  const auto r = oracle::circular_autocorrelation(pn.chips);
  CHECK(r[0] == 255);
  for (std::size_t lag = 1; lag < r.size(); ++lag) CHECK(r[lag] == -1);
}

TEST_CASE("PN generation across degrees") {
  // x^3 + x^2 + 1: coefficient of x^k sits in bit k-1.
  const PnSequence p7 = generate_pn(0b110, 1, 7);
  CHECK(p7.length() == 7);
  CHECK(std::count(p7.chips.begin(), p7.chips.end(), 1.0) == 4);
  const auto r7 = oracle::circular_autocorrelation(p7.chips);
  CHECK(r7[0] == 7);
  for (std::size_t lag = 1; lag < 7; ++lag) CHECK(r7[lag] == -1);

  for (std::size_t len : {15u, 31u, 63u, 127u, 511u, 1023u}) {
    const PnSequence pn = default_pn(len);
    CHECK(pn.length() == len);
    CHECK(std::count(pn.chips.begin(), pn.chips.end(), 1.0) ==
          static_cast<long>((len + 1) / 2));
  }
  CHECK(generate_pn(0xB8, 1, 255).chips == generate_pn(0xB8, 1, 255).chips);
  CHECK(generate_pn(0xB8, 1, 255).chips != generate_pn(0xB8, 2, 255).chips);
}

TEST_CASE("PN generation rejects bad parameters") {
  CHECK(code_of([] { generate_pn(0xB8, 0, 255); }) == ErrorCode::config);
  // x^4 + x^2 + 1 is not primitive.
  CHECK(code_of([] { generate_pn(0b1010, 1, 15); }) == ErrorCode::config);
  CHECK(code_of([] { generate_pn(0xB8, 1, 200); }) == ErrorCode::config);
  CHECK(code_of([] { generate_pn(0xB8, 1, 127); }) == ErrorCode::config);
}

TEST_CASE("QAM reference points") {
  const double r2 = std::sqrt(2.0);
  const double r10 = std::sqrt(10.0);
  const Bits q00{0, 0};
  CHECK(std::abs(qam_map(q00, 4)[0] - cplx{1.0 / r2, 1.0 / r2}) < 1e-15);
  const Bits q11{1, 1};
  CHECK(std::abs(qam_map(q11, 4)[0] - cplx{-1.0 / r2, -1.0 / r2}) < 1e-15);

  const Bits s0000{0, 0, 0, 0};
  CHECK(std::abs(qam_map(s0000, 16)[0] - cplx{1.0 / r10, 1.0 / r10}) < 1e-15);
  const Bits s1111{1, 1, 1, 1};
  CHECK(std::abs(qam_map(s1111, 16)[0] - cplx{-3.0 / r10, -3.0 / r10}) < 1e-15);
  const Bits s0010{0, 0, 1, 0};
  CHECK(std::abs(qam_map(s0010, 16)[0] - cplx{3.0 / r10, 1.0 / r10}) < 1e-15);
}

TEST_CASE("QAM constellations have unit energy and Gray neighbours") {
  for (unsigned order : {4u, 16u, 64u}) {
    const unsigned bps = static_cast<unsigned>(std::log2(order));
    std::vector<Bits> words;
    Bits all;
    for (unsigned v = 0; v < order; ++v) {
      Bits w(bps);
      for (unsigned i = 0; i < bps; ++i) w[i] = (v >> (bps - 1 - i)) & 1u;
      words.push_back(w);
      all.insert(all.end(), w.begin(), w.end());
    }
    const ComplexVector points = qam_map(all, order);
    double e = 0.0;
    for (const auto& p : points) e += std::norm(p);
    CHECK(std::abs(e / order - 1.0) < 1e-12);

    double dmin = 1e9;
    for (std::size_t i = 0; i < order; ++i) {
      for (std::size_t j = i + 1; j < order; ++j) dmin = std::min(dmin, std::abs(points[i] - points[j]));
    }
    for (std::size_t i = 0; i < order; ++i) {
      for (std::size_t j = i + 1; j < order; ++j) {
        if (std::abs(std::abs(points[i] - points[j]) - dmin) > 1e-9) continue;
        int diff = 0;
        for (unsigned b = 0; b < bps; ++b) diff += words[i][b] != words[j][b];
        CHECK(diff == 1);
      }
    }
    const ComplexVector table = qam_constellation(order);
    CHECK(table.size() == order);
  }
}

TEST_CASE("QAM round trip and framing") {
  for (unsigned order : {4u, 16u, 64u}) {
    const unsigned bps = static_cast<unsigned>(std::log2(order));
    const Bits bits = random_bits(100000 / bps * bps, order);
    CHECK(qam_demap(qam_map(bits, order), order) == bits);
  }
  const Bits odd{1, 0, 1};
  CHECK(code_of([&] { qam_map(odd, 4); }) == ErrorCode::framing);
  CHECK(code_of([&] { qam_map(odd, 8); }) == ErrorCode::config);
}

TEST_CASE("QPSK decisions are quadrants") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 0.7 / std::sqrt(2.0));
  for (int trial = 0; trial < 1000; ++trial) {
    const Bits bits = random_bits(2, static_cast<std::uint64_t>(trial));
    const cplx s = qam_map(bits, 4)[0];
    // Push toward the origin by less than the distance to either axis.
    const cplx moved = s - cplx{std::copysign(u(gen), s.real()), std::copysign(u(gen), s.imag())};
    const ComplexVector one{moved};
    CHECK(qam_demap(one, 4) == bits);
  }
}

TEST_CASE("QPSK bit error rate over AWGN at 10 dB symbol SNR") {
  const std::size_t n_symbols = 1000000;
  const Bits bits = random_bits(2 * n_symbols, 99);
  ComplexVector s = qam_map(bits, 4);
  const double es_n0 = std::pow(10.0, 1.0);
  Rng rng(100);
  for (auto& z : s) z += rng.complex_normal(1.0 / es_n0);
  const Bits decided = qam_demap(s, 4);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) errors += bits[i] != decided[i];
  const double ber = static_cast<double>(errors) / static_cast<double>(bits.size());
  const double theory = oracle::qpsk_ber(es_n0);
  CHECK(theory == doctest::Approx(7.827e-4).epsilon(1e-3));
  CHECK(ber == doctest::Approx(theory).epsilon(0.2));
}

TEST_CASE("pilot is a seeded unit-modulus BPSK vector") {
  const PilotDefinition p = PilotDefinition::bpsk(1024);
  REQUIRE(p.values.size() == 1024);
  std::size_t plus = 0;
  for (const auto& v : p.values) {
    CHECK((v == cplx{1.0, 0.0} || v == cplx{-1.0, 0.0}));
    plus += v.real() > 0;
  }
  CHECK(plus > 400);
  CHECK(plus < 624);
  CHECK(PilotDefinition::bpsk(1024).values == p.values);
  CHECK(PilotDefinition::bpsk(1024, 7).values != p.values);
  p.validate(1024);
  CHECK(code_of([&] { p.validate(64); }) == ErrorCode::config);
  PilotDefinition bad = PilotDefinition::bpsk(64);
  bad.values[3] = {0.5, 0.0};
  CHECK(code_of([&] { bad.validate(64); }) == ErrorCode::config);
}

TEST_CASE("frame length arithmetic") {
  CHECK(data_symbol_count(100000, 64) == 1563);
  CHECK(data_symbol_count(100000, 1024) == 98);
  CHECK(frame_sample_count(OfdmConfig::canonical(64, 1), 100000) == 125375);
  CHECK(frame_sample_count(OfdmConfig::canonical(1024, 1), 100000) == 108759);
  for (std::size_t m : {64u, 1024u}) {
    const auto cfg = OfdmConfig::canonical(m, 1);
    for (std::size_t q = 1; q <= 100000; ++q) {
      const std::size_t n_data = (q + m - 1) / m;
      REQUIRE(frame_sample_count(cfg, q) == 255 + (1 + n_data) * (m + cfg.cp_len));
    }
  }
}

TEST_CASE("generated frames") {
  for (std::size_t m : {64u, 1024u}) {
    for (unsigned order : {4u, 16u, 64u}) {
      const auto cfg = OfdmConfig::canonical(m, 1, order);
      const std::size_t q = 3 * m + 17;
      const OfdmFrame f = generate_frame(cfg, q, 5);
      CHECK(f.layout.n_data_symbols == 4);
      CHECK(f.layout.payload_qam_samples == q);
      CHECK(f.layout.pad_len == m - 17);
      CHECK(f.tx_qam.size() == q);
      CHECK(f.tx_bits.size() == q * cfg.bits_per_qam());
      CHECK(f.total_samples() == frame_sample_count(cfg, q));
      const ComplexVector all = f.samples();
      REQUIRE(all.size() == f.total_samples());

      const PnSequence pn = default_pn();
      for (std::size_t i = 0; i < 255; ++i) CHECK(all[i] == cplx{pn.chips[i], 0.0});

      // CP property on every symbol.
      const std::size_t sym = m + cfg.cp_len;
      for (std::size_t s = 0; s < 1 + f.layout.n_data_symbols; ++s) {
        const std::size_t base = 255 + s * sym;
        for (std::size_t i = 0; i < cfg.cp_len; ++i) REQUIRE(all[base + i] == all[base + m + i]);
      }

      // Subcarrier content: fftshift(fft(body)) / sqrt(M) gives the QAM samples.
      const PilotDefinition pilot = PilotDefinition::bpsk(m, f.layout.pilot_seed);
      const double scale = 1.0 / std::sqrt(static_cast<double>(m));
      auto body = [&](std::size_t s) {
        const std::size_t base = 255 + s * sym + cfg.cp_len;
        ComplexVector x(all.begin() + static_cast<std::ptrdiff_t>(base),
                        all.begin() + static_cast<std::ptrdiff_t>(base + m));
        auto freq = oracle::shift(oracle::dft(x));
        for (auto& z : freq) z *= scale;
        return freq;
      };
      CHECK(oracle::max_abs_diff(body(0), pilot.values) < 1e-9);
      for (std::size_t d = 0; d < f.layout.n_data_symbols; ++d) {
        const auto freq = body(1 + d);
        for (std::size_t k = 0; k < m; ++k) {
          const std::size_t idx = d * m + k;
          const cplx expected = idx < q ? f.tx_qam[idx] : cplx{0.0, 0.0};
          CHECK(std::abs(freq[k] - expected) < 1e-9);
        }
      }
      // Unit average power over the pilot body.
      double p = 0.0;
      for (std::size_t i = 255 + cfg.cp_len; i < 255 + sym; ++i) p += std::norm(all[i]);
      CHECK(p / static_cast<double>(m) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("frame generation is deterministic and rejects empty payloads") {
  const auto cfg = OfdmConfig::canonical(64, 2);
  const OfdmFrame a = generate_frame(cfg, 1000, 9);
  const OfdmFrame b = generate_frame(cfg, 1000, 9);
  const OfdmFrame c = generate_frame(cfg, 1000, 10);
  CHECK(a.samples() == b.samples());
  CHECK(a.tx_bits == b.tx_bits);
  CHECK(a.tx_bits != c.tx_bits);
  CHECK(code_of([&] { generate_frame(cfg, 0, 1); }) == ErrorCode::config);
  const Bits none;
  CHECK(code_of([&] {
          build_frame(cfg, PilotDefinition::bpsk(64), none, default_pn());
        }) == ErrorCode::config);
}

TEST_CASE("OFDM modulation prepends the cyclic prefix") {
  ComplexVector values(64);
  for (std::size_t k = 0; k < 64; ++k) values[k] = {static_cast<double>(k % 3) - 1.0, 0.5};
  const ComplexVector sym = ofdm_modulate(values, 16);
  REQUIRE(sym.size() == 80);
  for (std::size_t i = 0; i < 16; ++i) CHECK(sym[i] == sym[64 + i]);
  ComplexVector body(sym.begin() + 16, sym.end());
  auto back = fftshift(fft(body));
  for (auto& z : back) z /= 8.0;
  CHECK(oracle::max_abs_diff(back, values) < 1e-12);
}

}  // TEST_SUITE
