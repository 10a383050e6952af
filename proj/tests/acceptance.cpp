// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "ofdmrx/bench.hpp"
#include "ofdmrx/channel.hpp"
#include "ofdmrx/numerics.hpp"
#include "ofdmrx/pipeline.hpp"
#include "ofdmrx/random.hpp"
#include "ofdmrx/receiver.hpp"
#include "ofdmrx/ringbuf.hpp"
#include "ofdmrx/sync.hpp"
#include "ofdmrx/waveform.hpp"

using namespace ofdmrx;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---- FFT oracle ----------------------------------------------------------

Verdict fft_oracle() {
  std::mt19937_64 gen(2024);
  double worst_abs = 0.0;
  double worst_parseval = 0.0;
  for (std::size_t m : {64u, 1024u}) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::vector<cplx> x = oracle::random_vector(m, gen);
      const ComplexVector y = fft(x);
      worst_abs = std::max(worst_abs, oracle::max_abs_diff(y, oracle::dft(x)));
      double ex = 0.0, ey = 0.0;
      for (const auto& v : x) ex += std::norm(v);
      for (const auto& v : y) ey += std::norm(v);
      worst_parseval = std::max(worst_parseval, std::abs(ey / static_cast<double>(m) - ex) / ex);
    }
  }
  return {worst_abs <= 1e-9 && worst_parseval <= 1e-9,
          fmt("max_abs_err=%.3g parseval_rel_err=%.3g (limits 1e-9)", worst_abs, worst_parseval)};
}

// ---- PN properties -------------------------------------------------------

Verdict pn_properties() {
  const PnSequence pn = default_pn();
  const std::vector<long> ac = oracle::circular_autocorrelation(pn.chips);
  bool exact = pn.length() == 255 && ac[0] == 255;
  for (std::size_t lag = 1; lag < ac.size(); ++lag) exact = exact && ac[lag] == -1;
  const auto plus = std::count(pn.chips.begin(), pn.chips.end(), 1.0);
  const auto minus = std::count(pn.chips.begin(), pn.chips.end(), -1.0);
  return {exact && plus == 128 && minus == 127,
          fmt("length=%zu ac0=%ld sidelobes_all_minus1=%s balance=%ld/%ld", pn.length(), ac[0],
              exact ? "yes" : "no", static_cast<long>(plus), static_cast<long>(minus))};
}

// ---- shared chain helpers ----------------------------------------------

struct Chain {
  OfdmFrame frame;
  RxCapture capture;
  DetectionResult detection;
};

Chain transmit(const OfdmConfig& cfg, std::size_t payload, std::uint64_t seed,
               const ChannelModel& model) {
  Chain c{generate_frame(cfg, payload, seed), {}, {}};
  c.capture = apply_channel(c.frame, model, cfg);
  c.detection = detect_packet(c.capture, default_pn(cfg.pn_len));
  return c;
}

// ---- loopback ------------------------------------------------------------

Verdict loopback() {
  std::size_t runs = 0, failures = 0, bits = 0, errors = 0;
  std::ostringstream worst;
  for (std::size_t m : {64u, 1024u}) {
    for (std::size_t n : {1u, 4u, 16u}) {
      for (unsigned order : {4u, 16u}) {
        const auto cfg = OfdmConfig::canonical(m, n, order);
        ChannelModel model = ChannelModel::identity();
        model.timing_offset = 100 + 37 * runs;
        const Chain c = transmit(cfg, 100000, 1 + runs, model);
        ++runs;
        if (!c.detection.detected || c.detection.frame_start != model.timing_offset) {
          ++failures;
          worst << " detect_fail(M=" << m << ",N=" << n << ",Q=" << order << ")";
          continue;
        }
        const ReceiveRun run = run_receiver(c.capture, c.detection.symbol0_offset);
        const ReceiveScore s = score_run(run, cfg, c.frame.layout, &c.frame.tx_bits);
        bits += s.n_bits;
        errors += s.bit_errors;
        if (!s.ber || *s.ber != 0.0 || s.n_bits != c.frame.tx_bits.size()) {
          ++failures;
          worst << " ber(M=" << m << ",N=" << n << ",Q=" << order << ")=" << s.ber.value_or(-1);
        }
      }
    }
  }
  return {failures == 0,
          fmt("runs=%zu bits=%zu bit_errors=%zu", runs, bits, errors) + worst.str()};
}

// ---- engine equivalence --------------------------------------------------

Verdict engine_equivalence() {
  std::size_t comparisons = 0, bit_mismatch = 0;
  double worst = 0.0;
  for (std::size_t m : {64u, 1024u}) {
    for (std::size_t n = 1; n <= 16; ++n) {
      const auto cfg = OfdmConfig::canonical(m, n);
      ChannelModel model = ChannelModel::rayleigh(10.0, 1000 * m + n);
      model.timing_offset = 200;
      const Chain c = transmit(cfg, 24 * m, n, model);
      if (!c.detection.detected) return {false, fmt("no detection at M=%zu N=%zu", m, n)};
      const ReceiveRun seq = run_receiver(c.capture, c.detection.symbol0_offset);
      const Bits seq_bits = payload_bits(seq, cfg, c.frame.layout);
      for (std::size_t workers : {1u, 2u, 4u, 8u}) {
        const ReceiveRun par = run_receiver(c.capture, c.detection.symbol0_offset,
                                            ReceiveOptions{EngineKind::data_parallel(workers)});
        ++comparisons;
        if (payload_bits(par, cfg, c.frame.layout) != seq_bits) ++bit_mismatch;
        if (par.data.size() != seq.data.size()) return {false, "symbol count mismatch"};
        for (std::size_t d = 0; d < seq.data.size(); ++d) {
          worst = std::max(worst, oracle::max_abs_diff(par.data[d].combined->s_hat,
                                                       seq.data[d].combined->s_hat));
        }
      }
    }
  }
  return {bit_mismatch == 0 && worst <= 1e-9,
          fmt("comparisons=%zu bit_mismatches=%zu max_s_hat_diff=%.3g (limit 1e-9)", comparisons,
              bit_mismatch, worst)};
}

// ---- MRC array gain ------------------------------------------------------

Verdict mrc_gain() {
  const std::size_t m = 64;
  const double per_antenna_db = 10.0;
  std::ostringstream detail;
  bool ok = true;
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    const auto cfg = OfdmConfig::canonical(m, n);
    const OfdmFrame frame = generate_frame(cfg, m * 100, 40 + n);
    Rng rng(90 + n);
    std::vector<cplx> gains;
    for (std::size_t a = 0; a < n; ++a) gains.push_back(std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform()));
    ChannelModel model = ChannelModel::fixed(gains);
    model.snr_db = per_antenna_db;
    model.rng_seed = 7 * n;
    const RxCapture cap = apply_channel(frame, model, cfg);

    ChannelEstimate perfect;
    perfect.h_hat = ComplexMatrix(n, m);
    const double scale = std::sqrt(static_cast<double>(m));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t k = 0; k < m; ++k) perfect.h_hat(a, k) = scale * gains[a];
    }
    const std::size_t symbol0 = cfg.pn_len;
    ComplexVector s_hat;
    for (std::size_t d = 0; d < frame.layout.n_data_symbols; ++d) {
      const CombinedSymbol c = mrc_combine(to_freq(cp_drop(make_slot(cap, symbol0, 1 + d), cfg)), perfect);
      s_hat.insert(s_hat.end(), c.s_hat.begin(), c.s_hat.end());
    }
    s_hat.resize(frame.tx_qam.size());
    const double measured = measure_snr(frame.tx_qam, s_hat);
    const double expected = per_antenna_db + 10.0 * std::log10(static_cast<double>(n));
    ok = ok && std::abs(measured - expected) <= 1.0;
    detail << fmt("N=%zu:%.2f/%.2fdB ", n, measured, expected);
  }
  return {ok, detail.str() + "(measured/expected, 6400 symbols each, tol 1 dB)"};
}

// ---- LS statistics -------------------------------------------------------

Verdict ls_statistics() {
  const std::size_t m = 64;
  const std::size_t n = 4;
  const std::size_t trials = 1000;
  const auto cfg = OfdmConfig::canonical(m, n);
  const OfdmFrame frame = generate_frame(cfg, m, 5);
  const PilotDefinition pilot = PilotDefinition::bpsk(m, frame.layout.pilot_seed);
  const double scale = static_cast<double>(m);  // unnormalized FFT noise gain
  double err = 0.0, noise = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    ChannelModel model = ChannelModel::rayleigh(20.0, 5000 + t);
    const RxCapture cap = apply_channel(frame, model, cfg);
    const ChannelEstimate est = ls_estimate(to_freq(cp_drop(make_slot(cap, cfg.pn_len, 0), cfg)), pilot);
    for (std::size_t a = 0; a < n; ++a) {
      const cplx h = std::sqrt(scale) * cap.truth->taps[a][0];
      for (std::size_t k = 0; k < m; ++k) err += std::norm(est.h_hat(a, k) - h);
      noise += scale * cap.truth->noise_variance[a] * static_cast<double>(m);
    }
  }
  const double ratio = err / noise;
  return {std::abs(ratio - 1.0) <= 0.1,
          fmt("error_power/noise_power=%.4f over %zu pilot symbols x %zu antennas (tol 10%%)", ratio,
              trials, n)};
}

// ---- detection -----------------------------------------------------------

Verdict detection() {
  const std::size_t m = 64;
  const auto cfg = OfdmConfig::canonical(m, 1);
  const PnSequence pn = default_pn();
  const OfdmFrame frame = generate_frame(cfg, m, 11);
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<std::size_t> offset_dist(0, 1500);
  std::size_t exact = 0;
  const std::size_t trials = 1000;
  for (std::size_t t = 0; t < trials; ++t) {
    ChannelModel model = ChannelModel::fixed({cplx{1.0, 0.0}});
    model.snr_db = 0.0;
    model.rng_seed = 100000 + t;
    model.timing_offset = offset_dist(gen);
    const RxCapture cap = apply_channel(frame, model, cfg);
    const DetectionResult d = detect_packet(cap, pn);
    if (d.detected && d.frame_start == model.timing_offset) ++exact;
  }

  const std::size_t noise_trials = 10000;
  const std::size_t noise_len = 1024;
  std::size_t false_alarms = 0;
  double max_noise_peak = 0.0;
  Rng rng(4242);
  RxCapture noise{cfg, frame.layout, {ComplexVector(noise_len)}, std::nullopt};
  for (std::size_t t = 0; t < noise_trials; ++t) {
    for (auto& z : noise.streams[0]) z = rng.complex_normal(1.0);
    const DetectionResult d = detect_packet(noise, pn, 0.6);
    max_noise_peak = std::max(max_noise_peak, d.peak_metric);
    if (d.detected) ++false_alarms;
  }
  const double rate = static_cast<double>(exact) / static_cast<double>(trials);
  return {rate >= 0.99 && false_alarms == 0,
          fmt("exact=%zu/%zu (%.1f%%, need 99%%) false_detections=%zu/%zu max_noise_peak=%.3f",
              exact, trials, 100.0 * rate, false_alarms, noise_trials, max_noise_peak)};
}

// ---- benchmark trend -----------------------------------------------------

double compute_speedup(const std::vector<SpeedupRow>& rows, std::size_t fft, std::size_t n,
                       const std::string& phase) {
  for (const auto& r : rows) {
    if (r.fft_len == fft && r.n_antennas == n && r.phase == phase && r.stage == "compute") {
      return r.speedup;
    }
  }
  return std::nan("");
}

Verdict bench_trend(const fs::path& archive, std::size_t reps) {
  ExperimentMatrix matrix = ExperimentMatrix::defaults();
  matrix.repetitions = reps;
  const ChannelFactory channel = [](std::size_t) {
    ChannelModel model = ChannelModel::rayleigh(20.0, 1);
    model.timing_offset = 500;
    return model;
  };
  const BenchReport report = run_matrix(matrix, channel, 1);
  fs::create_directories(archive);
  std::ofstream(archive / "bench.csv") << bench_to_csv(report.records);

  const unsigned hw = std::thread::hardware_concurrency();
  const std::string pre = fmt("hardware_threads=%u workers=%zu precondition(>=4 threads)=%s", hw,
                              matrix.workers, hw >= 4 ? "met" : "NOT met");
  std::size_t cells = 0;
  {
    std::vector<std::string> seen;
    for (const auto& r : report.records) {
      const std::string key = fmt("%zu/%zu/%s", r.fft_len, r.n_antennas, r.engine.c_str());
      if (std::find(seen.begin(), seen.end(), key) == seen.end()) seen.push_back(key);
    }
    cells = seen.size();
  }
  if (!report.failures.empty() || cells != 64) {
    return {false, fmt("cells=%zu/64 failures=%zu ", cells, report.failures.size()) + pre +
                       " csv=" + archive.string()};
  }
  const std::vector<SpeedupRow> rows = speedup_table(report.records);
  std::ofstream(archive / "speedup.csv") << speedup_to_csv(rows);

  const std::string phase = "demodulation";
  const double s64_1 = compute_speedup(rows, 64, 1, phase);
  const double s64_16 = compute_speedup(rows, 64, 16, phase);
  const double s1k_1 = compute_speedup(rows, 1024, 1, phase);
  const double s1k_16 = compute_speedup(rows, 1024, 16, phase);
  const bool grows64 = s64_16 > s64_1;
  const bool grows1k = s1k_16 > s1k_1;
  const bool fft_order = s1k_16 >= s64_16;
  const bool ok = grows64 && grows1k && fft_order;
  std::string detail =
      fmt("cells=64 demod compute speedup M=64: N1=%.3f N16=%.3f (%s); M=1024: N1=%.3f N16=%.3f (%s); "
          "M=1024 N16 >= M=64 N16 (%s); ",
          s64_1, s64_16, grows64 ? "ok" : "fail", s1k_1, s1k_16, grows1k ? "ok" : "fail",
          fft_order ? "ok" : "fail") +
      pre;
  if (!ok) detail += " archived=" + archive.string();
  return {ok, detail};
}

// ---- throughput ----------------------------------------------------------

Verdict throughput() {
  const double bps = frontend_throughput(16, 20e6, 4);
  return {bps == 10.24e9 && bps >= 10e9, fmt("frontend_throughput(16, 20 MHz, 4 B)=%.6g bit/s", bps)};
}

// ---- ring buffer stress ----------------------------------------------

Verdict ring_stress() {
  const std::uint64_t n_slots = 10000;
  std::ostringstream detail;
  bool ok = true;
  for (std::size_t consumers = 1; consumers <= 3; ++consumers) {
    SymbolRing ring(16);
    std::vector<SymbolRing::ConsumerId> ids;
    for (std::size_t i = 0; i < consumers; ++i) ids.push_back(ring.register_consumer());
    std::vector<std::vector<std::uint64_t>> received(consumers);
    std::vector<std::size_t> bad(consumers, 0);
    std::vector<std::vector<cplx>> firsts(consumers);
    std::vector<cplx> sent_first;
    sent_first.reserve(n_slots);
    std::thread producer([&] {
      std::mt19937_64 gen(31 * consumers);
      Rng rng(consumers);
      for (std::uint64_t i = 0; i < n_slots; ++i) {
        SymbolSlot slot;
        slot.seq_no = i;
        slot.kind = i % 10 == 0 ? SlotKind::pilot : SlotKind::data;
        slot.payload = ComplexMatrix(1 + gen() % 4, 8 + gen() % 24);
        for (auto& z : slot.payload.flat()) z = rng.complex_normal(1.0);
        sent_first.push_back(slot.payload.flat()[0]);
        ring.write(std::move(slot));
        if (gen() % 50 == 0) std::this_thread::sleep_for(std::chrono::microseconds(gen() % 200));
      }
      ring.close();
    });
    std::vector<std::thread> readers;
    for (std::size_t k = 0; k < consumers; ++k) {
      readers.emplace_back([&, k] {
        std::mt19937_64 gen(k + 99);
        while (auto s = ring.read(ids[k])) {
          if (!s->verify()) ++bad[k];
          received[k].push_back(s->seq_no);
          firsts[k].push_back(s->payload.flat()[0]);
          if (gen() % 40 == 0) std::this_thread::sleep_for(std::chrono::microseconds(gen() % 200));
        }
      });
    }
    producer.join();
    for (auto& t : readers) t.join();
    for (std::size_t k = 0; k < consumers; ++k) {
      bool in_order = received[k].size() == n_slots;
      for (std::uint64_t i = 0; in_order && i < n_slots; ++i) in_order = received[k][i] == i;
      const bool same = firsts[k] == sent_first;
      ok = ok && in_order && same && bad[k] == 0;
      detail << fmt("c%zu/%zu:recv=%zu in_order=%s checksum_fail=%zu ", k + 1, consumers,
                    received[k].size(), in_order && same ? "yes" : "no", bad[k]);
    }
  }
  return {ok, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ofdmrx acceptance gate"};
  std::string only;
  std::string archive = "acceptance_artifacts";
  std::size_t reps = 3;
  app.add_option("--only", only, "Run a single criterion by name");
  app.add_option("--archive", archive, "Directory for benchmark CSVs");
  app.add_option("--bench-reps", reps, "Timed repetitions per benchmark cell");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"fft_oracle", fft_oracle},
      {"pn_properties", pn_properties},
      {"loopback_ber_zero", loopback},
      {"engine_equivalence", engine_equivalence},
      {"mrc_array_gain", mrc_gain},
      {"ls_statistics", ls_statistics},
      {"detection", detection},
      {"bench_trend", [&] { return bench_trend(archive, reps); }},
      {"throughput_model", throughput},
      {"ring_stress", ring_stress},
  };

  int failed = 0, ran = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && name != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << " (" << fmt("%.1f", secs) << " s) "
              << v.detail << std::endl;
    failed += v.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::cerr << "unknown criterion '" << only << "'\n";
    return 2;
  }
  std::cout << "acceptance " << (ran - failed) << "/" << ran << " passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
