// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include "ofdmrx/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "ofdmrx/io_formats.hpp"
#include "ofdmrx/pipeline.hpp"
#include "ofdmrx/random.hpp"
#include "ofdmrx/sync.hpp"
#include "ofdmrx/waveform.hpp"

namespace ofdmrx {

ExperimentMatrix ExperimentMatrix::defaults() {
  ExperimentMatrix m;
  m.antenna_counts.resize(16);
  std::iota(m.antenna_counts.begin(), m.antenna_counts.end(), std::size_t{1});
  m.workers = default_worker_count();
  return m;
}

void ExperimentMatrix::validate() const {
  require(!antenna_counts.empty(), ErrorCode::config, "experiment matrix has no antenna counts");
  require(!fft_lens.empty(), ErrorCode::config, "experiment matrix has no FFT lengths");
  require(!engines.empty(), ErrorCode::config, "experiment matrix has no engines");
  require(repetitions >= 1, ErrorCode::config, "repetitions must be at least 1");
  require(payload_qam_samples >= 1, ErrorCode::config, "payload must hold at least one QAM sample");
  require(workers >= 1, ErrorCode::config, "workers must be at least 1");
  for (std::size_t fft : fft_lens) {
    for (std::size_t n : antenna_counts) OfdmConfig::canonical(fft, n, qam_order).validate();
  }
}

namespace {

double to_us(Nanos d) { return static_cast<double>(d.count()) / 1000.0; }

struct StageSeries {
  std::vector<double> rep_means;  // one entry per repetition
  std::size_t n_symbols = 0;
};

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

// Empty string when the runs agree.
std::string compare_runs(const ReceiveRun& a, const ReceiveRun& b) {
  if (a.data.size() != b.data.size()) return "engines produced different symbol counts";
  for (std::size_t i = 0; i < a.estimate.h_hat.flat().size(); ++i) {
    const cplx x = a.estimate.h_hat.flat()[i];
    const cplx y = b.estimate.h_hat.flat()[i];
    if (std::abs(x - y) > 1e-9 * std::max(1.0, std::abs(x))) return "channel estimates differ";
  }
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    if (a.data[i].bits != b.data[i].bits) {
      return "demapped bits differ at symbol " + std::to_string(a.data[i].seq_no);
    }
    const auto& sa = a.data[i].combined->s_hat;
    const auto& sb = b.data[i].combined->s_hat;
    for (std::size_t k = 0; k < sa.size(); ++k) {
      if (std::abs(sa[k] - sb[k]) > 1e-9 * std::max(1.0, std::abs(sa[k]))) {
        return "s_hat differs at symbol " + std::to_string(a.data[i].seq_no);
      }
    }
  }
  return {};
}

}  // namespace

BenchReport run_matrix(const ExperimentMatrix& matrix, const ChannelFactory& channel,
                       std::uint64_t seed, const BenchProgress& progress) {
  matrix.validate();
  BenchReport report;
  auto say = [&](const std::string& line) {
    if (progress) progress(line);
  };

  for (std::size_t fft_len : matrix.fft_lens) {
    for (std::size_t n_ant : matrix.antenna_counts) {
      const OfdmConfig cfg = OfdmConfig::canonical(fft_len, n_ant, matrix.qam_order);
      auto fail_all = [&](const std::string& reason) {
        for (EngineVariant e : matrix.engines) {
          report.failures.push_back({fft_len, n_ant, std::string(engine_name(e)), reason});
        }
        say("cell fft=" + std::to_string(fft_len) + " antennas=" + std::to_string(n_ant) +
            " FAILED: " + reason);
      };

      RxCapture capture;
      std::size_t symbol0 = 0;
      try {
        const OfdmFrame frame = generate_frame(cfg, matrix.payload_qam_samples,
                                               mix_seed(seed, fft_len * 1000 + n_ant));
        capture = apply_channel(frame, channel(n_ant), cfg);
        const PnSequence pn = generate_pn(frame.layout.pn_taps, frame.layout.pn_seed, cfg.pn_len);
        const DetectionResult det = detect_packet(capture, pn);
        if (!det.detected) {
          fail_all("packet not detected (peak metric " + format_double(det.peak_metric) + ")");
          continue;
        }
        symbol0 = det.symbol0_offset;
        const ReceiveRun seq = run_receiver(capture, symbol0, {EngineKind::sequential()});
        const ReceiveRun par =
            run_receiver(capture, symbol0, {EngineKind::data_parallel(matrix.workers)});
        if (auto diff = compare_runs(seq, par); !diff.empty()) {
          fail_all("engine cross-check failed: " + diff);
          continue;
        }
      } catch (const Error& e) {
        fail_all(e.what());
        continue;
      }

      const PilotDefinition pilot = PilotDefinition::bpsk(fft_len, capture.layout.pilot_seed);
      for (EngineVariant variant : matrix.engines) {
        const EngineKind kind = variant == EngineVariant::sequential
                                    ? EngineKind::sequential()
                                    : EngineKind::data_parallel(matrix.workers);
        const std::string engine(engine_name(variant));
        try {
          Receiver receiver(cfg, pilot, kind);
          const ReceiveRun warm = run_receiver(capture, symbol0, receiver);

          // [phase][stage]
          std::map<std::string, StageSeries> est;
          std::map<std::string, StageSeries> dem;
          for (std::size_t rep = 0; rep < matrix.repetitions; ++rep) {
            const ReceiveRun run = run_receiver(capture, symbol0, receiver);
            const StageTimings& p = run.pilot_timings;
            est["read"].rep_means.push_back(to_us(p.read));
            est["cp_drop"].rep_means.push_back(to_us(p.cp_drop));
            est["fft"].rep_means.push_back(to_us(p.fft));
            est["ls"].rep_means.push_back(to_us(p.equalize));
            for (auto* s : {&est["read"], &est["cp_drop"], &est["fft"], &est["ls"]}) s->n_symbols += 1;

            Nanos read{0}, cp{0}, fft{0}, mrc{0};
            for (const auto& d : run.data) {
              read += d.timings.read;
              cp += d.timings.cp_drop;
              fft += d.timings.fft;
              mrc += d.timings.equalize;
            }
            const double count = static_cast<double>(std::max<std::size_t>(run.data.size(), 1));
            dem["read"].rep_means.push_back(to_us(read) / count);
            dem["cp_drop"].rep_means.push_back(to_us(cp) / count);
            dem["fft"].rep_means.push_back(to_us(fft) / count);
            dem["mrc"].rep_means.push_back(to_us(mrc) / count);
            for (auto* s : {&dem["read"], &dem["cp_drop"], &dem["fft"], &dem["mrc"]}) {
              s->n_symbols += run.data.size();
            }
          }

          auto emit = [&](const std::string& phase, const std::string& stage, double mean,
                          double sd, std::size_t n) {
            report.records.push_back({fft_len, cfg.cp_len, n_ant, engine, kind.workers, phase,
                                      stage, mean, sd, std::max<std::size_t>(n, 1)});
          };
          for (const char* stage : {"read", "cp_drop", "fft", "ls"}) {
            const StageSeries& s = est[stage];
            emit("estimation", stage, mean_of(s.rep_means), std_of(s.rep_means), s.n_symbols);
          }
          emit("estimation", "warmup", to_us(warm.pilot_timings.total()), 0.0, 1);
          for (const char* stage : {"read", "cp_drop", "fft", "mrc"}) {
            const StageSeries& s = dem[stage];
            emit("demodulation", stage, mean_of(s.rep_means), std_of(s.rep_means), s.n_symbols);
          }
          Nanos warm_total{0};
          for (const auto& d : warm.data) warm_total += d.timings.total();
          const std::size_t warm_n = std::max<std::size_t>(warm.data.size(), 1);
          emit("demodulation", "warmup", to_us(warm_total) / static_cast<double>(warm_n), 0.0,
               warm_n);
          ++report.cells_completed;
          say("cell fft=" + std::to_string(fft_len) + " antennas=" + std::to_string(n_ant) +
              " engine=" + engine + " ok");
        } catch (const Error& e) {
          report.failures.push_back({fft_len, n_ant, engine, e.what()});
          say("cell fft=" + std::to_string(fft_len) + " antennas=" + std::to_string(n_ant) +
              " engine=" + engine + " FAILED: " + e.what());
        }
      }
    }
  }
  return report;
}

std::string bench_to_csv(const std::vector<BenchRecord>& records) {
  std::string out(kBenchCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.fft_len) + ',' + std::to_string(r.cp_len) + ',' +
           std::to_string(r.n_antennas) + ',' + r.engine + ',' + std::to_string(r.workers) + ',' +
           r.phase + ',' + r.stage + ',' + format_double(r.mean_us) + ',' +
           format_double(r.std_us) + ',' + std::to_string(r.n_symbols) + '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line = line.substr(comma + 1);
  }
  return fields;
}

std::size_t parse_size(std::string_view text, std::size_t line_no) {
  std::size_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  require(res.ec == std::errc{} && res.ptr == text.data() + text.size(), ErrorCode::input,
          "csv line " + std::to_string(line_no) + ": '" + std::string(text) + "' is not an integer");
  return v;
}

}  // namespace

std::vector<BenchRecord> bench_from_csv(std::string_view text) {
  std::vector<BenchRecord> records;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      require(line == kBenchCsvHeader, ErrorCode::input, "bench csv header mismatch");
      header_seen = true;
      continue;
    }
    const auto f = split_line(line);
    require(f.size() == 10, ErrorCode::input,
            "csv line " + std::to_string(line_no) + " has " + std::to_string(f.size()) +
                " fields, expected 10");
    BenchRecord r;
    r.fft_len = parse_size(f[0], line_no);
    r.cp_len = parse_size(f[1], line_no);
    r.n_antennas = parse_size(f[2], line_no);
    r.engine = std::string(f[3]);
    r.workers = parse_size(f[4], line_no);
    r.phase = std::string(f[5]);
    r.stage = std::string(f[6]);
    r.mean_us = parse_double(f[7]);
    r.std_us = parse_double(f[8]);
    r.n_symbols = parse_size(f[9], line_no);
    records.push_back(std::move(r));
  }
  require(header_seen, ErrorCode::input, "bench csv is empty");
  return records;
}

std::vector<SpeedupRow> speedup_table(const std::vector<BenchRecord>& records) {
  using Key = std::tuple<std::size_t, std::size_t, std::string, std::string>;  // fft, N, phase, stage
  std::map<Key, double> seq;
  std::map<Key, double> par;
  std::map<std::pair<std::size_t, std::size_t>, std::pair<bool, bool>> cells;
  for (const auto& r : records) {
    const Key key{r.fft_len, r.n_antennas, r.phase, r.stage};
    auto& cell = cells[{r.fft_len, r.n_antennas}];
    if (r.engine == engine_name(EngineVariant::sequential)) {
      seq[key] = r.mean_us;
      cell.first = true;
    } else if (r.engine == engine_name(EngineVariant::data_parallel)) {
      par[key] = r.mean_us;
      cell.second = true;
    }
  }
  std::string missing;
  for (const auto& [cell, have] : cells) {
    if (!have.first || !have.second) {
      missing += (missing.empty() ? "" : "; ") + std::string("fft_len=") +
                 std::to_string(cell.first) + " n_antennas=" + std::to_string(cell.second) +
                 " lacks " + (have.first ? "data_parallel" : "sequential");
    }
  }
  require(missing.empty(), ErrorCode::incomplete_data, "speedup needs both engines: " + missing);

  auto stage_rank = [](const std::string& s) {
    static const std::vector<std::string> order{"read", "cp_drop", "fft", "ls", "mrc", "warmup", "compute"};
    const auto it = std::find(order.begin(), order.end(), s);
    return static_cast<std::size_t>(it - order.begin());
  };

  std::vector<SpeedupRow> rows;
  std::map<std::tuple<std::size_t, std::size_t, std::string>, std::pair<double, double>> totals;
  for (const auto& [key, s_us] : seq) {
    const auto it = par.find(key);
    if (it == par.end()) continue;
    const auto& [fft, n, phase, stage] = key;
    rows.push_back({fft, n, phase, stage, s_us, it->second, s_us / it->second});
    // Ring reads are shared by both engines; only the kernel stages differ.
    if (stage != "warmup" && stage != "read") {
      auto& t = totals[{fft, n, phase}];
      t.first += s_us;
      t.second += it->second;
    }
  }
  for (const auto& [key, t] : totals) {
    const auto& [fft, n, phase] = key;
    rows.push_back({fft, n, phase, "compute", t.first, t.second, t.first / t.second});
  }
  std::sort(rows.begin(), rows.end(), [&](const SpeedupRow& a, const SpeedupRow& b) {
    return std::tuple(a.fft_len, a.n_antennas, a.phase, stage_rank(a.stage)) <
           std::tuple(b.fft_len, b.n_antennas, b.phase, stage_rank(b.stage));
  });
  return rows;
}

std::string speedup_to_csv(const std::vector<SpeedupRow>& rows) {
  std::string out(kSpeedupCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.fft_len) + ',' + std::to_string(r.n_antennas) + ',' + r.phase + ',' +
           r.stage + ',' + format_double(r.sequential_us) + ',' + format_double(r.parallel_us) +
           ',' + format_double(r.speedup) + '\n';
  }
  return out;
}

double frontend_throughput(double n_antennas, double bandwidth_hz, double bytes_per_complex_sample) {
  require(n_antennas >= 0.0 && bandwidth_hz >= 0.0 && bytes_per_complex_sample >= 0.0,
          ErrorCode::config, "throughput model arguments must be nonnegative");
  return n_antennas * bandwidth_hz * bytes_per_complex_sample * 8.0;
}

}  // namespace ofdmrx
