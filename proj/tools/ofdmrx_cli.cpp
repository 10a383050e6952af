// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: generate frames, simulate the channel, run the
// receiver, sweep the benchmark matrix. Built only on the C interface.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ofdmrx/ofdmrx.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Pre-flight validation failure: reported as category "usage".
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Library failure carrying its status category.
struct ApiError : std::runtime_error {
  ofdmrx_status status;
  ApiError(ofdmrx_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(ofdmrx_status status) {
  if (status != OFDMRX_OK) throw ApiError(status, ofdmrx_last_error());
}

struct Options {
  std::string fft = "64";
  std::optional<uint32_t> cp;
  std::string antennas = "1";
  bool fft_given = false;
  bool antennas_given = false;
  bool offset_given = false;
  uint32_t qam = 4;
  std::optional<double> snr_db;
  std::string channel_mode;
  std::string engine;
  std::optional<uint32_t> workers;
  uint64_t seed = 1;
  std::string out;

  std::string in;
  std::string truth;
  uint64_t payload = 100000;
  uint32_t reps = 1;
  uint64_t offset = 0;
  std::optional<double> threshold;
  std::string gains;
  uint32_t taps = 4;
  bool quiet = false;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

uint32_t parse_u32(const std::string& text, const char* flag) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(text, &used);
    if (used != text.size() || v > UINT32_MAX) throw std::invalid_argument(text);
    return static_cast<uint32_t>(v);
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + ": '" + text + "' is not a non-negative integer");
  }
}

double parse_f64(const std::string& text, const char* flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + ": '" + text + "' is not a number");
  }
}

// "4", "1-16" or "1,2,4,8".
std::vector<uint32_t> parse_list(const std::string& text, const char* flag) {
  std::vector<uint32_t> values;
  for (const std::string& part : split(text, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      values.push_back(parse_u32(part, flag));
      continue;
    }
    const uint32_t lo = parse_u32(part.substr(0, dash), flag);
    const uint32_t hi = parse_u32(part.substr(dash + 1), flag);
    if (lo > hi) throw UsageError(std::string(flag) + ": empty range '" + part + "'");
    for (uint32_t v = lo; v <= hi; ++v) values.push_back(v);
  }
  if (values.empty()) throw UsageError(std::string(flag) + ": no values given");
  return values;
}

uint32_t single(const std::string& text, const char* flag) {
  const auto values = parse_list(text, flag);
  if (values.size() != 1) {
    throw UsageError(std::string(flag) + " takes a single value for this command");
  }
  return values.front();
}

ofdmrx_config make_config(const Options& o, uint32_t fft, uint32_t antennas) {
  ofdmrx_config cfg;
  ofdmrx_config_canonical(fft, antennas, &cfg);
  if (o.cp) cfg.cp_len = *o.cp;
  cfg.qam_order = o.qam;
  if (ofdmrx_config_validate(&cfg) != OFDMRX_OK) throw UsageError(ofdmrx_last_error());
  return cfg;
}

// Channel parameters; gains points into the returned storage.
struct ChannelSetup {
  ofdmrx_channel_params params;
  std::vector<double> gains;
};

ChannelSetup make_channel(const Options& o, ofdmrx_channel_mode fallback) {
  ChannelSetup setup;
  ofdmrx_channel_params_default(&setup.params);
  setup.params.mode = fallback;
  if (!o.channel_mode.empty() &&
      ofdmrx_channel_mode_parse(o.channel_mode.c_str(), &setup.params.mode) != OFDMRX_OK) {
    throw UsageError(ofdmrx_last_error());
  }
  setup.params.noiseless = o.snr_db ? 0 : 1;
  if (o.snr_db) setup.params.snr_db = *o.snr_db;
  setup.params.timing_offset = o.offset;
  setup.params.seed = o.seed;
  setup.params.n_taps = o.taps;
  if (!o.gains.empty()) {
    for (const std::string& pair : split(o.gains, ';')) {
      const auto parts = split(pair, ',');
      if (parts.size() != 2) throw UsageError("--gains: expected 're,im;re,im', got '" + pair + "'");
      setup.gains.push_back(parse_f64(parts[0], "--gains"));
      setup.gains.push_back(parse_f64(parts[1], "--gains"));
    }
  }
  if (setup.params.mode == OFDMRX_CHANNEL_FIXED_GAINS && setup.gains.empty()) {
    throw UsageError("--channel-mode fixed_gains needs --gains");
  }
  setup.params.gains = setup.gains.empty() ? nullptr : setup.gains.data();
  setup.params.n_gains = setup.gains.size() / 2;
  return setup;
}

ofdmrx_receive_params make_receive_params(const Options& o) {
  ofdmrx_receive_params p;
  ofdmrx_receive_params_default(&p);
  if (!o.engine.empty() && ofdmrx_engine_parse(o.engine.c_str(), &p.engine) != OFDMRX_OK) {
    throw UsageError(ofdmrx_last_error());
  }
  if (o.workers) {
    if (*o.workers == 0) throw UsageError("--workers must be at least 1");
    p.workers = *o.workers;
  }
  if (o.threshold) {
    if (*o.threshold < 0.0 || *o.threshold > 1.0) {
      throw UsageError("--threshold must lie in [0, 1]");
    }
    p.threshold = *o.threshold;
  }
  return p;
}

void require_out(const Options& o) {
  if (o.out.empty()) throw UsageError("--out is required");
}

void require_in(const Options& o) {
  if (o.in.empty()) throw UsageError("--in is required");
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
};

using FrameHandle = Handle<ofdmrx_frame, ofdmrx_frame_free>;
using CaptureHandle = Handle<ofdmrx_capture, ofdmrx_capture_free>;
using ResultHandle = Handle<ofdmrx_result, ofdmrx_result_free>;
using ReportHandle = Handle<ofdmrx_bench_report, ofdmrx_bench_report_free>;
using BitsHandle = Handle<uint8_t, ofdmrx_bits_free>;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_result(const ofdmrx_result* result, const std::string& demod_path, bool quiet) {
  ofdmrx_detection det;
  ofdmrx_result_detection(result, &det);
  std::cout << "detected frame_start=" << det.frame_start
            << " symbol0_offset=" << det.symbol0_offset << " peak=" << fmt(det.peak_metric)
            << "\n";
  ofdmrx_result_summary sum;
  ofdmrx_result_summary_get(result, &sum);
  if (!quiet) {
    const size_t n = ofdmrx_result_num_symbols(result);
    for (size_t i = 0; i < n; ++i) {
      ofdmrx_symbol_summary s;
      check(ofdmrx_result_symbol(result, i, &s));
      std::cout << "seq=" << s.seq_no << " kind=" << (s.is_pilot ? "pilot" : "data");
      if (s.is_pilot) {
        std::cout << (sum.has_ber ? " ber=na" : "") << " evm_db=na\n";
        continue;
      }
      if (s.has_ber) std::cout << " ber=" << fmt(s.ber);
      std::cout << " evm_db=" << (s.has_evm ? fmt(s.evm_db) : std::string("na")) << "\n";
    }
  }
  std::cout << "summary data_symbols=" << sum.n_data_symbols;
  if (sum.has_ber) {
    std::cout << " ber=" << fmt(sum.ber) << " bit_errors=" << sum.bit_errors
              << " n_bits=" << sum.n_bits;
  }
  std::cout << " evm_db=" << fmt(sum.evm_db) << " erased_subcarriers=" << sum.erased_subcarriers
            << " demod=" << demod_path << "\n";
}

void create_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ApiError(OFDMRX_ERR_IO, "cannot create directory '" + dir + "': " + ec.message());
}

void cmd_generate(const Options& o) {
  const ofdmrx_config cfg = make_config(o, single(o.fft, "--fft"), single(o.antennas, "--antennas"));
  require_out(o);
  FrameHandle frame;
  check(ofdmrx_frame_generate(&cfg, o.payload, o.seed, &frame.ptr));
  check(ofdmrx_frame_save(frame.ptr, o.out.c_str()));
  std::cout << "generated samples=" << ofdmrx_frame_num_samples(frame.ptr)
            << " data_symbols=" << ofdmrx_frame_num_data_symbols(frame.ptr) << " out=" << o.out
            << "\n";
}

void cmd_channel(const Options& o) {
  require_in(o);
  require_out(o);
  const ChannelSetup channel = make_channel(o, OFDMRX_CHANNEL_IDENTITY);
  const uint32_t antennas = o.antennas_given ? single(o.antennas, "--antennas") : 0;
  FrameHandle frame;
  check(ofdmrx_frame_load(o.in.c_str(), &frame.ptr));
  CaptureHandle capture;
  check(ofdmrx_apply_channel(frame.ptr, antennas, &channel.params, &capture.ptr));
  check(ofdmrx_capture_save(capture.ptr, o.out.c_str()));

  // Keep the truth bits next to the capture so receive finds them.
  const fs::path bits = fs::path(o.in) / "tx_bits.u8";
  if (fs::exists(bits)) {
    std::error_code ec;
    fs::copy_file(bits, fs::path(o.out) / "tx_bits.u8", fs::copy_options::overwrite_existing, ec);
    if (ec) throw ApiError(OFDMRX_ERR_IO, "cannot copy '" + bits.string() + "': " + ec.message());
  }
  ofdmrx_config cfg;
  ofdmrx_capture_config(capture.ptr, &cfg);
  std::cout << "channel antennas=" << cfg.n_antennas
            << " samples=" << ofdmrx_capture_num_samples(capture.ptr) << " out=" << o.out << "\n";
}

void cmd_receive(const Options& o) {
  require_in(o);
  const ofdmrx_receive_params params = make_receive_params(o);
  CaptureHandle capture;
  check(ofdmrx_capture_load(o.in.c_str(), &capture.ptr));

  std::string truth_path = o.truth;
  if (truth_path.empty() && fs::exists(fs::path(o.in) / "tx_bits.u8")) {
    truth_path = (fs::path(o.in) / "tx_bits.u8").string();
  }
  BitsHandle truth;
  size_t n_truth = 0;
  if (!truth_path.empty()) check(ofdmrx_bits_load(truth_path.c_str(), &truth.ptr, &n_truth));

  ResultHandle result;
  check(ofdmrx_receive(capture.ptr, truth.ptr, n_truth, &params, &result.ptr));
  const std::string out_dir = o.out.empty() ? o.in : o.out;
  create_dir(out_dir);
  const std::string demod = (fs::path(out_dir) / "demod.bin").string();
  check(ofdmrx_result_save_demod(result.ptr, demod.c_str()));
  print_result(result.ptr, demod, o.quiet);
}

void cmd_e2e(const Options& o) {
  const ofdmrx_config cfg = make_config(o, single(o.fft, "--fft"), single(o.antennas, "--antennas"));
  require_out(o);
  const ChannelSetup channel = make_channel(o, OFDMRX_CHANNEL_IDENTITY);
  const ofdmrx_receive_params params = make_receive_params(o);

  FrameHandle frame;
  check(ofdmrx_frame_generate(&cfg, o.payload, o.seed, &frame.ptr));
  CaptureHandle capture;
  check(ofdmrx_apply_channel(frame.ptr, 0, &channel.params, &capture.ptr));
  const uint8_t* bits = nullptr;
  size_t n_bits = 0;
  ofdmrx_frame_bits(frame.ptr, &bits, &n_bits);
  ResultHandle result;
  check(ofdmrx_receive(capture.ptr, bits, n_bits, &params, &result.ptr));
  create_dir(o.out);
  const std::string demod = (fs::path(o.out) / "demod.bin").string();
  check(ofdmrx_result_save_demod(result.ptr, demod.c_str()));
  print_result(result.ptr, demod, o.quiet);
}

void print_progress(const char* line, void*) { std::cerr << line << "\n"; }

void cmd_bench(const Options& o) {
  const std::vector<uint32_t> antennas =
      o.antennas_given ? parse_list(o.antennas, "--antennas") : parse_list("1-16", "--antennas");
  const std::vector<uint32_t> ffts =
      o.fft_given ? parse_list(o.fft, "--fft") : std::vector<uint32_t>{64, 1024};
  if (o.cp) throw UsageError("--cp is fixed to the canonical value per FFT size in bench");
  for (uint32_t fft : ffts) {
    for (uint32_t n : antennas) make_config(o, fft, n);
  }
  require_out(o);

  ofdmrx_bench_params p;
  ofdmrx_bench_params_default(&p);
  p.antenna_counts = antennas.data();
  p.n_antenna_counts = antennas.size();
  p.fft_lens = ffts.data();
  p.n_fft_lens = ffts.size();
  if (!o.engine.empty() && o.engine != "both") {
    ofdmrx_engine engine;
    if (ofdmrx_engine_parse(o.engine.c_str(), &engine) != OFDMRX_OK) {
      throw UsageError(ofdmrx_last_error());
    }
    p.run_sequential = engine == OFDMRX_ENGINE_SEQUENTIAL;
    p.run_data_parallel = engine == OFDMRX_ENGINE_DATA_PARALLEL;
  }
  if (o.workers) {
    if (*o.workers == 0) throw UsageError("--workers must be at least 1");
    p.workers = *o.workers;
  }
  if (o.reps == 0) throw UsageError("--reps must be at least 1");
  p.repetitions = o.reps;
  p.payload_qam_samples = o.payload;
  p.qam_order = o.qam;
  const ChannelSetup channel = make_channel(o, OFDMRX_CHANNEL_FLAT_RAYLEIGH);
  p.channel = channel.params;
  if (!o.snr_db) {
    p.channel.noiseless = 0;
    p.channel.snr_db = 20.0;
  }
  if (!o.offset_given) p.channel.timing_offset = 500;
  p.seed = o.seed;
  if (!o.quiet) p.progress = print_progress;

  ReportHandle report;
  check(ofdmrx_bench_run(&p, o.out.c_str(), &report.ptr));
  const size_t failures = ofdmrx_bench_report_num_failures(report.ptr);
  for (size_t i = 0; i < failures; ++i) {
    std::cerr << "cell failed: " << ofdmrx_bench_report_failure(report.ptr, i) << "\n";
  }
  std::cout << "bench cells=" << ofdmrx_bench_report_num_cells(report.ptr)
            << " records=" << ofdmrx_bench_report_num_records(report.ptr)
            << " failures=" << failures << " bench_csv=" << (fs::path(o.out) / "bench.csv").string();
  if (ofdmrx_bench_report_wrote_speedup(report.ptr)) {
    std::cout << " speedup_csv=" << (fs::path(o.out) / "speedup.csv").string();
  }
  std::cout << "\n";
  if (failures != 0) {
    throw ApiError(OFDMRX_ERR_INCOMPLETE_DATA,
                   std::to_string(failures) + " benchmark cell(s) failed");
  }
}

int report_error(const char* category, const std::string& message, int code) {
  std::string line = message;
  for (char& c : line) {
    if (c == '\n') c = ' ';
  }
  std::cerr << "error category=" << category << " message=" << line << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-antenna OFDM uplink receiver", "ofdmrx"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(ofdmrx_version()));

  Options o;
  std::string snr_text;
  std::string threshold_text;
  uint32_t cp = 0;
  uint32_t workers = 0;
  app.add_option("--fft", o.fft, "FFT length; bench accepts a list such as 64,1024");
  app.add_option("--cp", cp, "Cyclic prefix length (default: canonical for the FFT length)");
  app.add_option("--antennas", o.antennas, "Receive antennas: 4, 1-16 or 1,2,4");
  app.add_option("--qam", o.qam, "Constellation size: 4, 16 or 64");
  app.add_option("--snr-db", snr_text, "Per-antenna received SNR in dB (default: noiseless)");
  app.add_option("--channel-mode", o.channel_mode,
                 "identity, fixed_gains, flat_rayleigh or multipath");
  app.add_option("--engine", o.engine, "sequential or data_parallel; bench also accepts both");
  app.add_option("--workers", workers, "Worker threads for data_parallel");
  app.add_option("--seed", o.seed, "Seed for payload, pilot and channel draws");
  app.add_option("--out", o.out, "Output directory");

  CLI::App* generate = app.add_subcommand("generate", "Write a transmit frame");
  generate->add_option("--payload", o.payload, "QAM samples in the payload");

  CLI::App* channel = app.add_subcommand("channel", "Pass a transmit frame through the channel");
  channel->add_option("--in", o.in, "Directory written by generate")->required();
  channel->add_option("--offset", o.offset, "Noise-only samples before the frame");
  channel->add_option("--gains", o.gains, "fixed_gains values as re,im;re,im");
  channel->add_option("--taps", o.taps, "multipath taps per antenna");

  CLI::App* receive = app.add_subcommand("receive", "Detect and demodulate a capture");
  receive->add_option("--in", o.in, "Directory written by channel")->required();
  receive->add_option("--truth", o.truth, "Truth bits (default: <in>/tx_bits.u8 when present)");
  receive->add_option("--threshold", threshold_text, "Detection threshold in [0, 1]");
  receive->add_flag("--quiet", o.quiet, "Only print the detection and summary lines");

  CLI::App* bench = app.add_subcommand("bench", "Sweep antennas x FFT length x engine");
  bench->add_option("--reps", o.reps, "Timed repetitions per cell");
  bench->add_option("--payload", o.payload, "QAM samples in the payload");
  bench->add_option("--offset", o.offset, "Noise-only samples before the frame");
  bench->add_option("--gains", o.gains, "fixed_gains values as re,im;re,im");
  bench->add_option("--taps", o.taps, "multipath taps per antenna");
  bench->add_flag("--quiet", o.quiet, "Suppress per-cell progress");

  CLI::App* e2e = app.add_subcommand("e2e", "generate, channel and receive in one pass");
  e2e->add_option("--payload", o.payload, "QAM samples in the payload");
  e2e->add_option("--offset", o.offset, "Noise-only samples before the frame");
  e2e->add_option("--gains", o.gains, "fixed_gains values as re,im;re,im");
  e2e->add_option("--taps", o.taps, "multipath taps per antenna");
  e2e->add_option("--threshold", threshold_text, "Detection threshold in [0, 1]");
  e2e->add_flag("--quiet", o.quiet, "Only print the detection and summary lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), kExitUsage);
  }

  try {
    if (app.count("--cp")) o.cp = cp;
    o.fft_given = app.count("--fft") != 0;
    o.antennas_given = app.count("--antennas") != 0;
    o.offset_given = bench->count("--offset") != 0;
    if (app.count("--workers")) o.workers = workers;
    if (!snr_text.empty()) o.snr_db = parse_f64(snr_text, "--snr-db");
    if (!threshold_text.empty()) o.threshold = parse_f64(threshold_text, "--threshold");

    if (generate->parsed()) cmd_generate(o);
    if (channel->parsed()) cmd_channel(o);
    if (receive->parsed()) cmd_receive(o);
    if (bench->parsed()) cmd_bench(o);
    if (e2e->parsed()) cmd_e2e(o);
  } catch (const UsageError& e) {
    return report_error("usage", e.what(), kExitUsage);
  } catch (const ApiError& e) {
    return report_error(ofdmrx_status_name(e.status), e.what(), kExitFailure);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kExitFailure);
  }
  return 0;
}
