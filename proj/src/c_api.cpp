// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include "ofdmrx/ofdmrx.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "ofdmrx/bench.hpp"
#include "ofdmrx/channel.hpp"
#include "ofdmrx/io_formats.hpp"
#include "ofdmrx/pipeline.hpp"
#include "ofdmrx/sync.hpp"
#include "ofdmrx/waveform.hpp"

struct ofdmrx_frame {
  ofdmrx::TxRecord record;
};

struct ofdmrx_capture {
  ofdmrx::RxCapture capture;
};

struct ofdmrx_result {
  ofdmrx::OfdmConfig cfg;
  ofdmrx::FrameLayout layout;
  ofdmrx::DetectionResult detection;
  ofdmrx::ReceiveRun run;
  ofdmrx::ReceiveScore score;
  ofdmrx::Bits bits;
};

struct ofdmrx_bench_report {
  ofdmrx::BenchReport report;
  std::vector<std::string> failures;
  bool wrote_speedup = false;
};

namespace {

using namespace ofdmrx;

thread_local std::string g_last_error;

ofdmrx_status set_error(ofdmrx_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn and converts exceptions into status codes.
template <typename Fn>
ofdmrx_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return OFDMRX_OK;
  } catch (const Error& e) {
    return set_error(static_cast<ofdmrx_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(OFDMRX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(OFDMRX_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(OFDMRX_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  require(p != nullptr, ErrorCode::contract, std::string(what) + " is NULL");
}

OfdmConfig from_c(const ofdmrx_config& c) {
  OfdmConfig cfg;
  cfg.fft_len = c.fft_len;
  cfg.cp_len = c.cp_len;
  cfg.n_antennas = c.n_antennas;
  cfg.qam_order = c.qam_order;
  cfg.pn_len = c.pn_len;
  cfg.sample_rate_hz = c.sample_rate_hz;
  return cfg;
}

void to_c(const OfdmConfig& cfg, ofdmrx_config* out) {
  out->fft_len = static_cast<uint32_t>(cfg.fft_len);
  out->cp_len = static_cast<uint32_t>(cfg.cp_len);
  out->n_antennas = static_cast<uint32_t>(cfg.n_antennas);
  out->qam_order = cfg.qam_order;
  out->pn_len = static_cast<uint32_t>(cfg.pn_len);
  out->sample_rate_hz = cfg.sample_rate_hz;
}

ChannelModel model_from_c(const ofdmrx_channel_params& p, std::size_t n_antennas) {
  ChannelModel m;
  switch (p.mode) {
    case OFDMRX_CHANNEL_IDENTITY:
      m = ChannelModel::identity();
      break;
    case OFDMRX_CHANNEL_FIXED_GAINS: {
      require(p.gains != nullptr && p.n_gains > 0, ErrorCode::config,
              "fixed_gains channel needs at least one gain");
      std::vector<cplx> gains;
      for (std::size_t i = 0; i < p.n_gains; ++i) gains.emplace_back(p.gains[2 * i], p.gains[2 * i + 1]);
      if (gains.size() == 1) gains.assign(n_antennas, gains.front());
      m = ChannelModel::fixed(std::move(gains));
      break;
    }
    case OFDMRX_CHANNEL_FLAT_RAYLEIGH:
      m = ChannelModel::rayleigh(std::nullopt, p.seed);
      break;
    case OFDMRX_CHANNEL_MULTIPATH:
      m = ChannelModel::random_multipath(n_antennas, p.n_taps, p.seed);
      break;
    default:
      fail(ErrorCode::config, "unknown channel mode " + std::to_string(static_cast<int>(p.mode)));
  }
  if (!p.noiseless) m.snr_db = p.snr_db;
  m.timing_offset = p.timing_offset;
  m.rng_seed = p.seed;
  return m;
}

}  // namespace

extern "C" {

const char* ofdmrx_status_name(ofdmrx_status status) {
  if (status == OFDMRX_OK) return "ok";
  if (status < OFDMRX_ERR_CONFIG || status > OFDMRX_ERR_INTERNAL) return "internal";
  return error_code_name(static_cast<ErrorCode>(status)).data();
}

const char* ofdmrx_last_error(void) { return g_last_error.c_str(); }

const char* ofdmrx_version(void) { return "0.1.0"; }

void ofdmrx_config_canonical(uint32_t fft_len, uint32_t n_antennas, ofdmrx_config* out) {
  if (out) to_c(OfdmConfig::canonical(fft_len, n_antennas), out);
}

ofdmrx_status ofdmrx_config_validate(const ofdmrx_config* cfg) {
  return guarded([&] {
    need(cfg, "cfg");
    from_c(*cfg).validate();
  });
}

ofdmrx_status ofdmrx_frame_generate(const ofdmrx_config* cfg, uint64_t payload_qam_samples,
                                    uint64_t seed, ofdmrx_frame** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    const OfdmFrame frame = generate_frame(from_c(*cfg), payload_qam_samples, seed);
    auto handle = std::make_unique<ofdmrx_frame>();
    handle->record.cfg = frame.cfg;
    handle->record.layout = frame.layout;
    handle->record.samples = frame.samples();
    handle->record.bits = frame.tx_bits;
    *out = handle.release();
  });
}

ofdmrx_status ofdmrx_frame_save(const ofdmrx_frame* frame, const char* dir) {
  return guarded([&] {
    need(frame, "frame");
    need(dir, "dir");
    save_frame(frame->record, dir);
  });
}

ofdmrx_status ofdmrx_frame_load(const char* dir, ofdmrx_frame** out) {
  return guarded([&] {
    need(dir, "dir");
    need(out, "out");
    auto handle = std::make_unique<ofdmrx_frame>();
    handle->record = load_frame(dir);
    *out = handle.release();
  });
}

void ofdmrx_frame_config(const ofdmrx_frame* frame, ofdmrx_config* out) {
  if (frame && out) to_c(frame->record.cfg, out);
}

uint64_t ofdmrx_frame_num_samples(const ofdmrx_frame* frame) {
  return frame ? frame->record.samples.size() : 0;
}

uint64_t ofdmrx_frame_num_data_symbols(const ofdmrx_frame* frame) {
  return frame ? frame->record.layout.n_data_symbols : 0;
}

void ofdmrx_frame_bits(const ofdmrx_frame* frame, const uint8_t** bits, size_t* n_bits) {
  if (bits) *bits = frame && !frame->record.bits.empty() ? frame->record.bits.data() : nullptr;
  if (n_bits) *n_bits = frame ? frame->record.bits.size() : 0;
}

void ofdmrx_frame_free(ofdmrx_frame* frame) { delete frame; }

ofdmrx_status ofdmrx_bits_load(const char* path, uint8_t** bits, size_t* n_bits) {
  return guarded([&] {
    need(path, "path");
    need(bits, "bits");
    need(n_bits, "n_bits");
    const Bits loaded = read_bits(path);
    auto* buf = static_cast<uint8_t*>(std::malloc(loaded.empty() ? 1 : loaded.size()));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, loaded.data(), loaded.size());
    *bits = buf;
    *n_bits = loaded.size();
  });
}

void ofdmrx_bits_free(uint8_t* bits) { std::free(bits); }

void ofdmrx_channel_params_default(ofdmrx_channel_params* out) {
  if (!out) return;
  *out = ofdmrx_channel_params{};
  out->mode = OFDMRX_CHANNEL_IDENTITY;
  out->noiseless = 1;
  out->snr_db = 20.0;
  out->timing_offset = 0;
  out->seed = 1;
  out->n_taps = 4;
}

ofdmrx_status ofdmrx_channel_mode_parse(const char* name, ofdmrx_channel_mode* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<ofdmrx_channel_mode>(parse_channel_mode(name));
  });
}

ofdmrx_status ofdmrx_apply_channel(const ofdmrx_frame* frame, uint32_t n_antennas,
                                   const ofdmrx_channel_params* params, ofdmrx_capture** out) {
  return guarded([&] {
    need(frame, "frame");
    need(params, "params");
    need(out, "out");
    OfdmConfig cfg = frame->record.cfg;
    if (n_antennas != 0) cfg.n_antennas = n_antennas;
    cfg.validate();
    const ChannelModel model = model_from_c(*params, cfg.n_antennas);
    auto handle = std::make_unique<ofdmrx_capture>();
    handle->capture = apply_channel(frame->record.samples, frame->record.layout, model, cfg);
    *out = handle.release();
  });
}

ofdmrx_status ofdmrx_capture_save(const ofdmrx_capture* capture, const char* dir) {
  return guarded([&] {
    need(capture, "capture");
    need(dir, "dir");
    save_capture(capture->capture, dir);
  });
}

ofdmrx_status ofdmrx_capture_load(const char* dir, ofdmrx_capture** out) {
  return guarded([&] {
    need(dir, "dir");
    need(out, "out");
    auto handle = std::make_unique<ofdmrx_capture>();
    handle->capture = load_capture(dir);
    *out = handle.release();
  });
}

void ofdmrx_capture_config(const ofdmrx_capture* capture, ofdmrx_config* out) {
  if (capture && out) to_c(capture->capture.cfg, out);
}

uint64_t ofdmrx_capture_num_samples(const ofdmrx_capture* capture) {
  return capture ? capture->capture.length() : 0;
}

void ofdmrx_capture_free(ofdmrx_capture* capture) { delete capture; }

ofdmrx_status ofdmrx_engine_parse(const char* name, ofdmrx_engine* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = parse_engine(name) == EngineVariant::sequential ? OFDMRX_ENGINE_SEQUENTIAL
                                                           : OFDMRX_ENGINE_DATA_PARALLEL;
  });
}

void ofdmrx_receive_params_default(ofdmrx_receive_params* out) {
  if (!out) return;
  out->engine = OFDMRX_ENGINE_SEQUENTIAL;
  out->workers = 0;
  out->threshold = kDefaultDetectionThreshold;
  out->ring_capacity = static_cast<uint32_t>(kDefaultRingCapacity);
}

ofdmrx_status ofdmrx_receive(const ofdmrx_capture* capture, const uint8_t* truth_bits,
                             size_t n_truth_bits, const ofdmrx_receive_params* params,
                             ofdmrx_result** out) {
  return guarded([&] {
    need(capture, "capture");
    need(out, "out");
    ofdmrx_receive_params defaults;
    ofdmrx_receive_params_default(&defaults);
    if (!params) params = &defaults;
    const RxCapture& cap = capture->capture;
    cap.validate();
    require(params->threshold >= 0.0 && params->threshold <= 1.0, ErrorCode::config,
            "detection threshold must lie in [0, 1]");

    auto handle = std::make_unique<ofdmrx_result>();
    handle->cfg = cap.cfg;
    handle->layout = cap.layout;
    const PnSequence pn = generate_pn(cap.layout.pn_taps, cap.layout.pn_seed, cap.cfg.pn_len);
    handle->detection = detect_packet(cap, pn, params->threshold);
    require(handle->detection.detected, ErrorCode::input,
            "no packet detected: peak metric " + format_double(handle->detection.peak_metric) +
                " below threshold " + format_double(params->threshold));

    ReceiveOptions options;
    options.engine = params->engine == OFDMRX_ENGINE_DATA_PARALLEL
                         ? EngineKind::data_parallel(
                               params->workers ? params->workers : default_worker_count())
                         : EngineKind::sequential();
    options.ring_capacity = params->ring_capacity;
    handle->run = run_receiver(cap, handle->detection.symbol0_offset, options);

    Bits truth;
    if (truth_bits) truth.assign(truth_bits, truth_bits + n_truth_bits);
    handle->score = score_run(handle->run, cap.cfg, cap.layout, truth_bits ? &truth : nullptr);
    handle->bits = payload_bits(handle->run, cap.cfg, cap.layout);
    *out = handle.release();
  });
}

void ofdmrx_result_detection(const ofdmrx_result* result, ofdmrx_detection* out) {
  if (!result || !out) return;
  out->detected = result->detection.detected ? 1 : 0;
  out->frame_start = result->detection.frame_start;
  out->symbol0_offset = result->detection.symbol0_offset;
  out->peak_metric = result->detection.peak_metric;
}

void ofdmrx_result_summary_get(const ofdmrx_result* result, ofdmrx_result_summary* out) {
  if (!result || !out) return;
  const ReceiveScore& s = result->score;
  out->has_ber = s.ber ? 1 : 0;
  out->ber = s.ber.value_or(0.0);
  out->bit_errors = s.bit_errors;
  out->n_bits = s.n_bits;
  out->evm_db = s.evm_db;
  out->n_data_symbols = result->run.data.size();
  std::uint64_t erased = 0;
  for (const auto& d : result->run.data) erased += d.combined->erased;
  out->erased_subcarriers = erased;
}

size_t ofdmrx_result_num_symbols(const ofdmrx_result* result) {
  return result ? result->score.symbols.size() : 0;
}

ofdmrx_status ofdmrx_result_symbol(const ofdmrx_result* result, size_t index,
                                   ofdmrx_symbol_summary* out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    require(index < result->score.symbols.size(), ErrorCode::contract,
            "symbol index " + std::to_string(index) + " out of range");
    const SymbolScore& s = result->score.symbols[index];
    out->seq_no = s.seq_no;
    out->is_pilot = s.kind == SlotKind::pilot ? 1 : 0;
    out->has_ber = s.ber ? 1 : 0;
    out->ber = s.ber.value_or(0.0);
    out->has_evm = s.evm_db ? 1 : 0;
    out->evm_db = s.evm_db.value_or(0.0);
    out->bit_errors = s.bit_errors;
    out->n_bits = s.n_bits;
  });
}

ofdmrx_status ofdmrx_result_timings(const ofdmrx_result* result, size_t index,
                                    ofdmrx_stage_timings* out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    require(index <= result->run.data.size(), ErrorCode::contract,
            "symbol index " + std::to_string(index) + " out of range");
    const StageTimings& t =
        index == 0 ? result->run.pilot_timings : result->run.data[index - 1].timings;
    out->is_pilot = index == 0 ? 1 : 0;
    out->read_ns = t.read.count();
    out->cp_drop_ns = t.cp_drop.count();
    out->fft_ns = t.fft.count();
    out->equalize_ns = t.equalize.count();
  });
}

size_t ofdmrx_result_bits(const ofdmrx_result* result, uint8_t* out, size_t capacity) {
  if (!result) return 0;
  if (out) std::memcpy(out, result->bits.data(), std::min(capacity, result->bits.size()));
  return result->bits.size();
}

ofdmrx_status ofdmrx_result_save_demod(const ofdmrx_result* result, const char* path) {
  return guarded([&] {
    need(result, "result");
    need(path, "path");
    write_demod(path, result->run, result->cfg, result->layout);
  });
}

void ofdmrx_result_free(ofdmrx_result* result) { delete result; }

void ofdmrx_bench_params_default(ofdmrx_bench_params* out) {
  if (!out) return;
  *out = ofdmrx_bench_params{};
  out->run_sequential = 1;
  out->run_data_parallel = 1;
  out->workers = 0;
  out->repetitions = 1;
  out->payload_qam_samples = 100000;
  out->qam_order = 4;
  ofdmrx_channel_params_default(&out->channel);
  out->channel.mode = OFDMRX_CHANNEL_FLAT_RAYLEIGH;
  out->channel.noiseless = 0;
  out->channel.snr_db = 20.0;
  out->channel.timing_offset = 500;
  out->seed = 1;
}

ofdmrx_status ofdmrx_bench_run(const ofdmrx_bench_params* params, const char* out_dir,
                               ofdmrx_bench_report** out) {
  return guarded([&] {
    need(params, "params");
    need(out_dir, "out_dir");
    need(out, "out");
    ExperimentMatrix matrix = ExperimentMatrix::defaults();
    if (params->antenna_counts) {
      matrix.antenna_counts.assign(params->antenna_counts,
                                   params->antenna_counts + params->n_antenna_counts);
    }
    if (params->fft_lens) {
      matrix.fft_lens.assign(params->fft_lens, params->fft_lens + params->n_fft_lens);
    }
    matrix.engines.clear();
    if (params->run_sequential) matrix.engines.push_back(EngineVariant::sequential);
    if (params->run_data_parallel) matrix.engines.push_back(EngineVariant::data_parallel);
    if (params->workers != 0) matrix.workers = params->workers;
    matrix.repetitions = params->repetitions;
    matrix.payload_qam_samples = params->payload_qam_samples;
    matrix.qam_order = params->qam_order;
    matrix.validate();

    const ofdmrx_channel_params channel = params->channel;
    std::vector<double> gains;
    if (channel.gains) gains.assign(channel.gains, channel.gains + 2 * channel.n_gains);
    ChannelFactory factory = [channel, gains](std::size_t n) {
      ofdmrx_channel_params p = channel;
      p.gains = gains.empty() ? nullptr : gains.data();
      return model_from_c(p, n);
    };
    // Reject a bad channel before the sweep starts.
    for (std::size_t n : matrix.antenna_counts) {
      factory(n).validate(OfdmConfig::canonical(matrix.fft_lens.front(), n, matrix.qam_order));
    }

    BenchProgress progress;
    if (params->progress) {
      progress = [fn = params->progress, user = params->progress_user](const std::string& line) {
        fn(line.c_str(), user);
      };
    }

    auto handle = std::make_unique<ofdmrx_bench_report>();
    handle->report = run_matrix(matrix, factory, params->seed, progress);
    for (const auto& f : handle->report.failures) {
      handle->failures.push_back("fft_len=" + std::to_string(f.fft_len) + " n_antennas=" +
                                 std::to_string(f.n_antennas) + " engine=" + f.engine + ": " +
                                 f.reason);
    }

    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(!ec, ErrorCode::io, "cannot create directory '" + dir.string() + "': " + ec.message());
    auto write_text = [](const std::filesystem::path& path, const std::string& text) {
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      require(static_cast<bool>(f), ErrorCode::io, "cannot open '" + path.string() + "' for writing");
      f << text;
      require(static_cast<bool>(f), ErrorCode::io, "write to '" + path.string() + "' failed");
    };
    write_text(dir / "bench.csv", bench_to_csv(handle->report.records));
    if (params->run_sequential && params->run_data_parallel && !handle->report.records.empty()) {
      write_text(dir / "speedup.csv", speedup_to_csv(speedup_table(handle->report.records)));
      handle->wrote_speedup = true;
    }
    *out = handle.release();
  });
}

size_t ofdmrx_bench_report_num_cells(const ofdmrx_bench_report* report) {
  return report ? report->report.cells_completed : 0;
}

size_t ofdmrx_bench_report_num_records(const ofdmrx_bench_report* report) {
  return report ? report->report.records.size() : 0;
}

size_t ofdmrx_bench_report_num_failures(const ofdmrx_bench_report* report) {
  return report ? report->failures.size() : 0;
}

const char* ofdmrx_bench_report_failure(const ofdmrx_bench_report* report, size_t index) {
  if (!report || index >= report->failures.size()) return nullptr;
  return report->failures[index].c_str();
}

int ofdmrx_bench_report_wrote_speedup(const ofdmrx_bench_report* report) {
  return report && report->wrote_speedup ? 1 : 0;
}

void ofdmrx_bench_report_free(ofdmrx_bench_report* report) { delete report; }

ofdmrx_status ofdmrx_frontend_throughput(double n_antennas, double bandwidth_hz,
                                         double bytes_per_complex_sample, double* bits_per_second) {
  return guarded([&] {
    need(bits_per_second, "bits_per_second");
    *bits_per_second = frontend_throughput(n_antennas, bandwidth_hz, bytes_per_complex_sample);
  });
}

}  // extern "C"
