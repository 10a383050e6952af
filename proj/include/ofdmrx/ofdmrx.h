/*
 * SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef OFDMRX_OFDMRX_H
#define OFDMRX_OFDMRX_H

/*
 * C interface to the ofdmrx multi-antenna OFDM uplink receiver.
 *
 * Objects are opaque handles created by ofdmrx_*_generate/_load/_run
 * functions and released with the matching ofdmrx_*_free. Every fallible
 * call returns an ofdmrx_status; on failure ofdmrx_last_error() holds a
 * one-line description for the calling thread until its next failing call.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(OFDMRX_BUILDING_LIBRARY)
#    define OFDMRX_API __declspec(dllexport)
#  else
#    define OFDMRX_API __declspec(dllimport)
#  endif
#else
#  define OFDMRX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ofdmrx_status {
  OFDMRX_OK = 0,
  OFDMRX_ERR_CONFIG = 1,
  OFDMRX_ERR_NUMERIC_INPUT = 2,
  OFDMRX_ERR_FRAMING = 3,
  OFDMRX_ERR_CONTRACT = 4,
  OFDMRX_ERR_LIFECYCLE = 5,
  OFDMRX_ERR_BACKPRESSURE = 6,
  OFDMRX_ERR_PIPELINE_ORDER = 7,
  OFDMRX_ERR_INPUT = 8,
  OFDMRX_ERR_IO = 9,
  OFDMRX_ERR_MEASUREMENT = 10,
  OFDMRX_ERR_INCOMPLETE_DATA = 11,
  OFDMRX_ERR_INTERNAL = 12
} ofdmrx_status;

/* Stable lower-case category name, e.g. "config" or "io". */
OFDMRX_API const char* ofdmrx_status_name(ofdmrx_status status);
OFDMRX_API const char* ofdmrx_last_error(void);
OFDMRX_API const char* ofdmrx_version(void);

/* ---- configuration ---------------------------------------------------- */

typedef struct ofdmrx_config {
  uint32_t fft_len;     /* subcarriers, power of two */
  uint32_t cp_len;      /* cyclic prefix samples, < fft_len */
  uint32_t n_antennas;  /* receive antennas */
  uint32_t qam_order;   /* 4, 16 or 64 */
  uint32_t pn_len;      /* 2^r - 1 */
  double sample_rate_hz;
} ofdmrx_config;

/* CP 16 for 64 subcarriers, 72 for 1024, fft_len/4 otherwise; QPSK;
 * 255-chip PN; 10 MHz. */
OFDMRX_API void ofdmrx_config_canonical(uint32_t fft_len, uint32_t n_antennas,
                                        ofdmrx_config* out);
OFDMRX_API ofdmrx_status ofdmrx_config_validate(const ofdmrx_config* cfg);

/* ---- transmitted frames ----------------------------------------------- */

typedef struct ofdmrx_frame ofdmrx_frame;

OFDMRX_API ofdmrx_status ofdmrx_frame_generate(const ofdmrx_config* cfg,
                                               uint64_t payload_qam_samples, uint64_t seed,
                                               ofdmrx_frame** out);
/* Writes tx.cf32, tx.meta and tx_bits.u8 into dir (created if needed). */
OFDMRX_API ofdmrx_status ofdmrx_frame_save(const ofdmrx_frame* frame, const char* dir);
OFDMRX_API ofdmrx_status ofdmrx_frame_load(const char* dir, ofdmrx_frame** out);
OFDMRX_API void ofdmrx_frame_config(const ofdmrx_frame* frame, ofdmrx_config* out);
OFDMRX_API uint64_t ofdmrx_frame_num_samples(const ofdmrx_frame* frame);
OFDMRX_API uint64_t ofdmrx_frame_num_data_symbols(const ofdmrx_frame* frame);
/* Payload bits (0/1 bytes). Valid until the frame is freed; NULL/0 when a
 * loaded frame had no tx_bits.u8. */
OFDMRX_API void ofdmrx_frame_bits(const ofdmrx_frame* frame, const uint8_t** bits,
                                  size_t* n_bits);
OFDMRX_API void ofdmrx_frame_free(ofdmrx_frame* frame);

/* Reads a one-byte-per-bit file. Release with ofdmrx_bits_free. */
OFDMRX_API ofdmrx_status ofdmrx_bits_load(const char* path, uint8_t** bits, size_t* n_bits);
OFDMRX_API void ofdmrx_bits_free(uint8_t* bits);

/* ---- channel ------------------------------------------------------------ */

typedef enum ofdmrx_channel_mode {
  OFDMRX_CHANNEL_IDENTITY = 0,
  OFDMRX_CHANNEL_FIXED_GAINS = 1,
  OFDMRX_CHANNEL_FLAT_RAYLEIGH = 2,
  OFDMRX_CHANNEL_MULTIPATH = 3
} ofdmrx_channel_mode;

typedef struct ofdmrx_channel_params {
  ofdmrx_channel_mode mode;
  int noiseless;            /* nonzero: no AWGN, snr_db ignored */
  double snr_db;            /* per-antenna received SNR */
  uint64_t timing_offset;   /* noise-only samples before the frame */
  uint64_t seed;
  const double* gains;      /* fixed gains, interleaved re/im */
  size_t n_gains;           /* complex entries; 1 is replicated to every antenna */
  uint32_t n_taps;          /* multipath: random taps per antenna, < cp_len */
} ofdmrx_channel_params;

OFDMRX_API void ofdmrx_channel_params_default(ofdmrx_channel_params* out);
OFDMRX_API ofdmrx_status ofdmrx_channel_mode_parse(const char* name, ofdmrx_channel_mode* out);

typedef struct ofdmrx_capture ofdmrx_capture;

/* n_antennas == 0 keeps the frame configuration's antenna count. */
OFDMRX_API ofdmrx_status ofdmrx_apply_channel(const ofdmrx_frame* frame, uint32_t n_antennas,
                                              const ofdmrx_channel_params* params,
                                              ofdmrx_capture** out);
/* Writes rx_ant<k>.cf32 per antenna and rx.meta into dir. */
OFDMRX_API ofdmrx_status ofdmrx_capture_save(const ofdmrx_capture* capture, const char* dir);
OFDMRX_API ofdmrx_status ofdmrx_capture_load(const char* dir, ofdmrx_capture** out);
OFDMRX_API void ofdmrx_capture_config(const ofdmrx_capture* capture, ofdmrx_config* out);
OFDMRX_API uint64_t ofdmrx_capture_num_samples(const ofdmrx_capture* capture);
OFDMRX_API void ofdmrx_capture_free(ofdmrx_capture* capture);

/* ---- receiver ----------------------------------------------------------- */

typedef enum ofdmrx_engine {
  OFDMRX_ENGINE_SEQUENTIAL = 0,
  OFDMRX_ENGINE_DATA_PARALLEL = 1
} ofdmrx_engine;

OFDMRX_API ofdmrx_status ofdmrx_engine_parse(const char* name, ofdmrx_engine* out);

typedef struct ofdmrx_receive_params {
  ofdmrx_engine engine;
  uint32_t workers;        /* data_parallel only; 0: hardware threads, capped at 8 */
  double threshold;        /* normalized detection threshold, default 0.6 */
  uint32_t ring_capacity;  /* power of two, default 64 */
} ofdmrx_receive_params;

OFDMRX_API void ofdmrx_receive_params_default(ofdmrx_receive_params* out);

typedef struct ofdmrx_result ofdmrx_result;

typedef struct ofdmrx_detection {
  int detected;
  uint64_t frame_start;
  uint64_t symbol0_offset;
  double peak_metric;
} ofdmrx_detection;

typedef struct ofdmrx_symbol_summary {
  uint64_t seq_no;
  int is_pilot;
  int has_ber;
  double ber;
  int has_evm;
  double evm_db;
  uint64_t bit_errors;
  uint64_t n_bits;
} ofdmrx_symbol_summary;

typedef struct ofdmrx_stage_timings {
  int is_pilot;
  int64_t read_ns;
  int64_t cp_drop_ns;
  int64_t fft_ns;
  int64_t equalize_ns; /* LS for the pilot, MRC for data */
} ofdmrx_stage_timings;

typedef struct ofdmrx_result_summary {
  int has_ber;
  double ber;
  uint64_t bit_errors;
  uint64_t n_bits;
  double evm_db;
  uint64_t n_data_symbols;
  uint64_t erased_subcarriers;
} ofdmrx_result_summary;

/* Detects the packet, streams its symbols through the ring into the
 * receiver and scores the result. truth_bits may be NULL; NULL params
 * selects the defaults. When no packet
 * is found the call fails with OFDMRX_ERR_INPUT. */
OFDMRX_API ofdmrx_status ofdmrx_receive(const ofdmrx_capture* capture, const uint8_t* truth_bits,
                                        size_t n_truth_bits, const ofdmrx_receive_params* params,
                                        ofdmrx_result** out);
OFDMRX_API void ofdmrx_result_detection(const ofdmrx_result* result, ofdmrx_detection* out);
OFDMRX_API void ofdmrx_result_summary_get(const ofdmrx_result* result, ofdmrx_result_summary* out);
/* Pilot first, then every data symbol. */
OFDMRX_API size_t ofdmrx_result_num_symbols(const ofdmrx_result* result);
OFDMRX_API ofdmrx_status ofdmrx_result_symbol(const ofdmrx_result* result, size_t index,
                                              ofdmrx_symbol_summary* out);
OFDMRX_API ofdmrx_status ofdmrx_result_timings(const ofdmrx_result* result, size_t index,
                                               ofdmrx_stage_timings* out);
/* Copies up to capacity payload bits into out; returns the total count. */
OFDMRX_API size_t ofdmrx_result_bits(const ofdmrx_result* result, uint8_t* out, size_t capacity);
/* Binary demodulated-output file, layout documented in docs/formats.md. */
OFDMRX_API ofdmrx_status ofdmrx_result_save_demod(const ofdmrx_result* result, const char* path);
OFDMRX_API void ofdmrx_result_free(ofdmrx_result* result);

/* ---- benchmark ---------------------------------------------------------- */

typedef void (*ofdmrx_progress_fn)(const char* line, void* user);

typedef struct ofdmrx_bench_params {
  const uint32_t* antenna_counts; /* NULL: 1..16 */
  size_t n_antenna_counts;
  const uint32_t* fft_lens;       /* NULL: 64, 1024 */
  size_t n_fft_lens;
  int run_sequential;
  int run_data_parallel;
  uint32_t workers;               /* 0: hardware threads, capped at 8 */
  uint32_t repetitions;
  uint64_t payload_qam_samples;
  uint32_t qam_order;
  ofdmrx_channel_params channel;
  uint64_t seed;
  ofdmrx_progress_fn progress;    /* optional */
  void* progress_user;
} ofdmrx_bench_params;

OFDMRX_API void ofdmrx_bench_params_default(ofdmrx_bench_params* out);

typedef struct ofdmrx_bench_report ofdmrx_bench_report;

/* Runs the sweep and writes bench.csv, plus speedup.csv when both engines
 * ran, into out_dir. Failed cells are reported, not fatal. */
OFDMRX_API ofdmrx_status ofdmrx_bench_run(const ofdmrx_bench_params* params, const char* out_dir,
                                          ofdmrx_bench_report** out);
OFDMRX_API size_t ofdmrx_bench_report_num_cells(const ofdmrx_bench_report* report);
OFDMRX_API size_t ofdmrx_bench_report_num_records(const ofdmrx_bench_report* report);
OFDMRX_API size_t ofdmrx_bench_report_num_failures(const ofdmrx_bench_report* report);
OFDMRX_API const char* ofdmrx_bench_report_failure(const ofdmrx_bench_report* report, size_t index);
OFDMRX_API int ofdmrx_bench_report_wrote_speedup(const ofdmrx_bench_report* report);
OFDMRX_API void ofdmrx_bench_report_free(ofdmrx_bench_report* report);

/* n_antennas * bandwidth_hz * bytes_per_complex_sample * 8, in bit/s. */
OFDMRX_API ofdmrx_status ofdmrx_frontend_throughput(double n_antennas, double bandwidth_hz,
                                                    double bytes_per_complex_sample,
                                                    double* bits_per_second);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OFDMRX_OFDMRX_H */
