// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include "ofdmrx/io_formats.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "ofdmrx/numerics.hpp"

namespace ofdmrx {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little,
              "on-disk formats are little-endian; big-endian hosts need byte swapping");

std::string rx_antenna_file(std::size_t antenna) {
  return "rx_ant" + std::to_string(antenna) + ".cf32";
}

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::io, "cannot open '" + path.string() + "' for reading");
  return in;
}

void finish_write(std::ofstream& out, const fs::path& path) {
  out.flush();
  require(static_cast<bool>(out), ErrorCode::io, "write to '" + path.string() + "' failed");
}

std::string read_all(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get(std::istream& in, const fs::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  require(static_cast<bool>(in), ErrorCode::input, "'" + path.string() + "' is truncated");
  return value;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, ErrorCode::io, "cannot create directory '" + dir.string() + "': " + ec.message());
}

}  // namespace

void write_cf32(const fs::path& path, std::span<const cplx> samples) {
  std::vector<float> buf(samples.size() * 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    buf[2 * i] = static_cast<float>(samples[i].real());
    buf[2 * i + 1] = static_cast<float>(samples[i].imag());
  }
  std::ofstream out = open_out(path);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  finish_write(out, path);
}

ComplexVector read_cf32(const fs::path& path) {
  const std::string raw = read_all(path);
  require(raw.size() % (2 * sizeof(float)) == 0, ErrorCode::input,
          "'" + path.string() + "' size is not a whole number of cf32 samples");
  const std::size_t n = raw.size() / (2 * sizeof(float));
  std::vector<float> buf(2 * n);
  std::memcpy(buf.data(), raw.data(), raw.size());
  ComplexVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {buf[2 * i], buf[2 * i + 1]};
  require(all_finite(out), ErrorCode::input, "'" + path.string() + "' contains NaN or Inf");
  return out;
}

void write_bits(const fs::path& path, std::span<const std::uint8_t> bits) {
  std::ofstream out = open_out(path);
  out.write(reinterpret_cast<const char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
  finish_write(out, path);
}

Bits read_bits(const fs::path& path) {
  const std::string raw = read_all(path);
  Bits bits(raw.begin(), raw.end());
  for (auto b : bits) {
    require(b <= 1, ErrorCode::input, "'" + path.string() + "' holds a byte other than 0 or 1");
  }
  return bits;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  require(res.ec == std::errc{} && res.ptr == text.data() + text.size(), ErrorCode::input,
          "'" + std::string(text) + "' is not a number");
  return v;
}

void Metadata::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

void Metadata::set(std::string key, double value) { set(std::move(key), format_double(value)); }

void Metadata::set(std::string key, std::uint64_t value) {
  set(std::move(key), std::to_string(value));
}

std::optional<std::string> Metadata::get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string Metadata::require(std::string_view key) const {
  auto v = get(key);
  ofdmrx::require(v.has_value(), ErrorCode::input,
                  "metadata key '" + std::string(key) + "' is missing");
  return *v;
}

std::uint64_t Metadata::require_uint(std::string_view key) const {
  const std::string text = require(key);
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  ofdmrx::require(res.ec == std::errc{} && res.ptr == text.data() + text.size(), ErrorCode::input,
                  "metadata key '" + std::string(key) + "' is not an unsigned integer: '" + text + "'");
  return v;
}

double Metadata::require_double(std::string_view key) const { return parse_double(require(key)); }

std::string Metadata::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

Metadata Metadata::parse(std::string_view text) {
  Metadata meta;
  auto trim = [](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return std::string_view{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    ofdmrx::require(eq != std::string_view::npos && eq > 0, ErrorCode::input,
                    "metadata line " + std::to_string(line_no) + " is not key=value");
    const std::string key(trim(line.substr(0, eq)));
    ofdmrx::require(!meta.get(key), ErrorCode::input, "metadata key '" + key + "' is repeated");
    meta.entries_.emplace_back(key, std::string(trim(line.substr(eq + 1))));
  }
  return meta;
}

void write_metadata(const fs::path& path, const Metadata& meta) {
  std::ofstream out = open_out(path);
  const std::string text = meta.serialize();
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  finish_write(out, path);
}

Metadata read_metadata(const fs::path& path) { return Metadata::parse(read_all(path)); }

namespace {

void put_config(Metadata& meta, const OfdmConfig& cfg, const FrameLayout& layout) {
  meta.set("fft_len", std::uint64_t{cfg.fft_len});
  meta.set("cp_len", std::uint64_t{cfg.cp_len});
  meta.set("n_antennas", std::uint64_t{cfg.n_antennas});
  meta.set("qam_order", std::uint64_t{cfg.qam_order});
  meta.set("pn_len", std::uint64_t{cfg.pn_len});
  meta.set("sample_rate_hz", cfg.sample_rate_hz);
  meta.set("pn_taps", std::uint64_t{layout.pn_taps});
  meta.set("pn_seed", std::uint64_t{layout.pn_seed});
  meta.set("pilot_seed", std::uint64_t{layout.pilot_seed});
  meta.set("n_data_symbols", std::uint64_t{layout.n_data_symbols});
  meta.set("payload_qam_samples", std::uint64_t{layout.payload_qam_samples});
  meta.set("pad_len", std::uint64_t{layout.pad_len});
}

void get_config(const Metadata& meta, OfdmConfig& cfg, FrameLayout& layout) {
  cfg.fft_len = meta.require_uint("fft_len");
  cfg.cp_len = meta.require_uint("cp_len");
  cfg.n_antennas = meta.require_uint("n_antennas");
  cfg.qam_order = static_cast<unsigned>(meta.require_uint("qam_order"));
  cfg.pn_len = meta.require_uint("pn_len");
  cfg.sample_rate_hz = meta.require_double("sample_rate_hz");
  layout.pn_taps = static_cast<std::uint32_t>(meta.require_uint("pn_taps"));
  layout.pn_seed = static_cast<std::uint32_t>(meta.require_uint("pn_seed"));
  layout.pilot_seed = meta.require_uint("pilot_seed");
  layout.n_data_symbols = meta.require_uint("n_data_symbols");
  layout.payload_qam_samples = meta.require_uint("payload_qam_samples");
  layout.pad_len = meta.require_uint("pad_len");
  try {
    cfg.validate();
  } catch (const Error& e) {
    fail(ErrorCode::input, std::string("metadata describes an invalid configuration: ") + e.what());
  }
}

void check_version(const Metadata& meta, std::string_view kind, const fs::path& path) {
  const auto version = meta.require_uint("format_version");
  require(version == static_cast<std::uint64_t>(kFormatVersion), ErrorCode::input,
          "'" + path.string() + "' has format_version " + std::to_string(version) +
              ", expected " + std::to_string(kFormatVersion));
  require(meta.require("kind") == kind, ErrorCode::input,
          "'" + path.string() + "' is not a " + std::string(kind) + " sidecar");
}

std::string format_taps(const ComplexVector& taps) {
  std::string out;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    if (i) out += ';';
    out += format_double(taps[i].real()) + "," + format_double(taps[i].imag());
  }
  return out;
}

ComplexVector parse_taps(std::string_view text) {
  ComplexVector taps;
  while (!text.empty()) {
    const auto semi = text.find(';');
    const std::string_view item = text.substr(0, semi);
    const auto comma = item.find(',');
    require(comma != std::string_view::npos, ErrorCode::input,
            "tap '" + std::string(item) + "' is not re,im");
    taps.emplace_back(parse_double(item.substr(0, comma)), parse_double(item.substr(comma + 1)));
    text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
  }
  return taps;
}

}  // namespace

void save_frame(const TxRecord& record, const fs::path& dir) {
  ensure_dir(dir);
  write_cf32(dir / kTxSamplesFile, record.samples);
  write_bits(dir / kTruthBitsFile, record.bits);
  Metadata meta;
  meta.set("format_version", std::uint64_t{kFormatVersion});
  meta.set("kind", std::string("tx_frame"));
  meta.set("sample_format", std::string("cf32le"));
  put_config(meta, record.cfg, record.layout);
  meta.set("n_samples", std::uint64_t{record.samples.size()});
  meta.set("n_bits", std::uint64_t{record.bits.size()});
  write_metadata(dir / kTxMetaFile, meta);
}

void save_frame(const OfdmFrame& frame, const fs::path& dir) {
  save_frame(TxRecord{frame.cfg, frame.layout, frame.samples(), frame.tx_bits}, dir);
}

TxRecord load_frame(const fs::path& dir) {
  const fs::path meta_path = dir / kTxMetaFile;
  require(fs::exists(meta_path), ErrorCode::input, "missing frame sidecar '" + meta_path.string() + "'");
  const Metadata meta = read_metadata(meta_path);
  check_version(meta, "tx_frame", meta_path);
  TxRecord rec;
  get_config(meta, rec.cfg, rec.layout);
  rec.samples = read_cf32(dir / kTxSamplesFile);
  require(rec.samples.size() == meta.require_uint("n_samples"), ErrorCode::input,
          "'" + (dir / kTxSamplesFile).string() + "' has " + std::to_string(rec.samples.size()) +
              " samples, sidecar says " + meta.require("n_samples"));
  const fs::path bits_path = dir / kTruthBitsFile;
  if (fs::exists(bits_path)) rec.bits = read_bits(bits_path);
  return rec;
}

void save_capture(const RxCapture& capture, const fs::path& dir) {
  capture.validate();
  ensure_dir(dir);
  for (std::size_t n = 0; n < capture.streams.size(); ++n) {
    write_cf32(dir / rx_antenna_file(n), capture.streams[n]);
  }
  Metadata meta;
  meta.set("format_version", std::uint64_t{kFormatVersion});
  meta.set("kind", std::string("rx_capture"));
  meta.set("sample_format", std::string("cf32le"));
  put_config(meta, capture.cfg, capture.layout);
  meta.set("n_samples", std::uint64_t{capture.length()});
  if (capture.truth) {
    const ChannelTruth& t = *capture.truth;
    meta.set("truth.frame_start", std::uint64_t{t.frame_start});
    meta.set("truth.symbol0_offset", std::uint64_t{t.symbol0_offset});
    meta.set("truth.channel_mode", std::string(channel_mode_name(t.mode)));
    meta.set("truth.snr_db", t.snr_db ? format_double(*t.snr_db) : std::string("noiseless"));
    meta.set("truth.seed", std::uint64_t{t.rng_seed});
    for (std::size_t n = 0; n < t.taps.size(); ++n) {
      meta.set("truth.ant" + std::to_string(n) + ".taps", format_taps(t.taps[n]));
      meta.set("truth.ant" + std::to_string(n) + ".noise_variance", t.noise_variance[n]);
    }
  }
  write_metadata(dir / kRxMetaFile, meta);
}

RxCapture load_capture(const fs::path& dir) {
  const fs::path meta_path = dir / kRxMetaFile;
  require(fs::exists(meta_path), ErrorCode::input, "missing capture sidecar '" + meta_path.string() + "'");
  const Metadata meta = read_metadata(meta_path);
  check_version(meta, "rx_capture", meta_path);

  RxCapture cap;
  get_config(meta, cap.cfg, cap.layout);
  const std::size_t n_samples = meta.require_uint("n_samples");

  std::string missing;
  std::string expected;
  for (std::size_t n = 0; n < cap.cfg.n_antennas; ++n) {
    const std::string name = rx_antenna_file(n);
    expected += (n ? " " : "") + name;
    if (!fs::exists(dir / name)) missing += (missing.empty() ? "" : " ") + name;
  }
  require(missing.empty(), ErrorCode::input,
          "missing antenna files in '" + dir.string() + "': " + missing + " (expected: " + expected + ")");

  for (std::size_t n = 0; n < cap.cfg.n_antennas; ++n) {
    ComplexVector s = read_cf32(dir / rx_antenna_file(n));
    require(s.size() == n_samples, ErrorCode::input,
            rx_antenna_file(n) + " has " + std::to_string(s.size()) +
                " samples, rx.meta says n_samples=" + std::to_string(n_samples));
    cap.streams.push_back(std::move(s));
  }

  if (meta.get("truth.frame_start")) {
    ChannelTruth t;
    t.frame_start = meta.require_uint("truth.frame_start");
    t.symbol0_offset = meta.require_uint("truth.symbol0_offset");
    t.mode = parse_channel_mode(meta.require("truth.channel_mode"));
    const std::string snr = meta.require("truth.snr_db");
    if (snr != "noiseless") t.snr_db = parse_double(snr);
    t.rng_seed = meta.require_uint("truth.seed");
    for (std::size_t n = 0; n < cap.cfg.n_antennas; ++n) {
      const std::string prefix = "truth.ant" + std::to_string(n);
      if (!meta.get(prefix + ".taps")) break;
      t.taps.push_back(parse_taps(meta.require(prefix + ".taps")));
      t.noise_variance.push_back(meta.require_double(prefix + ".noise_variance"));
    }
    cap.truth = std::move(t);
  }
  return cap;
}

namespace {
constexpr char kDemodMagic[8] = {'O', 'F', 'D', 'M', 'R', 'X', 'D', '1'};
}

void write_demod(const fs::path& path, const ReceiveRun& run, const OfdmConfig& cfg,
                 const FrameLayout& layout) {
  const Bits bits = payload_bits(run, cfg, layout);
  std::ofstream out = open_out(path);
  out.write(kDemodMagic, sizeof kDemodMagic);
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.fft_len));
  put<std::uint32_t>(out, cfg.qam_order);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(run.data.size()));
  put<std::uint64_t>(out, layout.payload_qam_samples);
  put<std::uint64_t>(out, bits.size());
  for (const auto& p : run.data) {
    for (const auto& v : p.combined->s_hat) {
      put<double>(out, v.real());
      put<double>(out, v.imag());
    }
  }
  out.write(reinterpret_cast<const char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
  finish_write(out, path);
}

DemodRecord read_demod(const fs::path& path) {
  std::ifstream in = open_in(path);
  char magic[8];
  in.read(magic, sizeof magic);
  require(in && std::memcmp(magic, kDemodMagic, sizeof magic) == 0, ErrorCode::input,
          "'" + path.string() + "' is not a demodulated output file");
  const auto version = get<std::uint32_t>(in, path);
  require(version == static_cast<std::uint32_t>(kFormatVersion), ErrorCode::input,
          "'" + path.string() + "' has unsupported format_version " + std::to_string(version));
  DemodRecord rec;
  rec.fft_len = get<std::uint32_t>(in, path);
  rec.qam_order = get<std::uint32_t>(in, path);
  rec.n_data_symbols = get<std::uint32_t>(in, path);
  rec.payload_qam_samples = get<std::uint64_t>(in, path);
  const auto n_bits = get<std::uint64_t>(in, path);
  rec.s_hat.resize(std::size_t{rec.n_data_symbols} * rec.fft_len);
  for (auto& v : rec.s_hat) {
    const double re = get<double>(in, path);
    const double im = get<double>(in, path);
    v = {re, im};
  }
  rec.bits.resize(n_bits);
  in.read(reinterpret_cast<char*>(rec.bits.data()), static_cast<std::streamsize>(n_bits));
  require(static_cast<bool>(in), ErrorCode::input, "'" + path.string() + "' is truncated");
  return rec;
}

}  // namespace ofdmrx
