// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include "ofdmrx/receiver.hpp"

#include <algorithm>
#include <string>
#include <thread>

namespace ofdmrx {

std::string_view engine_name(EngineVariant v) noexcept {
  return v == EngineVariant::sequential ? "sequential" : "data_parallel";
}

EngineVariant parse_engine(std::string_view name) {
  if (name == "sequential") return EngineVariant::sequential;
  if (name == "data_parallel") return EngineVariant::data_parallel;
  fail(ErrorCode::config, "unknown engine '" + std::string(name) + "'");
}

std::size_t default_worker_count() noexcept {
  const unsigned hw = std::thread::hardware_concurrency();
  return std::clamp<std::size_t>(hw == 0 ? 1 : hw, 1, 8);
}

Engine::Engine(EngineKind kind) : kind_(kind) {
  if (kind_.variant == EngineVariant::data_parallel) {
    require(kind_.workers >= 1, ErrorCode::config, "data_parallel engine needs workers >= 1");
    pool_ = std::make_unique<WorkerPool>(kind_.workers);
  } else {
    kind_.workers = 1;
  }
}

void Engine::for_range(std::size_t n, const WorkerPool::RangeFn& fn) {
  if (pool_) {
    pool_->parallel_for(n, fn);
  } else if (n > 0) {
    fn(0, n);
  }
}

namespace {

using Clock = std::chrono::steady_clock;

Nanos since(Clock::time_point start) {
  return std::chrono::duration_cast<Nanos>(Clock::now() - start);
}

Engine& sequential_engine() {
  thread_local Engine engine(EngineKind::sequential());
  return engine;
}

}  // namespace

ComplexMatrix cp_drop(const ComplexMatrix& rows, const OfdmConfig& cfg) {
  require(rows.cols() == cfg.symbol_len(), ErrorCode::framing,
          "symbol row has " + std::to_string(rows.cols()) + " samples, expected M + cp = " +
              std::to_string(cfg.symbol_len()));
  ComplexMatrix out(rows.rows(), cfg.fft_len);
  for (std::size_t n = 0; n < rows.rows(); ++n) {
    const auto src = rows.row(n).subspan(cfg.cp_len);
    std::copy(src.begin(), src.end(), out.row(n).begin());
  }
  return out;
}

ComplexMatrix cp_drop(const SymbolSlot& slot, const OfdmConfig& cfg) {
  return cp_drop(slot.payload, cfg);
}

ComplexMatrix to_freq(const ComplexMatrix& time, Engine& engine) {
  const auto plan = FftPlan::cached(time.cols());
  ComplexMatrix out = time;
  engine.for_range(out.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      plan->forward(out.row(n));
      fftshift_inplace(out.row(n));
    }
  });
  return out;
}

ComplexMatrix to_freq(const ComplexMatrix& time) { return to_freq(time, sequential_engine()); }

ChannelEstimate ls_estimate(const ComplexMatrix& y, const PilotDefinition& pilot, Engine& engine,
                            std::uint64_t source_seq) {
  require(pilot.values.size() == y.cols(), ErrorCode::contract,
          "pilot length " + std::to_string(pilot.values.size()) + " does not match " +
              std::to_string(y.cols()) + " subcarriers");
  for (const auto& p : pilot.values) {
    require(p != cplx{0.0, 0.0}, ErrorCode::config, "pilot has a zero entry");
  }
  ChannelEstimate est;
  est.source_seq = source_seq;
  est.h_hat = ComplexMatrix(y.rows(), y.cols());
  const std::size_t m = y.cols();
  const auto in = y.flat();
  auto out = est.h_hat.flat();
  // One work item per (antenna, subcarrier) cell.
  engine.for_range(in.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = in[i] / pilot.values[i % m];
  });
  return est;
}

ChannelEstimate ls_estimate(const ComplexMatrix& y, const PilotDefinition& pilot) {
  return ls_estimate(y, pilot, sequential_engine());
}

CombinedSymbol mrc_combine(const ComplexMatrix& y, const ChannelEstimate& est, Engine& engine,
                           std::uint64_t seq_no) {
  const ComplexMatrix& h = est.h_hat;
  require(h.rows() == y.rows() && h.cols() == y.cols(), ErrorCode::contract,
          "channel estimate is " + std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
              ", symbol is " + std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
  const std::size_t n_ant = y.rows();
  const std::size_t m = y.cols();

  CombinedSymbol out;
  out.seq_no = seq_no;
  out.s_hat.resize(m);
  out.weight_norm.resize(m);

  if (!engine.parallel()) {
    for (std::size_t k = 0; k < m; ++k) {
      cplx num{0.0, 0.0};
      double den = 0.0;
      for (std::size_t n = 0; n < n_ant; ++n) {
        num += std::conj(h(n, k)) * y(n, k);
        den += std::norm(h(n, k));
      }
      out.weight_norm[k] = den;
      out.s_hat[k] = num / std::max(den, kMrcFloor);
    }
  } else {
    // One block per subcarrier; the antenna sums are tree reductions.
    const ReductionPlan plan(n_ant);
    engine.for_range(m, [&](std::size_t begin, std::size_t end) {
      ComplexVector products(n_ant);
      ComplexVector powers(n_ant);
      ComplexVector scratch(n_ant);
      for (std::size_t k = begin; k < end; ++k) {
        for (std::size_t n = 0; n < n_ant; ++n) {
          products[n] = std::conj(h(n, k)) * y(n, k);
          powers[n] = std::norm(h(n, k));
        }
        const cplx num = parallel_reduce_sum(products, plan, scratch);
        const double den = parallel_reduce_sum(powers, plan, scratch).real();
        out.weight_norm[k] = den;
        out.s_hat[k] = num / std::max(den, kMrcFloor);
      }
    });
  }
  out.erased = static_cast<std::size_t>(std::count_if(
      out.weight_norm.begin(), out.weight_norm.end(), [](double w) { return w < kMrcFloor; }));
  return out;
}

CombinedSymbol mrc_combine(const ComplexMatrix& y, const ChannelEstimate& est) {
  return mrc_combine(y, est, sequential_engine());
}

Receiver::Receiver(OfdmConfig cfg, PilotDefinition pilot, EngineKind engine)
    : cfg_(cfg), pilot_(std::move(pilot)), engine_(engine) {
  cfg_.validate();
  pilot_.validate(cfg_.fft_len);
}

ProcessedSymbol Receiver::process_symbol(const SymbolSlot& slot, Nanos read_time) {
  require(slot.payload.rows() == cfg_.n_antennas, ErrorCode::framing,
          "slot has " + std::to_string(slot.payload.rows()) + " antenna rows, expected " +
              std::to_string(cfg_.n_antennas));
  if (slot.kind == SlotKind::data) {
    require(estimate_.has_value(), ErrorCode::pipeline_order,
            "data symbol " + std::to_string(slot.seq_no) + " arrived before any pilot symbol");
  }

  ProcessedSymbol result;
  result.seq_no = slot.seq_no;
  result.kind = slot.kind;
  result.timings.kind = slot.kind;
  result.timings.read = read_time;

  auto t0 = Clock::now();
  const ComplexMatrix time = cp_drop(slot, cfg_);
  result.timings.cp_drop = since(t0);

  t0 = Clock::now();
  const ComplexMatrix freq = to_freq(time, engine_);
  result.timings.fft = since(t0);

  t0 = Clock::now();
  if (slot.kind == SlotKind::pilot) {
    estimate_ = ls_estimate(freq, pilot_, engine_, slot.seq_no);
    result.timings.equalize = since(t0);
  } else {
    result.combined = mrc_combine(freq, *estimate_, engine_, slot.seq_no);
    result.timings.equalize = since(t0);
    result.bits = qam_demap(result.combined->s_hat, cfg_.qam_order);
  }
  return result;
}

}  // namespace ofdmrx
