// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include "ofdmrx/worker_pool.hpp"

#include <utility>

#include "ofdmrx/error.hpp"

namespace ofdmrx {

WorkerPool::WorkerPool(std::size_t workers) : n_workers_(workers) {
  require(workers >= 1, ErrorCode::config, "worker pool needs at least one worker");
  threads_.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) threads_.emplace_back([this, i] { run(i); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  start_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::parallel_for(std::size_t n, const RangeFn& fn) {
  if (n == 0) return;
  std::unique_lock lock(mutex_);
  job_ = &fn;
  job_size_ = n;
  pending_ = n_workers_;
  error_ = nullptr;
  ++generation_;
  start_.notify_all();
  done_.wait(lock, [this] { return pending_ == 0; });
  job_ = nullptr;
  if (error_) std::rethrow_exception(std::exchange(error_, nullptr));
}

void WorkerPool::run(std::size_t index) {
  std::size_t seen = 0;
  for (;;) {
    const RangeFn* job = nullptr;
    std::size_t n = 0;
    {
      std::unique_lock lock(mutex_);
      start_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
      job = job_;
      n = job_size_;
    }
    const std::size_t begin = n * index / n_workers_;
    const std::size_t end = n * (index + 1) / n_workers_;
    std::exception_ptr err;
    if (begin < end) {
      try {
        (*job)(begin, end);
      } catch (...) {
        err = std::current_exception();
      }
    }
    {
      std::lock_guard lock(mutex_);
      if (err && !error_) error_ = err;
      if (--pending_ == 0) done_.notify_one();
    }
  }
}

}  // namespace ofdmrx
