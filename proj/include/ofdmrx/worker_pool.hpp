// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMRX_WORKER_POOL_HPP
#define OFDMRX_WORKER_POOL_HPP

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ofdmrx {

// Fixed set of worker threads that execute one range-partitioned job at a
// time. The calling thread only dispatches and joins.
class WorkerPool {
 public:
  using RangeFn = std::function<void(std::size_t begin, std::size_t end)>;

  explicit WorkerPool(std::size_t workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const noexcept { return n_workers_; }

  // Splits [0, n) into contiguous chunks, one per worker, and blocks until
  // all chunks are done. Rethrows the first exception raised by `fn`.
  void parallel_for(std::size_t n, const RangeFn& fn);

 private:
  void run(std::size_t index);

  std::size_t n_workers_;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable start_;
  std::condition_variable done_;
  const RangeFn* job_ = nullptr;
  std::size_t job_size_ = 0;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stopping_ = false;
  std::exception_ptr error_;
};

}  // namespace ofdmrx

#endif  // OFDMRX_WORKER_POOL_HPP
