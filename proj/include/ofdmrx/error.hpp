// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMRX_ERROR_HPP
#define OFDMRX_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace ofdmrx {

// Error categories. Values match ofdmrx_status in the C API.
enum class ErrorCode : int {
  config = 1,         // invalid configuration or parameter
  numeric_input = 2,  // NaN/Inf on entry to a kernel
  framing = 3,        // lengths that do not tile into symbols / QAM words
  contract = 4,       // caller broke an API precondition
  lifecycle = 5,      // use of a closed ring
  backpressure = 6,   // fail-fast ring is full
  pipeline_order = 7, // data symbol seen before the pilot
  input = 8,          // malformed or inconsistent captured input
  io = 9,             // filesystem failure
  measurement = 10,   // undefined measurement (e.g. zero reference power)
  incomplete_data = 11,
  internal = 12,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace ofdmrx

#endif  // OFDMRX_ERROR_HPP
