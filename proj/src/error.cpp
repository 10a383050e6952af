// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#include "ofdmrx/error.hpp"

namespace ofdmrx {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::config: return "config";
    case ErrorCode::numeric_input: return "numeric_input";
    case ErrorCode::framing: return "framing";
    case ErrorCode::contract: return "contract";
    case ErrorCode::lifecycle: return "lifecycle";
    case ErrorCode::backpressure: return "backpressure";
    case ErrorCode::pipeline_order: return "pipeline_order";
    case ErrorCode::input: return "input";
    case ErrorCode::io: return "io";
    case ErrorCode::measurement: return "measurement";
    case ErrorCode::incomplete_data: return "incomplete_data";
    case ErrorCode::internal: return "internal";
  }
  return "internal";
}

}  // namespace ofdmrx
