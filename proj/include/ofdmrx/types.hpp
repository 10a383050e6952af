// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMRX_TYPES_HPP
#define OFDMRX_TYPES_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ofdmrx/error.hpp"

namespace ofdmrx {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;
using Bits = std::vector<std::uint8_t>;  // one bit per element, 0 or 1

// Row-major complex matrix. Rows are antennas, columns are samples or
// subcarriers.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<cplx> row(std::size_t r) noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const cplx> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  cplx& operator()(std::size_t r, std::size_t c) noexcept {
    return data_[r * cols_ + c];
  }
  const cplx& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<cplx> flat() noexcept { return data_; }
  std::span<const cplx> flat() const noexcept { return data_; }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n != 0 && (n & (n - 1)) == 0;
}

}  // namespace ofdmrx

#endif  // OFDMRX_TYPES_HPP
