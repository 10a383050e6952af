// SPDX-FileCopyrightText: (c) 2026 The ofdmrx authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMRX_NUMERICS_HPP
#define OFDMRX_NUMERICS_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ofdmrx/types.hpp"

namespace ofdmrx {

// Precomputed bit-reversal permutation and twiddles for one power-of-two
// length. Immutable after construction, so one plan can be shared by any
// number of threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t length);

  std::size_t length() const noexcept { return length_; }

  // Unnormalized forward transform, X[k] = sum_n x[n] exp(-j2pi kn/M).
  void forward(std::span<cplx> x) const noexcept;
  // Inverse transform including the 1/M factor.
  void inverse(std::span<cplx> x) const noexcept;

  // Shared, lazily built plan for `length`.
  static std::shared_ptr<const FftPlan> cached(std::size_t length);

 private:
  void transform(std::span<cplx> x, bool inverse) const noexcept;

  std::size_t length_;
  std::vector<std::uint32_t> bitrev_;
  std::vector<cplx> twiddles_;  // exp(-j2pi k/M), k < M/2
};

// Throws ErrorCode::config for lengths that are not a power of two >= 2 and
// ErrorCode::numeric_input for non-finite samples.
ComplexVector fft(std::span<const cplx> x);
ComplexVector ifft(std::span<const cplx> x);

// Swap halves of an even-length vector. For even lengths this is its own
// inverse, so it doubles as ifftshift.
ComplexVector fftshift(std::span<const cplx> x);
void fftshift_inplace(std::span<cplx> x);

// Direct O(M^2) transforms. Reference implementations for verification;
// they accept any length.
ComplexVector naive_dft(std::span<const cplx> x);
ComplexVector naive_idft(std::span<const cplx> x);

// Pairwise tree schedule for summing n values. At each level adjacent
// entries (2j, 2j+1) are added; an odd trailing entry is carried unchanged.
class ReductionPlan {
 public:
  struct Level {
    std::size_t width;  // entries entering this level
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::optional<std::size_t> carry;
  };

  explicit ReductionPlan(std::size_t n_inputs);

  std::size_t n_inputs() const noexcept { return n_inputs_; }
  std::size_t depth() const noexcept { return levels_.size(); }
  const std::vector<Level>& levels() const noexcept { return levels_; }

 private:
  std::size_t n_inputs_;
  std::vector<Level> levels_;
};

// Sum computed by the plan's tree schedule. The association order is fixed
// by the plan, so the result does not depend on who executes it.
cplx parallel_reduce_sum(std::span<const cplx> values, const ReductionPlan& plan);
// Same, using caller-provided scratch of at least values.size() entries.
cplx parallel_reduce_sum(std::span<const cplx> values, const ReductionPlan& plan,
                         std::span<cplx> scratch);

bool all_finite(std::span<const cplx> x) noexcept;

}  // namespace ofdmrx

#endif  // OFDMRX_NUMERICS_HPP
