#pragma once

// Thin FFTW wrapper. Plans are created once per (size, direction) under a
// mutex and then executed concurrently with the new-array interface.

#include <span>

#include "jrc/types.hpp"

namespace jrc::fft {

/// out[k] = sum_n in[n] exp(-j 2 pi k n / N). No normalization.
void forward(std::span<const cdouble> in, std::span<cdouble> out);

/// out[n] = sum_k in[k] exp(+j 2 pi k n / N). No normalization.
void inverse(std::span<const cdouble> in, std::span<cdouble> out);

CVec forward(std::span<const cdouble> in);
CVec inverse(std::span<const cdouble> in);

}  // namespace jrc::fft
