#pragma once

#include <span>
#include <vector>

#include "sdlab/core.hpp"

namespace sdlab::fft {

// Shape of a 1D or 2D array stored with axis 0 fastest (index = i0 + n0*i1).
struct Shape {
    int dim = 1;
    std::int64_t n0 = 0;
    std::int64_t n1 = 1;
    std::size_t size() const { return static_cast<std::size_t>(n0 * n1); }
};

// Unnormalized forward DFT, sum_x f(x) exp(-2 pi i k x / n).
void forward(std::span<cplx> data, const Shape& shape);
// Inverse DFT including the 1/N factor.
void inverse(std::span<cplx> data, const Shape& shape);

// Signed integer frequency index of bin k on an axis of length n.
inline std::int64_t signed_bin(std::int64_t k, std::int64_t n) { return k < n / 2 ? k : k - n; }

}  // namespace sdlab::fft
