#pragma once

#include <vector>

#include "sdlab/grid.hpp"

// OpenMP-parallel inner loops. Every kernel writes each output cell from a
// single thread with a fixed summation order, so results do not depend on the
// thread count. Serial counterparts live in reference.hpp.
namespace sdlab::kernels {

// out[c] = max over lattices and generations kc..kf of the (1/p-powered)
// average of the cube containing the center of cell c. With scale != 1 the
// lattices are dilated about the origin (cubes scale * 2^{-k}(z + r_k + [0,1)^d)).
void lattice_maximal(const PrefixSums& ps, const std::vector<DyadicLattice>& lattices, int kc, int kf,
                     std::vector<double>& out, double scale = 1.0);

// Direct convolution over the output support box; out must be zeroed with the
// output value dimension.
void convolve_direct(const GridFunction& f, const GridFunction& k, GridFunction& out);

// Pointwise r-variation of the sequence (seq[0](x), seq[1](x), ...).
std::vector<double> pointwise_variation(const std::vector<GridFunction>& seq, double r);

// Pointwise l^r norm over the sequence, r in [1, inf].
std::vector<double> pointwise_lr(const std::vector<GridFunction>& seq, double r);

}  // namespace sdlab::kernels
