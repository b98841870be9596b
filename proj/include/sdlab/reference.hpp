#pragma once

#include <vector>

#include "sdlab/grid.hpp"

// Slow, obviously-correct serial versions of the parallel kernels, used as
// test oracles and as the baseline in bench/.
namespace sdlab::reference {

// Enumerates every admitted cube explicitly and sums cells directly.
std::vector<double> lattice_maximal(const GridFunction& f, double p, const std::vector<DyadicLattice>& lattices,
                                    int kc, int kf);

// Full double loop over all cell pairs.
GridFunction convolve_direct(const GridFunction& f, const GridFunction& k);

// Exhaustive search over all increasing index subsequences (length <= 20).
double vr_norm_exhaustive(const std::vector<std::vector<cplx>>& seq, double r);

std::vector<double> pointwise_variation(const std::vector<GridFunction>& seq, double r);

}  // namespace sdlab::reference
