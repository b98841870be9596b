#pragma once

#include <vector>

#include "sdlab/cell_mask.hpp"
#include "sdlab/geometry.hpp"

namespace sdlab {

struct WhitneyCube {
    DyadicCube cube;
    Cube geo;
    int level = 0;        // L(W) = log2 side(W)
    double dist = 0.0;    // dist(W, complement of Omega)
    // Cell-sized leftovers next to the complement that cannot be refined
    // further; they satisfy only the upper Whitney bound.
    bool boundary = false;
};

struct WhitneyFamily {
    GridSpec grid;
    CellMask omega;
    std::vector<WhitneyCube> cubes;  // ordered by (k, corner)

    CellMask cube_cells(std::size_t i) const;
};

// Standard-lattice Whitney decomposition of Omega (grid cells; everything off
// the grid counts as complement). Accepts W when dist(W, Omega^c) >= 5 diam W;
// the parent rule then gives dist <= 12 diam W.
WhitneyFamily whitney(const CellMask& omega, const GridSpec& g);

// Exact box-to-complement distance from cells of b to the nearest non-Omega
// cell or the exterior of the grid; returns +inf when nothing is found within
// `radius` (in length units).
double distance_to_complement(const CellBox& b, const std::vector<std::uint8_t>& omega_flags, const GridSpec& g,
                              double radius);

}  // namespace sdlab
