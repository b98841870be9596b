#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sdlab/core.hpp"

namespace sdlab {

// Half-open axis-parallel cube [lo, lo + side)^d.
struct Cube {
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    double side = 1.0;

    double hi(int axis) const { return lo[axis] + side; }
    double diam() const;
    double measure() const;
    double center(int axis) const { return lo[axis] + 0.5 * side; }
    Cube tripled() const;
    Cube scaled_about_center(double factor) const;
    bool contains(const Cube& o, double tol = 1e-12) const;
    bool intersects(const Cube& o, double tol = 1e-12) const;
    bool contains_point(const std::array<double, 2>& x) const;
};

// Rectangular block of (possibly virtual, outside-the-grid) cells, half-open.
struct CellBox {
    int dim = 1;
    std::array<std::int64_t, 2> lo{0, 0};
    std::array<std::int64_t, 2> hi{0, 1};

    std::int64_t extent(int axis) const { return hi[axis] - lo[axis]; }
    std::int64_t count() const;
    bool empty() const { return count() <= 0; }
    CellBox clipped(const GridSpec& g) const;
    CellBox expanded(std::int64_t cells) const;
    bool contains(const CellBox& o) const;
};

// Cells whose centers lie in the cube; the count is the cube's measure in
// cell units, including cells outside the grid (zero extension).
CellBox cells_of(const Cube& q, const GridSpec& g);
CellBox whole_grid(const GridSpec& g);

// Dyadic lattice with the generation-dependent shift rule: generation-k cubes
// are 2^{-k}(z + r_k/3 + [0,1)^d) with r_k = (-1)^k t mod 3 per axis. t = 0 is
// the standard lattice, t = 1 the alternating one-third prototype.
struct DyadicLattice {
    int dim = 1;
    std::array<int, 2> shift{0, 0};

    static DyadicLattice standard(int d) { return DyadicLattice{d, {0, 0}}; }
    static DyadicLattice prototype(int d) { return DyadicLattice{d, {1, d == 2 ? 1 : 0}}; }
    // The 3^d lattices of the one-third trick, indexed 0..3^d-1.
    static std::vector<DyadicLattice> shifted_family(int d);

    int offset_thirds(int k, int axis) const;
    bool is_standard() const { return shift[0] == 0 && (dim == 1 || shift[1] == 0); }
    bool operator==(const DyadicLattice& o) const { return dim == o.dim && shift == o.shift; }
};

struct DyadicCube {
    DyadicLattice lattice;
    int k = 0;  // generation: side 2^{-k}
    std::array<std::int64_t, 2> z{0, 0};

    double side() const;
    int level() const { return -k; }  // log2 of the side
    Cube geometry() const;
    DyadicCube parent() const;
    std::vector<DyadicCube> children() const;
    bool is_ancestor_of(const DyadicCube& o) const;  // non-strict
    bool operator==(const DyadicCube& o) const { return lattice == o.lattice && k == o.k && z == o.z; }
    bool operator<(const DyadicCube& o) const;
    std::string describe() const;
};

DyadicCube containing_cube(const DyadicLattice& lat, int k, const std::array<double, 2>& x);

}  // namespace sdlab
