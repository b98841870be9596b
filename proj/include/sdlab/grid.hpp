#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "sdlab/cell_mask.hpp"
#include "sdlab/core.hpp"
#include "sdlab/geometry.hpp"

namespace sdlab {

// Samples of a C^M-valued function on a GridSpec, stored as cell * M + c with
// cell = i0 + n * i1.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(const GridSpec& g, int value_dim = 1);

    // Evaluates fn at the sample positions x_i (left cell corners).
    static GridFunction sample(const GridSpec& g, const std::function<cplx(const std::array<double, 2>&)>& fn);
    static GridFunction indicator(const GridSpec& g, const Cube& q);
    static GridFunction indicator(const GridSpec& g, const CellMask& m);
    static GridFunction constant(const GridSpec& g, cplx c);

    const GridSpec& grid() const { return grid_; }
    int value_dim() const { return m_; }
    std::size_t cells() const { return grid_.cells(); }
    std::vector<cplx>& values() { return v_; }
    const std::vector<cplx>& values() const { return v_; }
    cplx& at(std::size_t cell, int c = 0) { return v_[cell * static_cast<std::size_t>(m_) + c]; }
    cplx at(std::size_t cell, int c = 0) const { return v_[cell * static_cast<std::size_t>(m_) + c]; }
    std::size_t cell_index(std::int64_t i0, std::int64_t i1 = 0) const {
        return static_cast<std::size_t>(i0 + grid_.n * i1);
    }
    std::array<double, 2> position(std::size_t cell) const;

    // Euclidean norm of the C^M value at a cell.
    double magnitude(std::size_t cell) const;
    std::vector<double> magnitudes() const;
    bool is_zero() const;
    // Smallest cell box holding every nonzero sample (empty box if f = 0).
    CellBox support_box() const;
    CellMask support_mask() const;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(cplx s);
    GridFunction restricted(const CellMask& m) const;
    GridFunction restricted(const CellBox& b) const;
    GridFunction abs() const;
    GridFunction component(int c) const;
    // Same samples viewed on the grid dilated by 2^j, i.e. x -> f(2^{-j} x).
    GridFunction dilated(int j) const;

private:
    void check_compatible(const GridFunction& o) const;
    GridSpec grid_;
    int m_ = 1;
    std::vector<cplx> v_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(cplx s, GridFunction a);

// Bilinear pairing sum_x sum_c f_c(x) g_c(x) h^d.
cplx pairing(const GridFunction& f, const GridFunction& g);

// p in [1, inf]; inf gives max |f|.
double lp_norm(const GridFunction& f, double p);
inline double lp_norm(const GridFunction& f, const Exponent& p) { return lp_norm(f, p.value()); }
double lorentz_weak_norm(const GridFunction& f, double p);
double lorentz_q1_norm(const GridFunction& f, double q);

// Prefix sums of |f|^p over grid cells; sums over virtual boxes clip to the grid.
class PrefixSums {
public:
    PrefixSums() = default;
    PrefixSums(const GridFunction& f, double p);
    PrefixSums(const GridSpec& g, const std::vector<double>& cellwise);
    double box_sum(const CellBox& b) const;
    // Normalized average over all (virtual) cells of the box, raised to 1/p.
    double average(const CellBox& b) const;
    double exponent() const { return p_; }
    const GridSpec& grid() const { return g_; }

private:
    GridSpec g_;
    double p_ = 1.0;
    std::vector<long double> s_;
};

// <f>_{Q,p} = (|Q|^{-1} int_Q |f|^p)^{1/p}; p = inf gives the sup over Q.
double local_average(const GridFunction& f, const Cube& q, double p);
double local_average(const GridFunction& f, const DyadicCube& q, double p);

// (M|f|^p)^{1/p} with M the maximal function over the 3^d shifted lattices,
// sides h .. 4L.
GridFunction hl_maximal(const GridFunction& f, double p);
// Same, restricted to the given lattices.
GridFunction hl_maximal(const GridFunction& f, double p, const std::vector<DyadicLattice>& lattices);
// Range of generations used by hl_maximal.
int finest_generation(const GridSpec& g);
int coarsest_generation(const GridSpec& g);

// Discrete convolution sum_y f(y) k(x - y) h^d. The kernel sample at index i
// is the value at offset x_i (origin at index n/2). value_dim of k is 1
// (componentwise) or out * in (row-major out x in matrix, in = f.value_dim()).
// Throws "wraparound" when the output support would leave the grid.
GridFunction convolve(const GridFunction& f, const GridFunction& k);
// Same, keeping only the part of the output that lands on the grid.
GridFunction convolve_truncated(const GridFunction& f, const GridFunction& k);
GridFunction convolve_fft(const GridFunction& f, const GridFunction& k);
int convolution_out_dim(const GridFunction& f, const GridFunction& k);
// Kernel support as offsets relative to the origin, in cells.
CellBox kernel_offsets(const GridFunction& k);
// Throws "wraparound" if supp f + supp k leaves the grid.
void check_wraparound(const GridFunction& f, const GridFunction& k);

// Delta_h f(x) = f(x + h) - f(x) with zero extension; h must be a multiple of
// the spacing along each axis.
GridFunction delta_h(const GridFunction& f, const std::array<double, 2>& h);
GridFunction delta_h_iter(const GridFunction& f, const std::array<double, 2>& h, int M);

}  // namespace sdlab
