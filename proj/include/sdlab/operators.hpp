#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sdlab/grid.hpp"

namespace sdlab {

// A linear map between grid functions together with its adjoint for the
// sesquilinear pairing sum conj(u) v h^d. Inputs are restricted to `window`.
struct LinearOp {
    GridSpec grid;
    int in_dim = 1;
    int out_dim = 1;
    CellMask window;
    std::function<GridFunction(const GridFunction&)> forward;
    std::function<GridFunction(const GridFunction&)> backward;

    GridFunction apply(const GridFunction& f) const { return forward(f.restricted(window)); }
    GridFunction adjoint(const GridFunction& g) const { return backward(g).restricted(window); }
};

// Convolution with k (see convolve); the adjoint convolves with the
// reflected conjugate-transposed kernel.
LinearOp convolution_op(const GridFunction& kernel, const CellMask& window);
LinearOp identity_op(const GridSpec& g, const CellMask& window, cplx scale = 1.0);
LinearOp compose(const LinearOp& a, const LinearOp& b);  // a after b
LinearOp scaled(const LinearOp& a, cplx s);
GridFunction reflected_adjoint_kernel(const GridFunction& k, int in_dim);
// Cells whose distance from the grid boundary is at least `margin` (length).
CellMask interior_window(const GridSpec& g, double margin);

// Multi-scale family {T_j}, N1 <= j <= N2, with convolution kernels K_j on the
// working grid and coefficients a_j (|a_j| <= 1).
struct OperatorFamily {
    std::string name;
    GridSpec grid;
    int n1 = 0;
    int n2 = 0;
    int in_dim = 1;
    int out_dim = 1;
    std::function<GridFunction(int)> kernel_fn;  // unweighted K_j
    std::map<int, double> coeff;                  // a_j, default 1
    // Lower edge delta of the strengthened support condition, if known.
    std::optional<double> inner_radius;

    double a(int j) const;
    GridFunction kernel(int j) const;  // a_j K_j
    GridFunction summed_kernel(int lo, int hi) const;
    GridFunction summed_kernel() const { return summed_kernel(n1, n2); }
};

GridFunction apply_scale(const OperatorFamily& fam, int j, const GridFunction& f);
GridFunction sum_apply(const OperatorFamily& fam, int lo, int hi, const GridFunction& f);
inline GridFunction sum_apply(const OperatorFamily& fam, const GridFunction& f) {
    return sum_apply(fam, fam.n1, fam.n2, f);
}

// Kernel of Dil_{2^j} T_j, living on the grid dilated by 2^{-j}: same samples
// scaled by 2^{jd}.
GridFunction dilate_kernel(const GridFunction& kj, int j);
struct DilatedScale {
    GridFunction kernel;
    LinearOp op;  // on the dilated grid, with an interior window
};
DilatedScale dilate_op(const OperatorFamily& fam, int j);
// Largest |x| over cells [x, x+h)^d carrying a nonzero kernel sample.
double kernel_support_radius(const GridFunction& k);
// Smallest |x| over nonzero kernel samples (sample positions).
double kernel_inner_radius(const GridFunction& k);
bool support_condition_holds(const OperatorFamily& fam);
// delta * 2^j <= |x| <= 2^j for every nonzero sample of every K_j.
bool strengthened_support_holds(const OperatorFamily& fam, double delta);
// Every nonzero sample of out is within `radius` of a nonzero sample of in.
bool output_within(const GridFunction& in, const GridFunction& out, double radius);

// Exact-integral resampling of a unit-scale kernel sigma (given on a grid with
// L = 1) at dilation t: K(x) = t^{-d} sigma(x / t), each target cell receiving
// the mean of the piecewise-constant sigma over its preimage.
GridFunction resample_dilated(const GridFunction& sigma, double t, const GridSpec& target);

// K_j = a_j 2^{-jd} sigma(2^{-j} .). Throws if sigma has nonzero mean or
// support outside the unit ball.
OperatorFamily radon_family(const GridFunction& sigma, const GridSpec& working, int n1, int n2,
                            const std::map<int, double>& coeff = {});
// Family whose unit-rescaled pieces grow like 2^{jd/2} in L^p -> L^q norm.
OperatorFamily growing_family(const GridFunction& sigma, const GridSpec& working, int n1, int n2);
// The 1D mean-zero profile 1_[1/2,1) - 1_[-1,-1/2) on a unit grid.
GridFunction odd_step_sigma(std::int64_t n);
// Unit-scale test profiles: (1 - |x|)_+ and exp(1 - 1/(1 - x^2)) on (-1, 1).
GridFunction hat_sigma(std::int64_t n);
GridFunction bump_sigma(std::int64_t n);

// Finite dilation set with per-octave pieces E_j = (2^{-j} E) cap [1, 2].
struct DilationSet {
    std::vector<double> t;  // sorted, positive
    explicit DilationSet(std::vector<double> values);
    std::vector<double> piece(int j) const;
    std::vector<int> octaves() const;
    static DilationSet lacunary(int jlo, int jhi);
};

// sup_{t in E} |f * sigma_t|.
GridFunction maximal_over_dilations(const GridFunction& sigma, const DilationSet& E, const GridFunction& f);

}  // namespace sdlab
