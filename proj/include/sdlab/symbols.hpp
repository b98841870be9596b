#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdlab/grid.hpp"

namespace sdlab {

using Xi = std::array<double, 2>;

// Fourier multiplier xi -> m(xi), scalar or (out x in) matrix valued. The
// frequency variable is angular: f^(xi) = int f(x) e^{-i <x, xi>} dx.
struct MultiplierSymbol {
    std::string name;
    int dim = 1;
    int in_dim = 1;
    int out_dim = 1;
    std::function<cplx(const Xi&)> scalar;
    std::function<Eigen::MatrixXcd(const Xi&)> matrix;  // used when set
    // Distance from xi to the declared singular set (inf if there is none).
    std::function<double(const Xi&)> singular_distance;
    std::string singular_set = "none";

    bool is_matrix() const { return static_cast<bool>(matrix); }
    cplx operator()(const Xi& xi) const;
    Eigen::MatrixXcd eval_matrix(const Xi& xi) const;
    // Spectral norm (|m| for scalars).
    double norm_at(const Xi& xi) const;
};

// Smooth step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s);
// chi_infinity: 0 for |xi| <= 1, 1 for |xi| >= 2.
double chi_infinity(double r);
// Partition bump beta(s) = step(2s - 1) - step(s - 1), supported in (1/2, 2).
double stein_beta(double s);

// Known names: identity, constant(c), translation(h0, h1), indicator(R),
// bochner_riesz(lambda, t), m_ab(a, b), power(b), wave(beta),
// stein_piece(alpha, n), circular (d = 2), bump(center, width),
// linear(c0, c1). Throws on unknown names.
MultiplierSymbol symbol_zoo(const std::string& name, const std::map<std::string, double>& params, int dim = 1);
std::vector<std::string> symbol_names();

// Angular frequency of FFT bin k on an axis of the grid.
double frequency(const GridSpec& g, std::int64_t k);
double nyquist(const GridSpec& g);
// Symbol values on the (periodic) FFT grid, scalar symbols only.
std::vector<cplx> symbol_samples(const MultiplierSymbol& m, const GridSpec& g);

// F^{-1}[m F f] on the periodic grid.
GridFunction apply_symbol(const MultiplierSymbol& m, const GridFunction& f);
// Same with precomputed scalar samples.
GridFunction apply_samples(const std::vector<cplx>& m, const GridFunction& f);

// Product, sum and dilation xi -> m(t xi) of scalar symbols.
MultiplierSymbol product(const MultiplierSymbol& a, const MultiplierSymbol& b);
MultiplierSymbol sum(const MultiplierSymbol& a, const MultiplierSymbol& b);
MultiplierSymbol dilate_symbol(const MultiplierSymbol& m, double t);

}  // namespace sdlab
