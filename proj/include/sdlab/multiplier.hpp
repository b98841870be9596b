#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sdlab/normlab.hpp"
#include "sdlab/symbols.hpp"

namespace sdlab {

// Samples of a (matrix) symbol on the FFT frequencies of a grid; entries are
// row-major rows x cols arrays of g.cells() values.
struct SampledSymbol {
    GridSpec grid;
    int rows = 1, cols = 1;
    std::vector<std::vector<cplx>> entries;

    static SampledSymbol zeros(const GridSpec& g, int rows, int cols);
    static SampledSymbol sample(const MultiplierSymbol& m, const GridSpec& g);
    std::vector<cplx>& entry(int r, int c) { return entries[static_cast<std::size_t>(r * cols + c)]; }
    const std::vector<cplx>& entry(int r, int c) const { return entries[static_cast<std::size_t>(r * cols + c)]; }
    // Pointwise spectral norm.
    double norm_at(std::size_t i) const;
    double sup_norm() const;
    double l2_norm() const;  // (sum |.|_HS^2 dxi / (2 pi)^d)^{1/2}, dual-grid measure
    SampledSymbol& operator+=(const SampledSymbol& o);
};

GridFunction apply_sampled(const SampledSymbol& m, const GridFunction& f);
// The multiplier as an operator on g restricted to inputs in the central
// half of the grid; for p = q = 2 the norm is the sup norm.
LinearOp multiplier_op(const SampledSymbol& m);
double mpq_norm(const SampledSymbol& m, double p, double q, const AscentOptions& opt = {8, 30});

// phi (radial bump in 1/2 < |xi| < 2), Psi_0 (1 on |x| <= 1/4, 0 on
// |x| >= 1/2) and Psi_l(x) = Psi_0(2^{-l} x) - Psi_0(2^{1-l} x), with a grid
// on which pieces are synthesized.
struct SymbolLocalization {
    GridSpec grid;
    std::function<double(double)> phi;   // radial profile
    std::function<double(double)> psi0;  // radial profile
    // m(t .) is trusted for |xi| <= band_limit (Nyquist/4 of the grid on which
    // m is resolved); t with 2t > band_limit is rejected.
    double band_limit = kInf;

    // Standard choice: phi = stein_beta, Psi_0 = 1 - smooth_step(4|x| - 1).
    static SymbolLocalization standard(const GridSpec& g);
    // Second admissible choice (log-bump phi, quadratic-transition Psi_0).
    static SymbolLocalization alternate(const GridSpec& g);

    double psi(int l, double r) const;
    // Largest l with 2^{l-2} >= L: the pieces l = 0..max_level() partition
    // every kernel on the grid.
    int max_level() const;
};

// phi(xi) m(t xi) on the frequencies of the localization grid.
SampledSymbol band_symbol(const MultiplierSymbol& m, double t, const SymbolLocalization& loc);
// F[Psi_l F^{-1}[phi m(t .)]].
SampledSymbol localized_piece(const MultiplierSymbol& m, double t, int l, const SymbolLocalization& loc);
SampledSymbol localize(const SampledSymbol& band, int l, const SymbolLocalization& loc);

// t = 2^{k/8} for k with 2^{lo} <= t <= 2^{hi}.
std::vector<double> octave_tgrid(double lo_log2, double hi_log2, int per_octave = 8);

struct BFunctional {
    double B = 0.0, Bcirc = 0.0;
    std::vector<double> profile;       // sup_t ||piece_l||_{M^{p,q}}
    std::vector<double> circ_profile;  // sup_t ||piece_l||_inf
    std::vector<double> argmax_t;
    double p = 2.0, q = 2.0;
    int peak() const;  // l maximizing profile (ties: smallest l)
    nlohmann::json to_json() const;
};
BFunctional b_functional(const MultiplierSymbol& m, double p, double q, int L, const std::vector<double>& tgrid,
                         const SymbolLocalization& loc, const AscentOptions& opt = {8, 30});

struct SobolevOptions {
    std::int64_t n = 4096;   // samples per axis of [-P, P)^d
    double P = 4.0;          // frequency half-width
    bool use_phi = true;
};
// sup_t ||phi m(t .)||_{L^r_alpha}; r = 2 uses the weight (1+|x|^2)^{alpha/2}
// on the kernel side, r != 2 the Besov sum sum_k 2^{k alpha} ||P_k g||_r.
double hoermander_sobolev(const MultiplierSymbol& m, double r, double alpha, const std::vector<double>& tgrid,
                          const SobolevOptions& opt = {});

// Resolution-growth verdicts. `ratio_stable`: every step grows by at most
// `threshold`. `increments_decay`: the increments of the squared values
// shrink (a convergent norm), fitted over the last three steps.
struct GrowthVerdict {
    bool finite = true;
    std::vector<double> values;
    std::vector<double> ratios;
    double increment_ratio = 0.0;
    std::string rule;
    nlohmann::json to_json() const;
};
GrowthVerdict ratio_stable(const std::vector<double>& values, double threshold = 1.5);
GrowthVerdict increments_decay(const std::vector<double>& values);
// hoermander_sobolev at doubling resolutions, classified by increments_decay.
GrowthVerdict sobolev_finiteness(const MultiplierSymbol& m, double alpha, const std::vector<double>& tgrid,
                                 const std::vector<std::int64_t>& resolutions, double P = 4.0);

struct MiyachiReport {
    double a = 0.0, b = 0.0;
    std::vector<int> orders;
    std::vector<double> slopes;
    std::vector<double> predicted;  // -b + |iota| (a - 1)
    std::vector<std::vector<double>> sups;  // per order, per band
    int band_lo = 0, band_hi = 0;
    bool pass = true;
    nlohmann::json to_json() const;
};
// Log-log slope of sup_{2^n <= |xi| < 2^{n+1}} |d^iota m| against 2^n for
// n = band_lo..band_hi.
MiyachiReport miyachi_check(const MultiplierSymbol& m, double a, double b, const std::vector<int>& orders,
                            int band_lo = 2, int band_hi = 10, int samples_per_band = 256);
// sup over multi-indices of order k of |d^iota m(xi)| by central differences.
double symbol_derivative(const MultiplierSymbol& m, const Xi& xi, int order);
double symbol_derivative(const MultiplierSymbol& m, const Xi& xi, int order, double eps);

// Where Delta_h^M acts: on m(t .) before the bump (kills polynomials of
// degree < M in m), or on the product phi m(t .).
enum class DifferencePlacement { symbol, product };
double holder_mpq(const MultiplierSymbol& m, double p, double q, double s, int M, const std::vector<double>& tgrid,
                  const std::vector<double>& hladder, const SymbolLocalization& loc,
                  DifferencePlacement where = DifferencePlacement::symbol, const AscentOptions& opt = {8, 30});

struct LogInterpReport {
    double p = 2.0;
    double a = 0.0, a_circ = 0.0, b = 0.0;
    double global = 0.0;  // measured M^p lower bound of m
    double bound = 0.0;   // a_circ + a log(2 + b/a)^{|1/p - 1/2|}
    double ratio = 0.0;
    double slack = 10.0;
    bool pass = true;
    nlohmann::json to_json() const;
};
LogInterpReport log_interp_check(const MultiplierSymbol& m, double p, const std::vector<double>& tgrid,
                                 const SymbolLocalization& loc, const GridSpec& global_grid,
                                 const AscentOptions& opt = {8, 30});
// Sum of random-sign bumps sum_k eps_k phi(2^{-k} xi) cos(2^{osc - k} xi_0).
MultiplierSymbol random_sign_symbol(int kmin, int kmax, std::uint64_t seed, int dim = 1, int osc = 0);

struct InvarianceReport {
    double b_standard = 0.0, b_alternate = 0.0, b_factor = 0.0;
    double ratio_choice = 1.0;  // alternate / standard
    double ratio_factor = 1.0;  // B[a m] / B[m]
    double cstar = 100.0;
    bool pass = true;
    nlohmann::json to_json() const;
};
// A smooth order-0 symbol: 1 + sin(log(1 + |xi|^2)) / 2.
MultiplierSymbol order_zero_symbol(int dim);
InvarianceReport symbol_invariance_checks(const MultiplierSymbol& m, double p, double q, int L,
                                          const std::vector<double>& tgrid, const GridSpec& g,
                                          const MultiplierSymbol* factor = nullptr,
                                          const AscentOptions& opt = {8, 30});

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sdlab
