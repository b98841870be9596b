#pragma once

#include <vector>

#include "sdlab/family.hpp"
#include "sdlab/grid.hpp"
#include "sdlab/whitney.hpp"

namespace sdlab {

// Generation-k cubes of the lattice that meet the extent with positive
// measure, ordered by corner.
std::vector<DyadicCube> lattice_cubes(const DyadicLattice& lat, int k, const Cube& extent);

// True iff any two cubes are nested or disjoint.
bool nested_or_disjoint(const std::vector<Cube>& cubes, double tol = 1e-12);

// Class (0 .. 3^d - 1) of each triple 3Q of a standard dyadic cube Q; class
// nu = t0 + 3 t1 collects the triples that form the lattice 3 * D_t, where D_t
// is the shifted lattice with shift t. Throws "not a triple family".
std::vector<int> three_lattice_split(const std::vector<Cube>& triples);
// The standard cube Q with 3Q = triple (throws "not a triple family").
DyadicCube triple_base(const Cube& triple);

// Predicted sparseness of each Carleson subfamily: (1 + (1/gamma - 1)/M)^{-1}.
double carleson_gamma(double gamma, int M);
// Splits a nested-or-disjoint gamma-sparse family by layers mod M; masks are
// rebuilt bottom-up so each subfamily is carleson_gamma(gamma, M)-sparse.
std::vector<SparseFamily> carleson_split(const SparseFamily& fam, int M);
// Depth of each cube in the containment forest (0 = maximal).
std::vector<int> containment_layers(const std::vector<Cube>& cubes);

struct CZDecomposition {
    DyadicCube root;
    double p = 2.0;
    double q = 2.0;
    double gamma = 0.5;
    double threshold1 = 0.0;  // on M_p f1
    double threshold2 = 0.0;  // on M_{q'} f2
    CellMask omega1;
    CellMask omega2;
    WhitneyFamily whitney;
    CellMask e_root;  // Q0 \ Omega
    GridFunction f1, f2;
    GridFunction g1, g2;
    // Cube means per Whitney cube (value_dim entries each).
    std::vector<std::vector<cplx>> mean1, mean2;
    bool omega_in_7q0 = true;
    // ||g1||_inf / threshold1 and ||g2||_inf / threshold2 (0 when f = 0).
    double g1_ratio = 0.0;
    double g2_ratio = 0.0;

    const CellMask& omega() const { return whitney.omega; }
    // b_W = (f - mean_W) 1_W for Whitney cube i.
    GridFunction bad1(std::size_t i) const;
    GridFunction bad2(std::size_t i) const;
};

// Calderon-Zygmund decomposition at Q0: Omega_1 = {M_p f1 > T1}, Omega_2 =
// {M_{q'} (f2 1_{3Q0}) > T2} with T1 = (100^d/(1-gamma))^{1/p} <f1>_{Q0,p} and
// T2 = (100^d/(1-gamma))^{1/q'} <f2>_{3Q0,q'}.
CZDecomposition cz_decompose(const GridFunction& f1, const GridFunction& f2, const DyadicCube& q0, double p,
                             double q, double gamma);

// Admissible generations for conditional expectations: side 2^{-n} in [h, L].
int min_expectation_generation(const GridSpec& g);
GridFunction conditional_expectation(const GridFunction& f, int n);
GridFunction martingale_difference(const GridFunction& f, int n);

// Littlewood-Paley resolution of identity I = sum_k Lambda_k tilde-Lambda_k.
class LPResolution {
public:
    LPResolution(const GridSpec& g, int kmax);

    // lambda_0(x) = (a + b|x|^2 + c|x|^4)(1 - 4|x|^2)^4_+.
    static double lambda0(const std::array<double, 2>& x, int dim);
    static std::array<double, 3> lambda0_coefficients(int dim);
    // Continuous moments int |x|^m lambda0 and int |x|^m lambda1.
    static double lambda0_moment(int m, int dim);
    static double lambda1_moment(int m, int dim);

    int kmax() const { return kmax_; }
    const GridSpec& grid() const { return g_; }
    // Discrete P_k kernel (normalized to integrate to 1).
    GridFunction p_kernel(int k) const;
    GridFunction P(int k, const GridFunction& f) const;
    GridFunction Lambda(int k, const GridFunction& f) const;
    GridFunction LambdaTilde(int k, const GridFunction& f) const;
    // sum_{k=0}^{K} Lambda_k tilde-Lambda_k f.
    GridFunction partial_sum(int K, const GridFunction& f) const;
    // Symbol of Lambda_k on the (periodic) FFT grid, and the normalizer S.
    const std::vector<cplx>& lambda_symbol(int k) const { return lam_hat_[static_cast<std::size_t>(k)]; }
    const std::vector<double>& normalizer() const { return S_; }

private:
    GridFunction apply_symbol_(const std::vector<cplx>& m, const GridFunction& f, bool tilde, int k) const;
    GridSpec g_;
    int kmax_;
    std::vector<std::vector<cplx>> p_hat_;
    std::vector<std::vector<cplx>> lam_hat_;
    std::vector<double> S_;
};

}  // namespace sdlab
