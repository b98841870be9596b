#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdlab/dyadic.hpp"
#include "sdlab/operators.hpp"

namespace sdlab {

// Certified lower bound on an operator quasi-norm, realized by `witness`.
struct NormEstimate {
    double value = 0.0;
    GridFunction witness;
    std::string quotient;  // "strong", "weak", "restricted", "l2-power"
    double p = 2.0, q = 2.0;
    int restarts = 0;
    int iterations = 0;
    int best_restart = -1;
    nlohmann::json to_json() const;
};

struct AscentOptions {
    AscentOptions() = default;
    AscentOptions(int r, int it) : restarts(r), iterations(it) {}
    int restarts = 32;
    int iterations = 40;
    std::uint64_t seed = 0x5eed;
    double tol = 1e-10;
    std::vector<GridFunction> seeds;  // tried first
};

// ||T f||_q / ||f||_p for f supported in T.window.
double strong_quotient(const LinearOp& T, const GridFunction& f, double p, double q);
double weak_quotient(const LinearOp& T, const GridFunction& f, double p);
// ||T 1_F||_q / ||1_F||_{q,1} with F = support of f.
double restricted_quotient(const LinearOp& T, const GridFunction& indicator, double q);

NormEstimate opnorm(const LinearOp& T, double p, double q, const AscentOptions& opt = {});
// sqrt of the top eigenvalue of T*T by power iteration.
NormEstimate l2_power_norm(const LinearOp& T, int iterations = 200, std::uint64_t seed = 0x5eed);
NormEstimate weak_type_norm(const LinearOp& T, double p, const AscentOptions& opt = {});
NormEstimate restricted_strong_norm(const LinearOp& T, double q, const AscentOptions& opt = {});
// Recomputes the quotient of the stored witness.
double realized_value(const LinearOp& T, const NormEstimate& e);

// T composed with a self-contained map X (adjoint X*), both sides restricted
// to T.window.
LinearOp precompose(const LinearOp& T, std::function<GridFunction(const GridFunction&)> X,
                    std::function<GridFunction(const GridFunction&)> Xadj, const std::string& tag = "");
// Same on inputs supported in `domain`, a part of T.window that X maps into
// T.window, so that X f is never cut at the window edge.
LinearOp precompose(const LinearOp& T, std::function<GridFunction(const GridFunction&)> X,
                    std::function<GridFunction(const GridFunction&)> Xadj, const CellMask& domain);
CellMask shift_mask(const CellMask& m, std::int64_t s0, std::int64_t s1);

enum class RegularityMode { spatial, martingale, fourier };
struct RegularityOptions {
    AscentOptions ascent{8, 30};
    double hmin = 0.0;  // smallest |h| on the ladder (default: grid spacing)
};
struct RegularityResult {
    double value = 0.0;
    std::vector<double> ladder;   // |h|, n, or lambda
    std::vector<double> profile;  // weighted norm at each ladder point
};
// spatial: sup_h |h|^{-eps} ||T Delta_h||; martingale: sup_{n>=0} 2^{n eps}
// ||T (I - E_n)||; fourier: max(||T||, sup_{l>=1} 2^{l eps} ||T eta_l||).
RegularityResult regularity_modulus(const LinearOp& T, double eps, double p, double q, RegularityMode mode,
                                    const RegularityOptions& opt = {});
// sup_{0 <= k <= kmax} 2^{k theta} ||T Lambda_k||.
RegularityResult lp_modulus(const LinearOp& T, double theta, double p, double q, const LPResolution& lp,
                            const RegularityOptions& opt = {});
// Frequency cutoff eta_0 (1 on |xi| <= 3/4, 0 on |xi| >= 1) and eta_l.
double eta_hat(int l, double r);

// A(p) + A(q) + A0 log(2 + B / A0), natural logarithm.
double constant_C(double Ap, double Aq, double A0, double B);

// Single-scale norm sup_j ||Dil_{2^j} T_j||_{p->q} over the family.
NormEstimate single_scale_norm(const OperatorFamily& fam, double p, double q, const AscentOptions& opt = {});
// ||sum_j T_j|| family operator on the interior window.
LinearOp family_operator(const OperatorFamily& fam);

struct BatteryPoint {
    std::int64_t n = 0;
    double weak = 0.0, restricted = 0.0, single = 0.0;
    double ratio_weak = 0.0, ratio_restricted = 0.0, ratio_single = 0.0;
};
struct BatteryReport {
    std::string family;
    double p = 1.5, q = 2.0;
    double sparse_constant = 1.0;
    double stability_threshold = 1.5;
    bool single_scale_checked = true;
    std::string notice;
    std::vector<BatteryPoint> points;
    // max/min of each ratio across resolutions (1 when all are zero).
    double spread_weak = 1.0, spread_restricted = 1.0, spread_single = 1.0;
    bool finite = true;
    bool stable = true;
    bool flagged = false;  // some ratio is not resolution-stable
    nlohmann::json to_json() const;
};
using FamilyFactory = std::function<OperatorFamily(std::int64_t n)>;
BatteryReport necessity_battery(const FamilyFactory& make, double sparse_constant, double p, double q,
                                const std::vector<std::int64_t>& resolutions = {1024, 2048, 4096},
                                const AscentOptions& opt = {8, 30}, double delta = 0.5);
// Single-resolution form.
BatteryReport necessity_battery(const OperatorFamily& fam, double sparse_constant, double p, double q,
                                const AscentOptions& opt = {8, 30}, double delta = 0.5);

}  // namespace sdlab
