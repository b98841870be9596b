#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdlab/dominator.hpp"
#include "sdlab/multiplier.hpp"
#include "sdlab/normlab.hpp"

namespace sdlab {

// ---- maximal operators M_E^sigma on a grid ----

struct MaximalSetup {
    GridSpec grid;
    std::vector<double> times;           // dilations used (those resolved on the grid)
    std::vector<GridFunction> kernels;   // sigma_t
    std::vector<GridFunction> adjoints;  // reflected sigma_t
    CellMask window;
};
// Uses the t in E with 4h <= t <= tmax (default L/4).
MaximalSetup maximal_setup(const GridFunction& sigma, const std::vector<double>& E, const GridSpec& g,
                           double tmax = 0.0);
GridFunction maximal_apply(const MaximalSetup& M, const GridFunction& f);
// Index of the maximizing dilation at every cell.
std::vector<int> maximal_selector(const MaximalSetup& M, const GridFunction& f);
// f -> (f * sigma_{t(x)})(x) for a fixed selector; |.| <= M f pointwise.
LinearOp linearized_maximal(const MaximalSetup& M, const std::vector<int>& selector);

enum class MaximalQuotient { weak, restricted, strong };
// Ascent on the linearization, re-selecting from the witness each round; the
// value is the true quotient of M at the best witness.
NormEstimate maximal_norm(const MaximalSetup& M, MaximalQuotient kind, double p, double q, const AscentOptions& opt,
                          int rounds = 3);
// The vector-valued family (components sigma_t grouped by scale
// j = ceil(log2 t)) whose l^inf aggregate is M_E^sigma.
OperatorFamily maximal_family(const MaximalSetup& M);
GridFunction linf_aggregate(const GridFunction& F);

// ---- region correspondence ----

std::array<double, 2> phi_map(const std::array<double, 2>& xy);

struct RegionOptions {
    std::vector<double> axis{0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<std::int64_t> resolutions{256, 512, 1024};
    double half_width = 16.0;
    double gamma = 0.5;
    int trials = 3;
    std::uint64_t seed = 1;
    AscentOptions ascent{4, 20};
    int rounds = 2;
    double threshold = 1.5;
};

struct RegionPoint {
    double x = 0.0, y = 0.0;
    std::string verdict;  // "stable", "unstable", "undetermined"
    std::vector<double> weak, restricted, single;  // Lebesgue plane, per resolution
    std::vector<double> c_meas, lower;             // sparse plane, per resolution
};

struct RegionReport {
    std::vector<RegionPoint> lebesgue;  // points (1/p, 1/q)
    std::vector<RegionPoint> sparse;    // points (1/p, 1/q')
    std::vector<std::int64_t> resolutions;
    double threshold = 1.5;
    int violations = 0;  // sparse-stable points whose preimage is not Lebesgue-stable
    bool involution = true;
    bool nonempty = false;  // some sparse point is stable
    const RegionPoint* find(const std::vector<RegionPoint>& pts, double x, double y) const;
    nlohmann::json to_json() const;
    void write_csv(std::ostream& os) const;
};
RegionReport region_scan(const GridFunction& sigma, const std::vector<double>& E, const RegionOptions& opt = {});
// E = {2^k} covering [2^lo, 2^hi].
std::vector<double> lacunary_set(int lo, int hi);

// ---- weights ----

// Cell-center samples of |x|^a (Euclidean norm).
GridFunction power_weight(const GridSpec& g, double a);
struct WeightConstants {
    double a_t = 1.0;   // sup_Q <w>_{Q,1} <w^{-1}>_{Q,t'-1}
    double rh_s = 1.0;  // sup_Q <w>_{Q,s} / <w>_{Q,1}
};
// Supremum over the cubes of the 3^d shifted lattices lying inside the grid.
WeightConstants weight_constants(const GridFunction& w, double t, double s);

struct WeightedReport {
    double r = 2.0, p = 1.0, q = 4.0;
    double alpha = 0.0;
    double a_const = 1.0, rh_const = 1.0;
    double sparse_constant = 1.0;
    double bound = 1.0;  // C ([w]_A [w]_RH)^alpha
    double slack = 0.0;  // max ||T f||_{L^r(w)} / (bound ||f||_{L^r(w)})
    int trials = 0;
    nlohmann::json to_json() const;
};
WeightedReport weighted_check(const LinearOp& T, const GridFunction& w, double r, double p, double q,
                              double sparse_constant = 1.0, int trials = 20, std::uint64_t seed = 1);

// ---- dimension ----

// Box-counting slope of E subset [1, 2] over the given box sizes.
double minkowski_dim(const std::vector<double>& E, const std::vector<double>& scales);
std::vector<double> cantor_sample(int depth);

// ---- experiments ----

struct ExperimentConfig {
    std::string experiment = "dominate";  // dominate | battery | region | bfunctional | weights
    std::string op = "identity";
    nlohmann::json params = nlohmann::json::object();
    int dim = 1;
    std::vector<std::int64_t> resolutions{1024};
    std::vector<std::array<double, 2>> exponents{{1.5, 2.0}};
    double gamma = 0.5;
    int n1 = -4, n2 = 0;
    int trials = 1;
    std::uint64_t seed = 1;
    std::string out = "out";

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;
};

struct ResultBundle {
    nlohmann::json report;
    std::vector<std::string> files;
};
ResultBundle run(const ExperimentConfig& cfg);

// Families and inputs shared by the experiments and tests.
OperatorFamily identity_family(const GridSpec& g, int n1, int n2);
OperatorFamily named_family(const std::string& name, const GridSpec& g, int n1, int n2);
// n -> family on GridSpec(1, n, n h / 2) with N1 = log2(4h), N2 = log2(L/4).
FamilyFactory battery_factory(const std::string& name, double spacing = 1.0 / 128);
// f1: noise plus heavy-tailed spikes on the cube; f2: noise on the grid.
std::pair<GridFunction, GridFunction> random_pair(const GridSpec& g, const Cube& q0, std::uint64_t seed,
                                                 const CellMask& f2_region);
std::string format_double(double v);

}  // namespace sdlab
