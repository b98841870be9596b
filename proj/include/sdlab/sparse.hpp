#pragma once

#include <vector>

#include <json.hpp>

#include "sdlab/family.hpp"
#include "sdlab/grid.hpp"

namespace sdlab {

struct FormValue {
    double value = 0.0;
    std::vector<double> contributions;  // |Q| <f1>_{Q,p1} <f2>_{Q,p2} per cube
};

// sum_Q |Q| <f1>_{Q,p1} <f2>_{Q,p2}.
FormValue sparse_form(const SparseFamily& fam, const GridFunction& f1, const GridFunction& f2, double p1, double p2);

// gamma^{-1} int (M|f1|^{p1})^{1/p1} (M|f2|^{p2})^{1/p2}, with M the maximal
// function over the 3^d shifted lattices and their 3x dilates, evaluated on
// the grid enlarged to [-2L, 2L)^d. Dominates the sparse form of every
// gamma-sparse family built from standard dyadic cubes and their triples
// inside [-2L, 2L)^d.
double maximal_form_upper(const GridFunction& f1, const GridFunction& f2, double p1, double p2, double gamma);
// The surrogate maximal function used above (on the enlarged grid).
GridFunction extended_maximal(const GridFunction& f, double p);
GridFunction zero_extend(const GridFunction& f, int factor);

struct LowerBound {
    FormValue form;
    SparseFamily family;
};
// Greedy gamma-sparse family over standard cubes of side h..L: cubes sorted by
// contribution (ties by cube order) and accepted when ceil(gamma |Q|) cells of
// Q are still free.
LowerBound maximal_form_lower(const GridFunction& f1, const GridFunction& f2, double p1, double p2, double gamma);

// sum_Q |Q| <f1>_{Q,p} <f2>_{3Q,q'}; every cube must lie in Q0.
FormValue triple_form(const SparseFamily& fam, const GridFunction& f1, const GridFunction& f2, double p, double qd,
                      const Cube& q0);

struct HLDomination {
    double gamma = 0.5;
    double level_ratio = 0.0;  // a = 2^d / (1 - gamma)
    std::vector<SparseFamily> families;
    std::vector<DyadicLattice> lattices;
    bool families_sparse = true;
    bool certificate_holds = true;
    double worst_ratio = 0.0;  // max_x M f(x) / rhs(x)
    std::size_t worst_cell = 0;
    double worst_lhs = 0.0, worst_rhs = 0.0;
    std::size_t cells_checked = 0;
    nlohmann::json report() const;
};

// M f(x) <= 2^d (1-gamma)^{-1} sum_i sum_{Q in S_i} <f>_{Q,1} 1_Q(x), one
// family per shifted lattice; verified at every cell (relative tolerance tol).
HLDomination hl_sparse_dominate(const GridFunction& f, double gamma, double tol = 1e-9);

}  // namespace sdlab
