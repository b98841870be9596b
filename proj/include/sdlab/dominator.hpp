#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdlab/dyadic.hpp"
#include "sdlab/family.hpp"
#include "sdlab/operators.hpp"

namespace sdlab {

struct NodeTrace {
    Cube cube;
    int depth = 0;
    int cap = 0;  // scales N1..cap are summed at this node
    bool leaf = false;
    double threshold1 = 0.0, threshold2 = 0.0;
    std::int64_t omega_cells = 0;
    std::int64_t e_cells = 0;
    bool omega_in_7q0 = true;
    std::vector<Cube> whitney_used;  // Whitney cubes recursed into
    CellMask e_mask;
};

struct DominationCertificate {
    Cube root;
    double p = 1.5, q = 2.0, gamma = 0.5;
    int n1 = 0, n2 = 0;
    bool skip_adjoint_regularity = false;
    SparseFamily family;
    std::vector<NodeTrace> trace;
    double lhs = 0.0;   // |<S f1, f2>| (or the aggregated form)
    double form = 0.0;  // triple form of the family
    double c_meas = 0.0;
    nlohmann::json to_json() const;
};

struct DominateOptions {
    // Replaces |<S f1, f2>| by int A(S f1) |f2| (vector-valued outputs).
    std::function<GridFunction(const GridFunction&)> aggregate;
    // Theorem-5.5 style run: the adjoint regularity hypothesis is not used.
    bool skip_adjoint_regularity = false;
};

// The left side of the domination inequality for the given inputs.
double domination_lhs(const OperatorFamily& fam, const GridFunction& f1, const GridFunction& f2,
                      const DominateOptions& opt = {});

// Recursive construction: Q0 with E = Q0 \ Omega, then recursion into the
// Whitney cubes W of Omega inside Q0 with scales N1..L(W). Throws "root not
// found" when supp f1 is not inside one standard cube of side 2^{N2}.
DominationCertificate dominate(const OperatorFamily& fam, const GridFunction& f1, const GridFunction& f2, double p,
                               double q, double gamma, const DominateOptions& opt = {});

struct CertificateReport {
    SparseReport sparse;
    double lhs = 0.0;
    double form = 0.0;
    double constant = 0.0;  // lhs / form
    bool omega_in_7q0 = true;
    bool matches = true;  // constant reproduces c_meas to 1e-9
    bool ok = true;
    nlohmann::json to_json() const;
};
CertificateReport verify_certificate(const DominationCertificate& cert, const OperatorFamily& fam,
                                     const GridFunction& f1, const GridFunction& f2, double p, double q,
                                     const DominateOptions& opt = {});

struct PlainConversion {
    std::vector<SparseFamily> families;  // at most 3^d * M
    std::vector<int> lattice_class;      // class of each family
    int M = 1;
    double gamma_tilde = 1.0;
    // triple_form <= factor * sum_i sparse_form(families[i], f1, f2, p, q')
    double factor = 1.0;
};
// Enlarge Q -> 3Q, split the triples by lattice class and each class by
// Carleson layers mod M. M = 0 picks the smallest M with gamma_tilde >= 1/2.
PlainConversion triple_to_plain(const DominationCertificate& cert, int M = 0);
double plain_gamma(double gamma, int dim, int M);

nlohmann::json to_json(const CertificateReport& r);

}  // namespace sdlab
