#include "sdlab/dominator.hpp"

#include <cmath>

#include "sdlab/sparse.hpp"

namespace sdlab {

namespace {

nlohmann::json cube_json(const Cube& q) {
    return {{"dim", q.dim}, {"lo", {q.lo[0], q.lo[1]}}, {"side", q.side}};
}

struct Builder {
    const OperatorFamily& fam;
    const GridFunction& f2;
    double p, q, gamma;
    DominationCertificate& cert;

    void node(const DyadicCube& Q, const GridFunction& f1, int cap, int depth) {
        NodeTrace t;
        t.cube = Q.geometry();
        t.depth = depth;
        t.cap = cap;
        const GridSpec& g = f1.grid();
        const CellMask box = CellMask::from_box(cells_of(t.cube, g));
        if (cap <= fam.n1) {
            t.leaf = true;
            t.e_mask = box;
        } else {
            auto cz = cz_decompose(f1, f2, Q, p, q, gamma);
            t.threshold1 = cz.threshold1;
            t.threshold2 = cz.threshold2;
            t.omega_cells = cz.omega().size();
            t.omega_in_7q0 = cz.omega_in_7q0;
            t.e_mask = cz.e_root;
            if (cz.omega().empty()) t.leaf = true;
            std::vector<std::pair<DyadicCube, GridFunction>> children;
            for (std::size_t i = 0; i < cz.whitney.cubes.size(); ++i) {
                const auto& w = cz.whitney.cubes[i];
                if (w.level < fam.n1 || !t.cube.contains(w.geo)) continue;
                GridFunction part = f1.restricted(cz.whitney.cube_cells(i));
                if (part.is_zero()) continue;
                t.whitney_used.push_back(w.geo);
                children.emplace_back(w.cube, std::move(part));
            }
            t.e_cells = t.e_mask.size();
            cert.family.add(t.cube, t.e_mask);
            cert.trace.push_back(std::move(t));
            for (auto& [w, part] : children) node(w, part, std::min(w.level(), cap - 1), depth + 1);
            return;
        }
        t.e_cells = t.e_mask.size();
        cert.family.add(t.cube, t.e_mask);
        cert.trace.push_back(std::move(t));
    }
};

}  // namespace

nlohmann::json DominationCertificate::to_json() const {
    nlohmann::json j;
    j["root"] = cube_json(root);
    j["p"] = p;
    j["q"] = q;
    j["gamma"] = gamma;
    j["n1"] = n1;
    j["n2"] = n2;
    j["skip_adjoint_regularity"] = skip_adjoint_regularity;
    j["lhs"] = lhs;
    j["form"] = form;
    j["c_meas"] = c_meas;
    j["family"] = sdlab::to_json(family);
    j["trace"] = nlohmann::json::array();
    for (const auto& t : trace) {
        nlohmann::json n;
        n["cube"] = cube_json(t.cube);
        n["depth"] = t.depth;
        n["cap"] = t.cap;
        n["leaf"] = t.leaf;
        n["threshold1"] = t.threshold1;
        n["threshold2"] = t.threshold2;
        n["omega_cells"] = t.omega_cells;
        n["e_cells"] = t.e_cells;
        n["omega_in_7q0"] = t.omega_in_7q0;
        n["whitney_used"] = nlohmann::json::array();
        for (const auto& w : t.whitney_used) n["whitney_used"].push_back(cube_json(w));
        j["trace"].push_back(std::move(n));
    }
    return j;
}

double domination_lhs(const OperatorFamily& fam, const GridFunction& f1, const GridFunction& f2,
                      const DominateOptions& opt) {
    GridFunction s = sum_apply(fam, f1);
    if (!opt.aggregate) return std::abs(pairing(s, f2));
    GridFunction a = opt.aggregate(s);
    const double hd = f1.grid().cell_measure();
    double acc = 0.0;
    for (std::size_t i = 0; i < a.cells(); ++i) acc += a.magnitude(i) * f2.magnitude(i);
    return acc * hd;
}

DominationCertificate dominate(const OperatorFamily& fam, const GridFunction& f1, const GridFunction& f2, double p,
                               double q, double gamma, const DominateOptions& opt) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw Error("dominate: gamma must lie in (0, 1)");
    if (!(p >= 1.0 && q > 1.0)) throw Error("dominate: need p >= 1 and q > 1");
    const GridSpec& g = f1.grid();
    DominationCertificate cert;
    cert.p = p;
    cert.q = q;
    cert.gamma = gamma;
    cert.n1 = fam.n1;
    cert.n2 = fam.n2;
    cert.skip_adjoint_regularity = opt.skip_adjoint_regularity;
    cert.family.grid = g;
    cert.family.gamma = gamma;
    if (f1.is_zero()) {
        cert.root = Cube{g.dim, {0.0, 0.0}, std::ldexp(1.0, fam.n2)};
        return cert;
    }
    const CellBox sb = f1.support_box();
    const auto lat = DyadicLattice::standard(g.dim);
    const DyadicCube root =
        containing_cube(lat, -fam.n2, {g.center(sb.lo[0]), g.dim == 2 ? g.center(sb.lo[1]) : 0.0});
    if (!cells_of(root.geometry(), g).contains(sb)) throw Error("root not found");
    cert.root = root.geometry();

    Builder b{fam, f2, p, q, gamma, cert};
    b.node(root, f1, fam.n2, 0);

    cert.lhs = domination_lhs(fam, f1, f2, opt);
    cert.form = triple_form(cert.family, f1, f2, p, Exponent(q).dual(), cert.root).value;
    cert.c_meas = cert.form > 0.0 ? cert.lhs / cert.form : (cert.lhs == 0.0 ? 0.0 : kInf);
    return cert;
}

nlohmann::json CertificateReport::to_json() const {
    nlohmann::json j;
    j["sparse_ok"] = sparse.ok;
    j["min_ratio"] = sparse.min_ratio;
    j["violations"] = sparse.violations;
    j["lhs"] = lhs;
    j["form"] = form;
    j["constant"] = constant;
    j["omega_in_7q0"] = omega_in_7q0;
    j["matches"] = matches;
    j["ok"] = ok;
    return j;
}

nlohmann::json to_json(const CertificateReport& r) { return r.to_json(); }

CertificateReport verify_certificate(const DominationCertificate& cert, const OperatorFamily& fam,
                                     const GridFunction& f1, const GridFunction& f2, double p, double q,
                                     const DominateOptions& opt) {
    CertificateReport r;
    r.sparse = verify_sparse(cert.family, cert.gamma);
    r.lhs = domination_lhs(fam, f1, f2, opt);
    r.form = cert.family.empty() ? 0.0 : triple_form(cert.family, f1, f2, p, Exponent(q).dual(), cert.root).value;
    r.constant = r.form > 0.0 ? r.lhs / r.form : (r.lhs == 0.0 ? 0.0 : kInf);
    for (const auto& t : cert.trace) r.omega_in_7q0 = r.omega_in_7q0 && t.omega_in_7q0;
    if (std::isfinite(cert.c_meas))
        r.matches = std::abs(r.constant - cert.c_meas) <= 1e-9 * std::max(1.0, std::abs(cert.c_meas));
    else
        r.matches = !std::isfinite(r.constant);
    r.ok = r.sparse.ok && r.matches && r.omega_in_7q0;
    return r;
}

double plain_gamma(double gamma, int dim, int M) { return carleson_gamma(gamma / std::pow(3.0, dim), M); }

PlainConversion triple_to_plain(const DominationCertificate& cert, int M) {
    const int d = cert.family.grid.dim;
    const double g3 = cert.gamma / std::pow(3.0, d);
    PlainConversion out;
    out.M = M > 0 ? M : std::max(1, static_cast<int>(std::ceil(1.0 / g3 - 1.0 - 1e-12)));
    out.gamma_tilde = carleson_gamma(g3, out.M);
    out.factor = std::pow(3.0, d / cert.p - d);
    if (cert.family.empty()) return out;
    std::vector<Cube> triples;
    for (const auto& q : cert.family.cubes) triples.push_back(q.tripled());
    const auto cls = three_lattice_split(triples);
    const int nclass = d == 1 ? 3 : 9;
    for (int c = 0; c < nclass; ++c) {
        SparseFamily sub;
        sub.grid = cert.family.grid;
        sub.gamma = g3;
        for (std::size_t i = 0; i < triples.size(); ++i)
            if (cls[i] == c) sub.add(triples[i], cert.family.masks[i]);
        if (sub.empty()) continue;
        for (auto& f : carleson_split(sub, out.M)) {
            if (f.empty()) continue;
            out.families.push_back(std::move(f));
            out.lattice_class.push_back(c);
        }
    }
    return out;
}

}  // namespace sdlab
