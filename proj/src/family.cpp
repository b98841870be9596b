#include "sdlab/family.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace sdlab {

void SparseFamily::append(const SparseFamily& o) {
    cubes.insert(cubes.end(), o.cubes.begin(), o.cubes.end());
    masks.insert(masks.end(), o.masks.begin(), o.masks.end());
}

std::int64_t cell_count(const Cube& q, const GridSpec& g) { return cells_of(q, g).count(); }

SparseReport verify_sparse(const SparseFamily& fam) { return verify_sparse(fam, fam.gamma); }

SparseReport verify_sparse(const SparseFamily& fam, double gamma) {
    SparseReport rep;
    rep.gamma = gamma;
    if (fam.masks.size() != fam.cubes.size()) {
        rep.ok = false;
        rep.violations.push_back("mask count differs from cube count");
        return rep;
    }
    for (std::size_t i = 0; i < fam.size(); ++i) {
        CellBox box = cells_of(fam.cubes[i], fam.grid);
        const auto& e = fam.masks[i];
        const double q = static_cast<double>(box.count());
        const double ratio = q > 0 ? static_cast<double>(e.size()) / q : 0.0;
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        if (!e.within(box)) {
            rep.ok = false;
            rep.violations.push_back("cube " + std::to_string(i) + ": E_Q not contained in Q");
        }
        // Integer comparison |E| >= gamma |Q| with a relative guard for gamma
        // values computed in floating point.
        if (static_cast<double>(e.size()) < gamma * q * (1.0 - 1e-12)) {
            rep.ok = false;
            std::ostringstream os;
            os << "cube " << i << ": |E_Q|/|Q| = " << ratio << " < " << gamma;
            rep.violations.push_back(os.str());
        }
    }
    std::vector<const CellMask*> ptrs;
    for (const auto& m : fam.masks) ptrs.push_back(&m);
    if (!pairwise_disjoint(ptrs)) {
        rep.ok = false;
        rep.violations.push_back("E_Q sets are not pairwise disjoint");
    }
    return rep;
}

nlohmann::json to_json(const CellMask& m) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : m.runs()) runs.push_back({r.row, r.begin, r.end});
    return runs;
}

CellMask mask_from_json(const nlohmann::json& j) {
    std::vector<CellMask::Run> runs;
    for (const auto& r : j) runs.push_back({r.at(0).get<std::int64_t>(), r.at(1).get<std::int64_t>(), r.at(2).get<std::int64_t>()});
    return CellMask::from_runs(std::move(runs));
}

nlohmann::json to_json(const SparseFamily& fam) {
    nlohmann::json j;
    j["grid"] = {{"dim", fam.grid.dim}, {"n", fam.grid.n}, {"L", fam.grid.half_width}};
    j["gamma"] = fam.gamma;
    j["cubes"] = nlohmann::json::array();
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const auto& q = fam.cubes[i];
        nlohmann::json c;
        c["lo"] = std::vector<double>(q.lo.begin(), q.lo.begin() + q.dim);
        c["side"] = q.side;
        c["mask"] = to_json(fam.masks[i]);
        j["cubes"].push_back(c);
    }
    return j;
}

SparseFamily family_from_json(const nlohmann::json& j) {
    SparseFamily fam;
    const auto& g = j.at("grid");
    fam.grid = GridSpec(g.at("dim").get<int>(), g.at("n").get<std::int64_t>(), g.at("L").get<double>());
    fam.gamma = j.at("gamma").get<double>();
    for (const auto& c : j.at("cubes")) {
        Cube q;
        q.dim = fam.grid.dim;
        auto lo = c.at("lo").get<std::vector<double>>();
        for (int a = 0; a < q.dim; ++a) q.lo[a] = lo.at(static_cast<std::size_t>(a));
        q.side = c.at("side").get<double>();
        fam.add(q, mask_from_json(c.at("mask")));
    }
    return fam;
}

void write_csv(std::ostream& os, const SparseFamily& fam) {
    os << "index,k,corner0,corner1,side,eq_cells,q_cells\n" << std::setprecision(17);
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const auto& q = fam.cubes[i];
        int e = 0;
        double m = std::frexp(q.side, &e);
        os << i << ",";
        if (m == 0.5)
            os << -(e - 1);
        else
            os << "";
        os << "," << q.lo[0] << "," << (q.dim == 2 ? q.lo[1] : 0.0) << "," << q.side << "," << fam.masks[i].size()
           << "," << cell_count(q, fam.grid) << "\n";
    }
}

}  // namespace sdlab
