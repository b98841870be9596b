#include "sdlab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sdlab/dyadic.hpp"
#include "sdlab/kernels.hpp"

namespace sdlab {

FormValue sparse_form(const SparseFamily& fam, const GridFunction& f1, const GridFunction& f2, double p1, double p2) {
    FormValue fv;
    PrefixSums s1(f1, p1), s2(f2, p2);
    const double mu = f1.grid().cell_measure();
    for (const auto& q : fam.cubes) {
        CellBox b = cells_of(q, f1.grid());
        double c = static_cast<double>(b.count()) * mu * s1.average(b) * s2.average(b);
        fv.contributions.push_back(c);
    }
    // Fixed left-to-right reduction order.
    for (double c : fv.contributions) fv.value += c;
    return fv;
}

GridFunction zero_extend(const GridFunction& f, int factor) {
    const GridSpec& g = f.grid();
    GridSpec big(g.dim, g.n * factor, g.half_width * factor);
    GridFunction out(big, f.value_dim());
    const std::int64_t shift = g.n * (factor - 1) / 2;
    const std::int64_t rows = g.dim == 2 ? g.n : 1;
    for (std::int64_t i1 = 0; i1 < rows; ++i1)
        for (std::int64_t i0 = 0; i0 < g.n; ++i0)
            for (int m = 0; m < f.value_dim(); ++m)
                out.at(out.cell_index(i0 + shift, g.dim == 2 ? i1 + shift : 0), m) = f.at(f.cell_index(i0, i1), m);
    return out;
}

GridFunction extended_maximal(const GridFunction& f, double p) {
    const GridSpec& g = f.grid();
    PrefixSums ps(f, p);
    auto lats = DyadicLattice::shifted_family(g.dim);
    std::vector<double> a, b;
    kernels::lattice_maximal(ps, lats, coarsest_generation(g), finest_generation(g), a, 1.0);
    kernels::lattice_maximal(ps, lats, coarsest_generation(g), finest_generation(g), b, 3.0);
    GridFunction out(g);
    for (std::size_t c = 0; c < a.size(); ++c) out.values()[c] = std::max(a[c], b[c]);
    return out;
}

double maximal_form_upper(const GridFunction& f1, const GridFunction& f2, double p1, double p2, double gamma) {
    if (f1.is_zero() || f2.is_zero()) return 0.0;
    GridFunction m1 = extended_maximal(zero_extend(f1, 2), p1);
    GridFunction m2 = extended_maximal(zero_extend(f2, 2), p2);
    double s = 0.0;
    for (std::size_t c = 0; c < m1.cells(); ++c) s += m1.values()[c].real() * m2.values()[c].real();
    return s * m1.grid().cell_measure() / gamma;
}

LowerBound maximal_form_lower(const GridFunction& f1, const GridFunction& f2, double p1, double p2, double gamma) {
    const GridSpec& g = f1.grid();
    LowerBound lb;
    lb.family.grid = g;
    lb.family.gamma = gamma;
    PrefixSums s1(f1, p1), s2(f2, p2);
    const double mu = g.cell_measure();
    struct Cand {
        DyadicCube q;
        CellBox box;
        double score;
    };
    std::vector<Cand> cands;
    Cube extent{g.dim, {-g.half_width, -g.half_width}, 2.0 * g.half_width};
    const auto lat = DyadicLattice::standard(g.dim);
    for (int k = min_expectation_generation(g); k <= finest_generation(g); ++k) {
        for (const auto& q : lattice_cubes(lat, k, extent)) {
            CellBox b = cells_of(q.geometry(), g);
            double sc = static_cast<double>(b.count()) * mu * s1.average(b) * s2.average(b);
            if (sc > 0.0) cands.push_back({q, b, sc});
        }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.q < b.q;
    });
    std::vector<std::uint8_t> used(g.cells(), 0);
    for (const auto& c : cands) {
        const auto need = static_cast<std::int64_t>(std::ceil(gamma * static_cast<double>(c.box.count()) - 1e-9));
        std::vector<std::size_t> free;
        const std::int64_t r0 = g.dim == 2 ? c.box.lo[1] : 0;
        const std::int64_t r1 = g.dim == 2 ? c.box.hi[1] : 1;
        for (std::int64_t i1 = r0; i1 < r1 && static_cast<std::int64_t>(free.size()) < need; ++i1)
            for (std::int64_t i0 = c.box.lo[0]; i0 < c.box.hi[0] && static_cast<std::int64_t>(free.size()) < need; ++i0) {
                std::size_t cell = f1.cell_index(i0, i1);
                if (!used[cell]) free.push_back(cell);
            }
        if (static_cast<std::int64_t>(free.size()) < need) continue;
        std::vector<CellMask::Run> runs;
        for (auto cell : free) {
            used[cell] = 1;
            auto i0 = static_cast<std::int64_t>(cell) % g.n;
            auto i1 = static_cast<std::int64_t>(cell) / g.n;
            runs.push_back({i1, i0, i0 + 1});
        }
        lb.family.add(c.q.geometry(), CellMask::from_runs(std::move(runs)));
        lb.form.contributions.push_back(c.score);
    }
    for (double v : lb.form.contributions) lb.form.value += v;
    return lb;
}

FormValue triple_form(const SparseFamily& fam, const GridFunction& f1, const GridFunction& f2, double p, double qd,
                      const Cube& q0) {
    FormValue fv;
    PrefixSums s1(f1, p), s2(f2, qd);
    const GridSpec& g = f1.grid();
    for (const auto& q : fam.cubes) {
        if (!q0.contains(q, 1e-9)) throw Error("triple_form: cube outside D(Q0)");
        CellBox b = cells_of(q, g);
        CellBox b3 = cells_of(q.tripled(), g);
        fv.contributions.push_back(static_cast<double>(b.count()) * g.cell_measure() * s1.average(b) * s2.average(b3));
    }
    for (double c : fv.contributions) fv.value += c;
    return fv;
}

nlohmann::json HLDomination::report() const {
    nlohmann::json j;
    j["inequality"] = "M f(x) <= a * sum_i sum_{Q in S_i} <f>_{Q,1} 1_Q(x)";
    j["gamma"] = gamma;
    j["a"] = level_ratio;
    j["families"] = nlohmann::json::array();
    for (std::size_t i = 0; i < families.size(); ++i) {
        auto rep = verify_sparse(families[i]);
        j["families"].push_back({{"lattice_shift", {lattices[i].shift[0], lattices[i].shift[1]}},
                                 {"cubes", families[i].size()},
                                 {"sparse", rep.ok},
                                 {"min_ratio", rep.min_ratio}});
    }
    j["families_sparse"] = families_sparse;
    j["certificate_holds"] = certificate_holds;
    j["cells_checked"] = cells_checked;
    j["worst"] = {{"cell", worst_cell}, {"lhs", worst_lhs}, {"rhs", worst_rhs}, {"ratio", worst_ratio}};
    return j;
}

namespace {

int level_of(double avg, double c, double a) {
    int k = static_cast<int>(std::floor(std::log(avg / c) / std::log(a)));
    while (avg > std::pow(a, k + 1) * c) ++k;
    while (!(avg > std::pow(a, k) * c)) --k;
    return k;
}

void add_box(std::vector<double>& diff, const GridSpec& g, const CellBox& box, double v) {
    CellBox b = box.clipped(g);
    if (b.empty()) return;
    const auto w = static_cast<std::size_t>(g.n + 1);
    if (g.dim == 1) {
        diff[static_cast<std::size_t>(b.lo[0])] += v;
        diff[static_cast<std::size_t>(b.hi[0])] -= v;
    } else {
        auto at = [&](std::int64_t i0, std::int64_t i1) -> double& { return diff[static_cast<std::size_t>(i0) + w * i1]; };
        at(b.lo[0], b.lo[1]) += v;
        at(b.hi[0], b.lo[1]) -= v;
        at(b.lo[0], b.hi[1]) -= v;
        at(b.hi[0], b.hi[1]) += v;
    }
}

}  // namespace

HLDomination hl_sparse_dominate(const GridFunction& f, double gamma, double tol) {
    const GridSpec& g = f.grid();
    HLDomination out;
    out.gamma = gamma;
    out.level_ratio = std::pow(2.0, g.dim) / (1.0 - gamma);
    const double a = out.level_ratio;
    out.lattices = DyadicLattice::shifted_family(g.dim);
    PrefixSums ps(f, 1.0);
    const int kc = coarsest_generation(g);
    const int kf = finest_generation(g);
    Cube extent{g.dim, {-g.half_width, -g.half_width}, 2.0 * g.half_width};
    const auto w = static_cast<std::size_t>(g.n + 1);
    std::vector<double> diff(g.dim == 1 ? w : w * w, 0.0);

    for (const auto& lat : out.lattices) {
        SparseFamily fam;
        fam.grid = g;
        fam.gamma = gamma;
        for (const auto& top : lattice_cubes(lat, kc, extent)) {
            CellBox tb = cells_of(top.geometry(), g);
            const double c = ps.average(tb);
            if (!(c > 0.0)) continue;
            struct Node {
                DyadicCube q;
                int m;           // max level of the S-ancestors
                int parent;      // index of the nearest S-ancestor in `sel`
            };
            struct Sel {
                Cube geo;
                CellBox box;
                double avg;
                std::vector<int> kids;
            };
            std::vector<Sel> sel;
            sel.push_back({top.geometry(), tb, c, {}});
            std::vector<Node> stack;
            if (kc < kf)
                for (const auto& ch : top.children()) stack.push_back({ch, 0, 0});
            while (!stack.empty()) {
                Node nd = stack.back();
                stack.pop_back();
                Cube geo = nd.q.geometry();
                CellBox b = cells_of(geo, g);
                const double sum = ps.box_sum(b);
                if (!(sum > 0.0)) continue;
                // No descendant (down to one cell) can pass the next level.
                if (sum <= std::pow(a, nd.m + 1) * c) continue;
                const double avg = sum / static_cast<double>(b.count());
                int m = nd.m;
                int parent = nd.parent;
                const int kappa = level_of(avg, c, a);
                if (kappa > nd.m) {
                    sel.push_back({geo, b, avg, {}});
                    sel[static_cast<std::size_t>(nd.parent)].kids.push_back(static_cast<int>(sel.size() - 1));
                    m = kappa;
                    parent = static_cast<int>(sel.size() - 1);
                }
                if (nd.q.k < kf)
                    for (const auto& ch : nd.q.children()) stack.push_back({ch, m, parent});
            }
            for (const auto& s : sel) {
                CellMask e = CellMask::from_box(s.box);
                std::vector<CellMask::Run> kid_runs;
                for (int kid : s.kids) {
                    auto km = CellMask::from_box(sel[static_cast<std::size_t>(kid)].box);
                    kid_runs.insert(kid_runs.end(), km.runs().begin(), km.runs().end());
                }
                fam.add(s.geo, e.subtract(CellMask::from_runs(std::move(kid_runs))));
                add_box(diff, g, s.box, a * s.avg);
            }
        }
        out.families_sparse = out.families_sparse && verify_sparse(fam).ok;
        out.families.push_back(std::move(fam));
    }

    std::vector<double> rhs(g.cells(), 0.0);
    if (g.dim == 1) {
        double run = 0.0;
        for (std::size_t i = 0; i < g.cells(); ++i) {
            run += diff[i];
            rhs[i] = run;
        }
    } else {
        const auto n = static_cast<std::size_t>(g.n);
        std::vector<double> col(n + 1, 0.0);
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            double run = 0.0;
            for (std::size_t i0 = 0; i0 < n; ++i0) {
                col[i0] += diff[i0 + w * i1];
                run += col[i0];
                rhs[i0 + n * i1] = run;
            }
        }
    }
    GridFunction mf = hl_maximal(f, 1.0, out.lattices);
    out.cells_checked = g.cells();
    for (std::size_t c = 0; c < g.cells(); ++c) {
        const double lhs = mf.values()[c].real();
        if (lhs <= 0.0) continue;
        const double ratio = rhs[c] > 0.0 ? lhs / rhs[c] : kInf;
        if (ratio > out.worst_ratio) {
            out.worst_ratio = ratio;
            out.worst_cell = c;
            out.worst_lhs = lhs;
            out.worst_rhs = rhs[c];
        }
        if (lhs > rhs[c] * (1.0 + tol)) out.certificate_holds = false;
    }
    return out;
}

}  // namespace sdlab
