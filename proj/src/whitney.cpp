#include "sdlab/whitney.hpp"

#include <algorithm>
#include <cmath>

#include "sdlab/grid.hpp"

namespace sdlab {

CellMask WhitneyFamily::cube_cells(std::size_t i) const { return CellMask::from_box(cells_of(cubes[i].geo, grid)); }

namespace {

double axis_gap(double alo, double ahi, double blo, double bhi) { return std::max({0.0, blo - ahi, alo - bhi}); }

double exterior_distance(const CellBox& b, const GridSpec& g) {
    double best = kInf;
    for (int a = 0; a < g.dim; ++a) {
        best = std::min(best, static_cast<double>(b.lo[a]) * g.spacing());
        best = std::min(best, static_cast<double>(g.n - b.hi[a]) * g.spacing());
    }
    return std::max(best, 0.0);
}

}  // namespace

double distance_to_complement(const CellBox& b, const std::vector<std::uint8_t>& omega_flags, const GridSpec& g,
                              double radius) {
    const double h = g.spacing();
    double best = exterior_distance(b, g);
    const auto R = static_cast<std::int64_t>(std::ceil(std::min(radius, 4.0 * g.half_width) / h)) + 1;
    CellBox win = b.expanded(R).clipped(g);
    if (g.dim == 1) {
        win.lo[1] = 0;
        win.hi[1] = 1;
    }
    for (std::int64_t i1 = win.lo[1]; i1 < win.hi[1]; ++i1) {
        for (std::int64_t i0 = win.lo[0]; i0 < win.hi[0]; ++i0) {
            if (omega_flags[static_cast<std::size_t>(i0 + g.n * i1)]) continue;
            double gx = axis_gap(static_cast<double>(b.lo[0]), static_cast<double>(b.hi[0]), static_cast<double>(i0),
                                 static_cast<double>(i0 + 1));
            double s = gx * gx;
            if (g.dim == 2) {
                double gy = axis_gap(static_cast<double>(b.lo[1]), static_cast<double>(b.hi[1]),
                                     static_cast<double>(i1), static_cast<double>(i1 + 1));
                s += gy * gy;
            }
            best = std::min(best, std::sqrt(s) * h);
        }
    }
    return best <= radius ? best : kInf;
}

WhitneyFamily whitney(const CellMask& omega, const GridSpec& g) {
    WhitneyFamily fam;
    fam.grid = g;
    fam.omega = omega.clipped(g);
    if (fam.omega.empty()) return fam;
    if (fam.omega.size() == static_cast<std::int64_t>(g.cells())) throw Error("no complement");

    auto flags = fam.omega.to_flags(g);
    std::vector<double> w(flags.begin(), flags.end());
    PrefixSums count(g, w);
    const double h = g.spacing();
    const int kf = finest_generation(g);
    const int k0 = -(ilog2_exact(g.half_width) + 1);
    const auto lat = DyadicLattice::standard(g.dim);

    std::vector<DyadicCube> stack;
    for (std::int64_t z1 = -1; z1 <= (g.dim == 2 ? 0 : -1); ++z1)
        for (std::int64_t z0 = -1; z0 <= 0; ++z0) stack.push_back(DyadicCube{lat, k0, {z0, g.dim == 2 ? z1 : 0}});

    while (!stack.empty()) {
        DyadicCube q = stack.back();
        stack.pop_back();
        Cube geo = q.geometry();
        CellBox box = cells_of(geo, g);
        const double in_omega = count.box_sum(box);
        if (in_omega < 0.5) continue;
        const bool full = std::abs(in_omega - static_cast<double>(box.count())) < 0.5;
        const double diam = geo.diam();
        if (full) {
            CellBox ring = box.expanded(static_cast<std::int64_t>(std::ceil(5.0 * diam / h)));
            bool clear = std::abs(count.box_sum(ring) - static_cast<double>(ring.count())) < 0.5;
            double d5 = clear ? kInf : distance_to_complement(box, flags, g, 5.0 * diam);
            if (clear || d5 >= 5.0 * diam) {
                WhitneyCube wc{q, geo, -q.k, distance_to_complement(box, flags, g, 13.0 * diam), false};
                fam.cubes.push_back(wc);
                continue;
            }
        }
        if (q.k >= kf) {
            WhitneyCube wc{q, geo, -q.k, distance_to_complement(box, flags, g, 13.0 * diam), true};
            fam.cubes.push_back(wc);
            continue;
        }
        for (const auto& c : q.children()) stack.push_back(c);
    }
    std::sort(fam.cubes.begin(), fam.cubes.end(),
              [](const WhitneyCube& a, const WhitneyCube& b) { return a.cube < b.cube; });
    return fam;
}

}  // namespace sdlab
