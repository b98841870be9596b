#include "sdlab/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "sdlab/maxvar.hpp"

namespace sdlab::kernels {

void lattice_maximal(const PrefixSums& ps, const std::vector<DyadicLattice>& lattices, int kc, int kf,
                     std::vector<double>& out, double scale) {
    const GridSpec& g = ps.grid();
    const auto cells = static_cast<std::int64_t>(g.cells());
    out.assign(static_cast<std::size_t>(cells), 0.0);
    // Cubes are products of intervals, so the cell range along each axis only
    // depends on the index along that axis.
    struct Table {
        std::vector<std::int64_t> lo[2], hi[2];
    };
    std::vector<Table> tables;
    for (const auto& lat : lattices) {
        for (int k = kc; k <= kf; ++k) {
            Table t;
            for (int a = 0; a < g.dim; ++a) {
                t.lo[a].resize(static_cast<std::size_t>(g.n));
                t.hi[a].resize(static_cast<std::size_t>(g.n));
            }
            for (std::int64_t i = 0; i < g.n; ++i) {
                const double x = g.center(i);
                DyadicCube q = containing_cube(lat, k, {x / scale, x / scale});
                Cube geo = q.geometry();
                if (scale != 1.0) {
                    geo.lo = {geo.lo[0] * scale, geo.lo[1] * scale};
                    geo.side *= scale;
                }
                CellBox b = cells_of(geo, g);
                for (int a = 0; a < g.dim; ++a) {
                    t.lo[a][static_cast<std::size_t>(i)] = b.lo[a];
                    t.hi[a][static_cast<std::size_t>(i)] = b.hi[a];
                }
            }
            tables.push_back(std::move(t));
        }
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < cells; ++c) {
        const auto i0 = static_cast<std::size_t>(c % g.n);
        const auto i1 = static_cast<std::size_t>(c / g.n);
        double best = 0.0;
        for (const auto& t : tables) {
            CellBox b;
            b.dim = g.dim;
            b.lo[0] = t.lo[0][i0];
            b.hi[0] = t.hi[0][i0];
            if (g.dim == 2) {
                b.lo[1] = t.lo[1][i1];
                b.hi[1] = t.hi[1][i1];
            }
            best = std::max(best, ps.average(b));
        }
        out[static_cast<std::size_t>(c)] = best;
    }
}

void convolve_direct(const GridFunction& f, const GridFunction& k, GridFunction& out) {
    const GridSpec& g = f.grid();
    CellBox fb = f.support_box();
    CellBox kb = kernel_offsets(k);
    if (fb.empty() || kb.empty()) return;
    CellBox ob = fb;
    for (int a = 0; a < g.dim; ++a) {
        ob.lo[a] = fb.lo[a] + kb.lo[a];
        ob.hi[a] = fb.hi[a] + kb.hi[a] - 1;
    }
    ob = ob.clipped(g);
    const int in = f.value_dim();
    const int od = out.value_dim();
    const bool componentwise = k.value_dim() == 1;
    const double mu = g.cell_measure();
    const auto o = g.origin();
    const std::int64_t w0 = ob.extent(0);
    const std::int64_t total = ob.count();
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < total; ++t) {
        const std::int64_t i0 = ob.lo[0] + t % w0;
        const std::int64_t i1 = g.dim == 2 ? ob.lo[1] + t / w0 : 0;
        const std::size_t oc = f.cell_index(i0, i1);
        for (int m = 0; m < od; ++m) {
            cplx acc = 0.0;
            const std::int64_t r0 = g.dim == 2 ? kb.lo[1] : 0;
            const std::int64_t r1 = g.dim == 2 ? kb.hi[1] : 1;
            for (std::int64_t s1 = r0; s1 < r1; ++s1) {
                const std::int64_t j1 = i1 - s1;
                if (g.dim == 2 && (j1 < fb.lo[1] || j1 >= fb.hi[1])) continue;
                for (std::int64_t s0 = kb.lo[0]; s0 < kb.hi[0]; ++s0) {
                    const std::int64_t j0 = i0 - s0;
                    if (j0 < fb.lo[0] || j0 >= fb.hi[0]) continue;
                    const std::size_t kc = k.cell_index(s0 + o, g.dim == 2 ? s1 + o : 0);
                    const std::size_t fc = f.cell_index(j0, j1);
                    if (componentwise) {
                        acc += f.at(fc, m) * k.at(kc, 0);
                    } else {
                        for (int ic = 0; ic < in; ++ic) acc += f.at(fc, ic) * k.at(kc, m * in + ic);
                    }
                }
            }
            out.at(oc, m) = acc * mu;
        }
    }
}

std::vector<double> pointwise_variation(const std::vector<GridFunction>& seq, double r) {
    if (seq.empty()) return {};
    const auto cells = static_cast<std::int64_t>(seq.front().cells());
    const int m = seq.front().value_dim();
    std::vector<double> out(static_cast<std::size_t>(cells));
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t c = 0; c < cells; ++c) {
        std::vector<std::vector<cplx>> s(seq.size(), std::vector<cplx>(static_cast<std::size_t>(m)));
        for (std::size_t j = 0; j < seq.size(); ++j)
            for (int k = 0; k < m; ++k) s[j][static_cast<std::size_t>(k)] = seq[j].at(static_cast<std::size_t>(c), k);
        out[static_cast<std::size_t>(c)] = vr_norm(s, r);
    }
    return out;
}

std::vector<double> pointwise_lr(const std::vector<GridFunction>& seq, double r) {
    if (seq.empty()) return {};
    const auto cells = static_cast<std::int64_t>(seq.front().cells());
    std::vector<double> out(static_cast<std::size_t>(cells));
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < cells; ++c) {
        double acc = 0.0;
        for (const auto& f : seq) {
            double a = f.magnitude(static_cast<std::size_t>(c));
            if (r == kInf)
                acc = std::max(acc, a);
            else
                acc += std::pow(a, r);
        }
        out[static_cast<std::size_t>(c)] = r == kInf ? acc : std::pow(acc, 1.0 / r);
    }
    return out;
}

}  // namespace sdlab::kernels
