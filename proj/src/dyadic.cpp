#include "sdlab/dyadic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sdlab/fft.hpp"

namespace sdlab {

std::vector<DyadicCube> lattice_cubes(const DyadicLattice& lat, int k, const Cube& extent) {
    std::array<std::int64_t, 2> lo{0, 0}, hi{0, 0};
    for (int a = 0; a < lat.dim; ++a) {
        double r = lat.offset_thirds(k, a) / 3.0;
        lo[a] = static_cast<std::int64_t>(std::floor(std::ldexp(extent.lo[a], k) - r)) - 1;
        hi[a] = static_cast<std::int64_t>(std::ceil(std::ldexp(extent.hi(a), k) - r)) + 1;
    }
    std::vector<DyadicCube> out;
    for (std::int64_t z1 = lo[1]; z1 <= hi[1]; ++z1) {
        for (std::int64_t z0 = lo[0]; z0 <= hi[0]; ++z0) {
            DyadicCube q{lat, k, {z0, z1}};
            if (q.geometry().intersects(extent)) out.push_back(q);
        }
    }
    return out;
}

bool nested_or_disjoint(const std::vector<Cube>& cubes, double tol) {
    for (std::size_t i = 0; i < cubes.size(); ++i) {
        for (std::size_t j = i + 1; j < cubes.size(); ++j) {
            const auto& a = cubes[i];
            const auto& b = cubes[j];
            if (!a.intersects(b, tol)) continue;
            if (!a.contains(b, tol) && !b.contains(a, tol)) return false;
        }
    }
    return true;
}

DyadicCube triple_base(const Cube& triple) {
    double base_side = triple.side / 3.0;
    int e = 0;
    if (!(base_side > 0) || std::frexp(base_side, &e) != 0.5) throw Error("not a triple family");
    const int k = -(e - 1);
    DyadicCube q{DyadicLattice::standard(triple.dim), k, {0, 0}};
    for (int a = 0; a < triple.dim; ++a) {
        double m = std::ldexp(triple.lo[a], k) + 1.0;
        double r = std::round(m);
        if (std::abs(m - r) > 1e-9) throw Error("not a triple family");
        q.z[a] = static_cast<std::int64_t>(r);
    }
    return q;
}

std::vector<int> three_lattice_split(const std::vector<Cube>& triples) {
    std::vector<int> cls;
    cls.reserve(triples.size());
    for (const auto& t : triples) {
        DyadicCube q = triple_base(t);
        int nu = 0;
        int mult = 1;
        for (int a = 0; a < t.dim; ++a) {
            std::int64_t v = (q.z[a] - 1) * ((q.k % 2 == 0) ? 1 : -1);
            int ta = static_cast<int>(((v % 3) + 3) % 3);
            nu += mult * ta;
            mult *= 3;
        }
        cls.push_back(nu);
    }
    return cls;
}

double carleson_gamma(double gamma, int M) {
    if (M < 1) throw Error("carleson_split: M must be positive");
    return 1.0 / (1.0 + (1.0 / gamma - 1.0) / static_cast<double>(M));
}

std::vector<int> containment_layers(const std::vector<Cube>& cubes) {
    std::vector<std::size_t> order(cubes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cubes[a].side > cubes[b].side; });
    std::vector<int> layer(cubes.size(), 0);
    for (std::size_t t = 0; t < order.size(); ++t) {
        const std::size_t i = order[t];
        int best = -1;
        double best_side = kInf;
        for (std::size_t s = 0; s < t; ++s) {
            const std::size_t j = order[s];
            if (cubes[j].contains(cubes[i]) && cubes[j].side <= best_side) {
                best_side = cubes[j].side;
                best = layer[j];
            }
        }
        layer[i] = best + 1;
    }
    return layer;
}

std::vector<SparseFamily> carleson_split(const SparseFamily& fam, int M) {
    const double gt = carleson_gamma(fam.gamma, M);
    if (M == 1) return {fam};
    auto layer = containment_layers(fam.cubes);
    std::vector<SparseFamily> out(static_cast<std::size_t>(M));
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(M));
    for (std::size_t i = 0; i < fam.size(); ++i) members[static_cast<std::size_t>(layer[i] % M)].push_back(i);

    for (int s = 0; s < M; ++s) {
        auto& sub = out[static_cast<std::size_t>(s)];
        sub.grid = fam.grid;
        sub.gamma = gt;
        const auto& idx = members[static_cast<std::size_t>(s)];
        std::vector<CellMask> masks(idx.size());
        std::vector<std::size_t> order(idx.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fam.cubes[idx[a]].side < fam.cubes[idx[b]].side; });
        CellMask used;
        // Bottom-up: every cube takes ceil(gt |Q|) free cells.
        for (auto t : order) {
            const Cube& q = fam.cubes[idx[t]];
            CellMask box = CellMask::from_box(cells_of(q, fam.grid));
            CellMask free = box.subtract(used.intersect(box));
            auto need = static_cast<std::int64_t>(std::ceil(gt * static_cast<double>(box.size()) - 1e-9));
            masks[t] = free.first_cells(need);
            used = used.unite(masks[t]);
        }
        // Top-down: hand the remaining free cells of Q to Q.
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const Cube& q = fam.cubes[idx[*it]];
            CellMask box = CellMask::from_box(cells_of(q, fam.grid));
            CellMask extra = box.subtract(used.intersect(box));
            masks[*it] = masks[*it].unite(extra);
            used = used.unite(extra);
        }
        for (std::size_t t = 0; t < idx.size(); ++t) sub.add(fam.cubes[idx[t]], masks[t]);
    }
    return out;
}

GridFunction CZDecomposition::bad1(std::size_t i) const {
    GridFunction b = f1.restricted(whitney.cube_cells(i));
    CellMask m = whitney.cube_cells(i);
    m.for_each_grid_cell(b.grid(), [&](std::size_t c) {
        for (int k = 0; k < b.value_dim(); ++k) b.at(c, k) -= mean1[i][static_cast<std::size_t>(k)];
    });
    return b;
}

GridFunction CZDecomposition::bad2(std::size_t i) const {
    GridFunction b = f2.restricted(whitney.cube_cells(i));
    CellMask m = whitney.cube_cells(i);
    m.for_each_grid_cell(b.grid(), [&](std::size_t c) {
        for (int k = 0; k < b.value_dim(); ++k) b.at(c, k) -= mean2[i][static_cast<std::size_t>(k)];
    });
    return b;
}

namespace {

CellMask above(const GridFunction& m, double t) {
    std::vector<std::uint8_t> flags(m.cells(), 0);
    for (std::size_t c = 0; c < m.cells(); ++c) flags[c] = m.values()[c].real() > t;
    return CellMask::from_flags(m.grid(), flags);
}

void replace_by_means(const WhitneyFamily& wf, const GridFunction& f, GridFunction& g,
                      std::vector<std::vector<cplx>>& means) {
    g = f;
    means.assign(wf.cubes.size(), std::vector<cplx>(static_cast<std::size_t>(f.value_dim()), 0.0));
    for (std::size_t i = 0; i < wf.cubes.size(); ++i) {
        CellMask m = wf.cube_cells(i);
        auto& mu = means[i];
        const auto cnt = static_cast<double>(m.size());
        m.for_each_grid_cell(f.grid(), [&](std::size_t c) {
            for (int k = 0; k < f.value_dim(); ++k) mu[static_cast<std::size_t>(k)] += f.at(c, k);
        });
        for (auto& z : mu) z /= cnt;
        m.for_each_grid_cell(f.grid(), [&](std::size_t c) {
            for (int k = 0; k < f.value_dim(); ++k) g.at(c, k) = mu[static_cast<std::size_t>(k)];
        });
    }
}

}  // namespace

CZDecomposition cz_decompose(const GridFunction& f1, const GridFunction& f2, const DyadicCube& q0, double p,
                             double q, double gamma) {
    const GridSpec& g = f1.grid();
    CZDecomposition cz;
    cz.root = q0;
    cz.p = p;
    cz.q = q;
    cz.gamma = gamma;
    cz.f1 = f1;
    const Cube geo = q0.geometry();
    const CellBox box0 = cells_of(geo, g);
    if (!f1.support_mask().within(box0)) throw Error("cz_decompose: f1 is not supported in Q0");
    const Cube triple = geo.tripled();
    cz.f2 = f2.restricted(cells_of(triple, g));
    const double qd = Exponent(q).dual();
    const double factor = std::pow(100.0, g.dim) / (1.0 - gamma);
    cz.threshold1 = std::pow(factor, 1.0 / p) * local_average(f1, geo, p);
    cz.threshold2 = std::pow(factor, 1.0 / qd) * local_average(cz.f2, triple, qd);

    cz.omega1 = above(hl_maximal(f1, p), cz.threshold1);
    cz.omega2 = above(hl_maximal(cz.f2, qd), cz.threshold2);
    CellMask omega = cz.omega1.unite(cz.omega2);
    cz.whitney.grid = g;
    if (omega.size() == static_cast<std::int64_t>(g.cells())) {
        // Degenerate input: no complement on the grid.
        omega = CellMask();
        cz.omega1 = CellMask();
        cz.omega2 = CellMask();
    }
    if (!omega.empty()) cz.whitney = whitney(omega, g);
    cz.omega_in_7q0 = omega.within(cells_of(geo.scaled_about_center(7.0), g));
    cz.e_root = CellMask::from_box(box0).subtract(omega);
    replace_by_means(cz.whitney, cz.f1, cz.g1, cz.mean1);
    replace_by_means(cz.whitney, cz.f2, cz.g2, cz.mean2);
    cz.g1_ratio = cz.threshold1 > 0 ? lp_norm(cz.g1, kInf) / cz.threshold1 : 0.0;
    cz.g2_ratio = cz.threshold2 > 0 ? lp_norm(cz.g2, kInf) / cz.threshold2 : 0.0;
    return cz;
}

int min_expectation_generation(const GridSpec& g) { return -ilog2_exact(g.half_width); }

GridFunction conditional_expectation(const GridFunction& f, int n) {
    const GridSpec& g = f.grid();
    if (n < min_expectation_generation(g) || n > finest_generation(g))
        throw Error("conditional_expectation: generation outside the grid resolution");
    const std::int64_t w = std::int64_t{1} << (finest_generation(g) - n);
    const std::int64_t blocks = g.n / w;
    const std::int64_t bl1 = g.dim == 2 ? blocks : 1;
    const std::int64_t w1 = g.dim == 2 ? w : 1;
    const double cnt = static_cast<double>(w * w1);
    GridFunction out(g, f.value_dim());
    for (std::int64_t b1 = 0; b1 < bl1; ++b1) {
        for (std::int64_t b0 = 0; b0 < blocks; ++b0) {
            for (int m = 0; m < f.value_dim(); ++m) {
                cplx s = 0.0;
                for (std::int64_t i1 = b1 * w1; i1 < (b1 + 1) * w1; ++i1)
                    for (std::int64_t i0 = b0 * w; i0 < (b0 + 1) * w; ++i0) s += f.at(f.cell_index(i0, i1), m);
                s /= cnt;
                for (std::int64_t i1 = b1 * w1; i1 < (b1 + 1) * w1; ++i1)
                    for (std::int64_t i0 = b0 * w; i0 < (b0 + 1) * w; ++i0) out.at(f.cell_index(i0, i1), m) = s;
            }
        }
    }
    return out;
}

GridFunction martingale_difference(const GridFunction& f, int n) {
    return conditional_expectation(f, n) - conditional_expectation(f, n - 1);
}

namespace {

double radial_integral(int m, int dim) {
    // omega_d int_0^{1/2} r^{m+d-1} (1 - 4 r^2)^4 dr, expanded exactly.
    static const double binom[5] = {1, 4, 6, 4, 1};
    double s = 0.0;
    for (int j = 0; j <= 4; ++j) {
        int e = m + 2 * j + dim;
        s += binom[j] * std::pow(-4.0, j) * std::pow(0.5, e) / e;
    }
    return s * (dim == 1 ? 2.0 : 2.0 * std::numbers::pi);
}

}  // namespace

std::array<double, 3> LPResolution::lambda0_coefficients(int dim) {
    Eigen::Matrix3d A;
    Eigen::Vector3d b(1.0, 0.0, 0.0);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) A(r, c) = radial_integral(2 * r + 2 * c, dim);
    Eigen::Vector3d x = A.fullPivLu().solve(b);
    return {x(0), x(1), x(2)};
}

double LPResolution::lambda0(const std::array<double, 2>& x, int dim) {
    static const auto c1 = lambda0_coefficients(1);
    static const auto c2 = lambda0_coefficients(2);
    const auto& c = dim == 1 ? c1 : c2;
    double r2 = x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0);
    double t = 1.0 - 4.0 * r2;
    if (t <= 0.0) return 0.0;
    double t2 = t * t;
    return (c[0] + c[1] * r2 + c[2] * r2 * r2) * t2 * t2;
}

double LPResolution::lambda0_moment(int m, int dim) {
    auto c = lambda0_coefficients(dim);
    return c[0] * radial_integral(m, dim) + c[1] * radial_integral(m + 2, dim) + c[2] * radial_integral(m + 4, dim);
}

double LPResolution::lambda1_moment(int m, int dim) { return (std::pow(2.0, -m) - 1.0) * lambda0_moment(m, dim); }

LPResolution::LPResolution(const GridSpec& g, int kmax) : g_(g), kmax_(kmax) {
    if (kmax < 0 || kmax > finest_generation(g)) throw Error("lp_resolution: kmax outside the grid resolution");
    if (g.half_width < 0.5) throw Error("lp_resolution: extent must contain the unit-scale bump");
    fft::Shape shape{g.dim, g.n, g.dim == 2 ? g.n : 1};
    for (int k = 0; k <= kmax; ++k) {
        GridFunction ker = p_kernel(k);
        std::vector<cplx> buf(shape.size());
        const auto n = g.n;
        const auto o = g.origin();
        for (std::size_t c = 0; c < ker.cells(); ++c) {
            auto i0 = (static_cast<std::int64_t>(c) % n - o + n) % n;
            auto i1 = g.dim == 2 ? (static_cast<std::int64_t>(c) / n - o + n) % n : 0;
            buf[static_cast<std::size_t>(i0 + n * i1)] = ker.values()[c] * g.cell_measure();
        }
        fft::forward(buf, shape);
        p_hat_.push_back(buf);
    }
    for (int k = 0; k <= kmax; ++k) {
        std::vector<cplx> l = p_hat_[static_cast<std::size_t>(k)];
        if (k > 0)
            for (std::size_t i = 0; i < l.size(); ++i) l[i] -= p_hat_[static_cast<std::size_t>(k - 1)][i];
        lam_hat_.push_back(std::move(l));
    }
    S_.assign(shape.size(), 0.0);
    for (const auto& l : lam_hat_)
        for (std::size_t i = 0; i < l.size(); ++i) S_[i] += std::norm(l[i]);
    double smin = *std::min_element(S_.begin(), S_.end());
    if (smin < 1e-10) throw Error("lp_resolution: resolution symbol degenerates; increase kmax");
}

GridFunction LPResolution::p_kernel(int k) const {
    const double s = std::ldexp(1.0, k);
    const double scale = std::pow(s, g_.dim);
    const int d = g_.dim;
    GridFunction ker = GridFunction::sample(g_, [&](const std::array<double, 2>& x) {
        return cplx(scale * lambda0({s * x[0], s * x[1]}, d));
    });
    double sum = 0.0;
    for (auto z : ker.values()) sum += z.real();
    sum *= g_.cell_measure();
    ker *= 1.0 / sum;
    return ker;
}

GridFunction LPResolution::apply_symbol_(const std::vector<cplx>& m, const GridFunction& f, bool tilde,
                                         int) const {
    fft::Shape shape{g_.dim, g_.n, g_.dim == 2 ? g_.n : 1};
    GridFunction out(g_, f.value_dim());
    for (int c = 0; c < f.value_dim(); ++c) {
        std::vector<cplx> buf(shape.size());
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = f.at(i, c);
        fft::forward(buf, shape);
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= tilde ? std::conj(m[i]) / S_[i] : m[i];
        fft::inverse(buf, shape);
        for (std::size_t i = 0; i < buf.size(); ++i) out.at(i, c) = buf[i];
    }
    return out;
}

GridFunction LPResolution::P(int k, const GridFunction& f) const {
    return apply_symbol_(p_hat_.at(static_cast<std::size_t>(k)), f, false, k);
}

GridFunction LPResolution::Lambda(int k, const GridFunction& f) const {
    return apply_symbol_(lam_hat_.at(static_cast<std::size_t>(k)), f, false, k);
}

GridFunction LPResolution::LambdaTilde(int k, const GridFunction& f) const {
    return apply_symbol_(lam_hat_.at(static_cast<std::size_t>(k)), f, true, k);
}

GridFunction LPResolution::partial_sum(int K, const GridFunction& f) const {
    GridFunction acc(g_, f.value_dim());
    for (int k = 0; k <= std::min(K, kmax_); ++k) acc += Lambda(k, LambdaTilde(k, f));
    return acc;
}

}  // namespace sdlab
