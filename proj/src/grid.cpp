#include "sdlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sdlab/fft.hpp"
#include "sdlab/kernels.hpp"

namespace sdlab {

GridFunction::GridFunction(const GridSpec& g, int value_dim)
    : grid_(g), m_(value_dim), v_(g.cells() * static_cast<std::size_t>(value_dim)) {
    if (value_dim < 1) throw Error("value dimension must be positive");
}

GridFunction GridFunction::sample(const GridSpec& g, const std::function<cplx(const std::array<double, 2>&)>& fn) {
    GridFunction f(g);
    for (std::size_t c = 0; c < f.cells(); ++c) f.v_[c] = fn(f.position(c));
    return f;
}

GridFunction GridFunction::indicator(const GridSpec& g, const Cube& q) {
    return indicator(g, CellMask::from_box(cells_of(q, g)));
}

GridFunction GridFunction::indicator(const GridSpec& g, const CellMask& m) {
    GridFunction f(g);
    m.for_each_grid_cell(g, [&](std::size_t c) { f.v_[c] = 1.0; });
    return f;
}

GridFunction GridFunction::constant(const GridSpec& g, cplx c) {
    GridFunction f(g);
    std::fill(f.v_.begin(), f.v_.end(), c);
    return f;
}

std::array<double, 2> GridFunction::position(std::size_t cell) const {
    auto n = static_cast<std::size_t>(grid_.n);
    std::array<double, 2> x{grid_.coord(static_cast<std::int64_t>(cell % n)), 0.0};
    if (grid_.dim == 2) x[1] = grid_.coord(static_cast<std::int64_t>(cell / n));
    return x;
}

double GridFunction::magnitude(std::size_t cell) const {
    if (m_ == 1) return std::abs(v_[cell]);
    double s = 0.0;
    for (int c = 0; c < m_; ++c) s += std::norm(at(cell, c));
    return std::sqrt(s);
}

std::vector<double> GridFunction::magnitudes() const {
    std::vector<double> out(cells());
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = magnitude(c);
    return out;
}

bool GridFunction::is_zero() const {
    return std::all_of(v_.begin(), v_.end(), [](cplx z) { return z == cplx(0.0); });
}

CellBox GridFunction::support_box() const {
    CellBox b;
    b.dim = grid_.dim;
    b.lo = {grid_.n, grid_.dim == 2 ? grid_.n : 0};
    b.hi = {0, grid_.dim == 2 ? 0 : 1};
    const auto n = grid_.n;
    bool any = false;
    for (std::size_t c = 0; c < cells(); ++c) {
        bool nz = false;
        for (int k = 0; k < m_; ++k) nz = nz || at(c, k) != cplx(0.0);
        if (!nz) continue;
        any = true;
        auto i0 = static_cast<std::int64_t>(c) % n;
        b.lo[0] = std::min(b.lo[0], i0);
        b.hi[0] = std::max(b.hi[0], i0 + 1);
        if (grid_.dim == 2) {
            auto i1 = static_cast<std::int64_t>(c) / n;
            b.lo[1] = std::min(b.lo[1], i1);
            b.hi[1] = std::max(b.hi[1], i1 + 1);
        }
    }
    if (!any) {
        b.lo = {0, 0};
        b.hi = {0, grid_.dim == 2 ? 0 : 1};
    }
    return b;
}

CellMask GridFunction::support_mask() const {
    std::vector<std::uint8_t> flags(cells(), 0);
    for (std::size_t c = 0; c < cells(); ++c) flags[c] = magnitude(c) > 0.0;
    return CellMask::from_flags(grid_, flags);
}

void GridFunction::check_compatible(const GridFunction& o) const {
    if (!(grid_ == o.grid_) || m_ != o.m_) throw Error("grid functions live on different grids");
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
    for (auto& z : v_) z *= s;
    return *this;
}

GridFunction GridFunction::restricted(const CellMask& m) const {
    GridFunction out(grid_, m_);
    m.for_each_grid_cell(grid_, [&](std::size_t c) {
        for (int k = 0; k < m_; ++k) out.at(c, k) = at(c, k);
    });
    return out;
}

GridFunction GridFunction::restricted(const CellBox& b) const { return restricted(CellMask::from_box(b)); }

GridFunction GridFunction::abs() const {
    GridFunction out(grid_);
    for (std::size_t c = 0; c < cells(); ++c) out.v_[c] = magnitude(c);
    return out;
}

GridFunction GridFunction::component(int k) const {
    GridFunction out(grid_);
    for (std::size_t c = 0; c < cells(); ++c) out.v_[c] = at(c, k);
    return out;
}

GridFunction GridFunction::dilated(int j) const {
    GridFunction out = *this;
    out.grid_ = grid_.dilated(j);
    return out;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(cplx s, GridFunction a) { return a *= s; }

cplx pairing(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid() == g.grid()) || f.value_dim() != g.value_dim()) throw Error("pairing: incompatible functions");
    cplx s = 0.0;
    for (std::size_t i = 0; i < f.values().size(); ++i) s += f.values()[i] * g.values()[i];
    return s * f.grid().cell_measure();
}

double lp_norm(const GridFunction& f, double p) {
    if (p == kInf) {
        double m = 0.0;
        for (std::size_t c = 0; c < f.cells(); ++c) m = std::max(m, f.magnitude(c));
        return m;
    }
    if (!(p >= 1.0)) throw Error("lp_norm needs p >= 1");
    double s = 0.0;
    for (std::size_t c = 0; c < f.cells(); ++c) {
        double a = f.magnitude(c);
        if (a > 0.0) s += std::pow(a, p);
    }
    return std::pow(s * f.grid().cell_measure(), 1.0 / p);
}

namespace {

std::vector<double> decreasing_rearrangement(const GridFunction& f) {
    std::vector<double> v;
    v.reserve(f.cells());
    for (std::size_t c = 0; c < f.cells(); ++c) {
        double a = f.magnitude(c);
        if (a > 0.0) v.push_back(a);
    }
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace

double lorentz_weak_norm(const GridFunction& f, double p) {
    auto v = decreasing_rearrangement(f);
    const double mu = f.grid().cell_measure();
    double best = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        best = std::max(best, v[k] * std::pow(static_cast<double>(k + 1) * mu, 1.0 / p));
    }
    return best;
}

double lorentz_q1_norm(const GridFunction& f, double q) {
    // Exact integral of t^{1/q} f*(t) dt/t for the step rearrangement.
    auto v = decreasing_rearrangement(f);
    const double mu = f.grid().cell_measure();
    double s = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        double cur = std::pow(static_cast<double>(k + 1) * mu, 1.0 / q);
        s += v[k] * (cur - prev);
        prev = cur;
    }
    return q * s;
}

PrefixSums::PrefixSums(const GridFunction& f, double p) : g_(f.grid()), p_(p) {
    std::vector<double> w(f.cells());
    for (std::size_t c = 0; c < w.size(); ++c) {
        double a = f.magnitude(c);
        w[c] = p == 1.0 ? a : std::pow(a, p);
    }
    *this = PrefixSums(g_, w);
    p_ = p;
}

PrefixSums::PrefixSums(const GridSpec& g, const std::vector<double>& cellwise) : g_(g), p_(1.0) {
    const auto n = static_cast<std::size_t>(g.n);
    if (g.dim == 1) {
        s_.assign(n + 1, 0.0L);
        for (std::size_t i = 0; i < n; ++i) s_[i + 1] = s_[i] + cellwise[i];
    } else {
        s_.assign((n + 1) * (n + 1), 0.0L);
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            long double row = 0.0L;
            for (std::size_t i0 = 0; i0 < n; ++i0) {
                row += cellwise[i0 + n * i1];
                s_[(i0 + 1) + (n + 1) * (i1 + 1)] = s_[(i0 + 1) + (n + 1) * i1] + row;
            }
        }
    }
}

double PrefixSums::box_sum(const CellBox& b) const {
    CellBox c = b.clipped(g_);
    if (c.empty()) return 0.0;
    if (g_.dim == 1) return static_cast<double>(s_[c.hi[0]] - s_[c.lo[0]]);
    const auto w = static_cast<std::size_t>(g_.n + 1);
    auto at = [&](std::int64_t i0, std::int64_t i1) { return s_[static_cast<std::size_t>(i0) + w * i1]; };
    long double v = at(c.hi[0], c.hi[1]) - at(c.lo[0], c.hi[1]) - at(c.hi[0], c.lo[1]) + at(c.lo[0], c.lo[1]);
    return static_cast<double>(std::max(v, 0.0L));
}

double PrefixSums::average(const CellBox& b) const {
    double cnt = static_cast<double>(b.count());
    if (cnt <= 0) throw Error("empty cube");
    double a = box_sum(b) / cnt;
    return p_ == 1.0 ? a : std::pow(a, 1.0 / p_);
}

double local_average(const GridFunction& f, const Cube& q, double p) {
    const GridSpec& g = f.grid();
    CellBox box = cells_of(q, g);
    CellBox c = box.clipped(g);
    if (c.empty() || box.empty()) throw Error("empty cube");
    const double count = static_cast<double>(box.count());
    double s = 0.0;
    const std::int64_t r0 = g.dim == 2 ? c.lo[1] : 0;
    const std::int64_t r1 = g.dim == 2 ? c.hi[1] : 1;
    for (std::int64_t i1 = r0; i1 < r1; ++i1) {
        for (std::int64_t i0 = c.lo[0]; i0 < c.hi[0]; ++i0) {
            double a = f.magnitude(f.cell_index(i0, i1));
            if (p == kInf)
                s = std::max(s, a);
            else
                s += std::pow(a, p);
        }
    }
    if (p == kInf) return s;
    return std::pow(s / count, 1.0 / p);
}

double local_average(const GridFunction& f, const DyadicCube& q, double p) {
    return local_average(f, q.geometry(), p);
}

int finest_generation(const GridSpec& g) { return -g.spacing_log2(); }

int coarsest_generation(const GridSpec& g) { return -(ilog2_exact(g.half_width) + 2); }

GridFunction hl_maximal(const GridFunction& f, double p) {
    return hl_maximal(f, p, DyadicLattice::shifted_family(f.grid().dim));
}

GridFunction hl_maximal(const GridFunction& f, double p, const std::vector<DyadicLattice>& lattices) {
    PrefixSums ps(f, p);
    std::vector<double> m;
    kernels::lattice_maximal(ps, lattices, coarsest_generation(f.grid()), finest_generation(f.grid()), m);
    GridFunction out(f.grid());
    for (std::size_t c = 0; c < m.size(); ++c) out.values()[c] = m[c];
    return out;
}

int convolution_out_dim(const GridFunction& f, const GridFunction& k) {
    if (k.value_dim() == 1) return f.value_dim();
    if (k.value_dim() % f.value_dim() != 0) throw Error("kernel value dimension does not fit the input");
    return k.value_dim() / f.value_dim();
}

CellBox kernel_offsets(const GridFunction& k) {
    CellBox b = k.support_box();
    const auto o = k.grid().origin();
    for (int a = 0; a < k.grid().dim; ++a) {
        b.lo[a] -= o;
        b.hi[a] -= o;
    }
    return b;
}

void check_wraparound(const GridFunction& f, const GridFunction& k) {
    if (!(f.grid() == k.grid())) throw Error("convolve: kernel and input grids differ");
    CellBox fb = f.support_box();
    CellBox kb = kernel_offsets(k);
    if (fb.empty() || kb.empty()) return;
    for (int a = 0; a < f.grid().dim; ++a) {
        if (fb.lo[a] + kb.lo[a] < 0 || fb.hi[a] + kb.hi[a] - 1 > f.grid().n) throw Error("wraparound");
    }
}

GridFunction convolve_fft(const GridFunction& f, const GridFunction& k) {
    const GridSpec& g = f.grid();
    const int in = f.value_dim();
    const int out_dim = convolution_out_dim(f, k);
    const bool componentwise = k.value_dim() == 1;
    const std::int64_t N = 2 * g.n;
    fft::Shape shape{g.dim, N, g.dim == 2 ? N : 1};
    const std::size_t P = shape.size();
    const auto n = g.n;
    const auto o = g.origin();

    auto pad_input = [&](int comp) {
        std::vector<cplx> buf(P);
        for (std::size_t c = 0; c < f.cells(); ++c) {
            auto i0 = static_cast<std::int64_t>(c) % n;
            auto i1 = static_cast<std::int64_t>(c) / n;
            buf[static_cast<std::size_t>(i0 + N * i1)] = f.at(c, comp);
        }
        fft::forward(buf, shape);
        return buf;
    };
    auto pad_kernel = [&](int comp) {
        std::vector<cplx> buf(P);
        for (std::size_t c = 0; c < k.cells(); ++c) {
            auto i0 = static_cast<std::int64_t>(c) % n - o;
            auto i1 = g.dim == 2 ? static_cast<std::int64_t>(c) / n - o : 0;
            i0 = (i0 + N) % N;
            i1 = (i1 + (g.dim == 2 ? N : 1)) % (g.dim == 2 ? N : 1);
            buf[static_cast<std::size_t>(i0 + N * i1)] = k.at(c, comp);
        }
        fft::forward(buf, shape);
        return buf;
    };

    std::vector<std::vector<cplx>> F(in);
    for (int c = 0; c < in; ++c) F[c] = pad_input(c);
    GridFunction res(g, out_dim);
    const double mu = g.cell_measure();
    std::vector<cplx> acc(P);
    std::vector<std::vector<cplx>> K;
    if (componentwise) K.push_back(pad_kernel(0));
    for (int oc = 0; oc < out_dim; ++oc) {
        std::fill(acc.begin(), acc.end(), cplx(0.0));
        if (componentwise) {
            for (std::size_t i = 0; i < P; ++i) acc[i] = F[oc][i] * K[0][i];
        } else {
            for (int ic = 0; ic < in; ++ic) {
                auto Kc = pad_kernel(oc * in + ic);
                for (std::size_t i = 0; i < P; ++i) acc[i] += F[ic][i] * Kc[i];
            }
        }
        fft::inverse(acc, shape);
        for (std::size_t c = 0; c < res.cells(); ++c) {
            auto i0 = static_cast<std::int64_t>(c) % n;
            auto i1 = static_cast<std::int64_t>(c) / n;
            res.at(c, oc) = acc[static_cast<std::size_t>(i0 + N * i1)] * mu;
        }
    }
    return res;
}

GridFunction convolve(const GridFunction& f, const GridFunction& k) {
    check_wraparound(f, k);
    return convolve_truncated(f, k);
}

GridFunction convolve_truncated(const GridFunction& f, const GridFunction& k) {
    if (!(f.grid() == k.grid())) throw Error("convolve: kernel and input grids differ");
    const GridSpec& g = f.grid();
    GridFunction out(g, convolution_out_dim(f, k));
    CellBox fb = f.support_box();
    CellBox kb = kernel_offsets(k);
    if (fb.empty() || kb.empty()) return out;
    const double direct_cost = static_cast<double>(fb.count() + kb.count()) * static_cast<double>(kb.count());
    const double cells = std::pow(2.0 * static_cast<double>(g.n), g.dim);
    const double fft_cost = 6.0 * cells * std::log2(cells) * (k.value_dim() + f.value_dim());
    if (direct_cost <= fft_cost) {
        kernels::convolve_direct(f, k, out);
        return out;
    }
    return convolve_fft(f, k);
}

GridFunction delta_h(const GridFunction& f, const std::array<double, 2>& h) {
    const GridSpec& g = f.grid();
    std::array<std::int64_t, 2> s{0, 0};
    for (int a = 0; a < g.dim; ++a) {
        double q = h[a] / g.spacing();
        double r = std::round(q);
        if (std::abs(q - r) > 1e-9) throw Error("delta_h: offset is not a multiple of the grid spacing");
        s[a] = static_cast<std::int64_t>(r);
    }
    GridFunction out(g, f.value_dim());
    const auto n = g.n;
    const std::int64_t rows = g.dim == 2 ? n : 1;
    for (std::int64_t i1 = 0; i1 < rows; ++i1) {
        for (std::int64_t i0 = 0; i0 < n; ++i0) {
            std::size_t c = f.cell_index(i0, i1);
            std::int64_t j0 = i0 + s[0];
            std::int64_t j1 = i1 + s[1];
            bool inside = j0 >= 0 && j0 < n && j1 >= 0 && j1 < rows;
            for (int m = 0; m < f.value_dim(); ++m) {
                cplx shifted = inside ? f.at(f.cell_index(j0, j1), m) : cplx(0.0);
                out.at(c, m) = shifted - f.at(c, m);
            }
        }
    }
    return out;
}

GridFunction delta_h_iter(const GridFunction& f, const std::array<double, 2>& h, int M) {
    if (M < 0) throw Error("delta_h_iter: negative order");
    GridFunction out = f;
    for (int i = 0; i < M; ++i) out = delta_h(out, h);
    return out;
}

}  // namespace sdlab
