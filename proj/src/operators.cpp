#include "sdlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace sdlab {

GridFunction reflected_adjoint_kernel(const GridFunction& k, int in_dim) {
    const GridSpec& g = k.grid();
    const int kd = k.value_dim();
    const int out_dim = kd == 1 ? 1 : kd / in_dim;
    GridFunction r(g, kd);
    const auto n = g.n;
    const auto o = g.origin();
    const std::int64_t rows = g.dim == 2 ? n : 1;
    for (std::int64_t i1 = 0; i1 < rows; ++i1) {
        for (std::int64_t i0 = 0; i0 < n; ++i0) {
            std::size_t src = k.cell_index(i0, i1);
            bool nz = false;
            for (int m = 0; m < kd; ++m) nz = nz || k.at(src, m) != cplx(0.0);
            if (!nz) continue;
            std::int64_t j0 = 2 * o - i0;
            std::int64_t j1 = g.dim == 2 ? 2 * o - i1 : 0;
            if (j0 < 0 || j0 >= n || j1 < 0 || j1 >= rows) throw Error("kernel touches the grid corner; cannot reflect");
            std::size_t dst = k.cell_index(j0, j1);
            if (kd == 1) {
                r.at(dst, 0) = std::conj(k.at(src, 0));
            } else {
                // (out x in) -> (in x out) conjugate transpose
                for (int a = 0; a < out_dim; ++a)
                    for (int b = 0; b < in_dim; ++b) r.at(dst, b * out_dim + a) = std::conj(k.at(src, a * in_dim + b));
            }
        }
    }
    return r;
}

LinearOp convolution_op(const GridFunction& kernel, const CellMask& window) {
    LinearOp op;
    op.grid = kernel.grid();
    const int kd = kernel.value_dim();
    // A vector kernel is read as out x 1 unless it is componentwise.
    op.in_dim = 1;
    op.out_dim = kd;
    op.window = window;
    auto k = std::make_shared<GridFunction>(kernel);
    auto kr = std::make_shared<GridFunction>(reflected_adjoint_kernel(kernel, 1));
    op.forward = [k](const GridFunction& f) { return convolve(f, *k); };
    op.backward = [kr](const GridFunction& g) { return convolve_truncated(g, *kr); };
    if (kd == 1) op.out_dim = 1;
    return op;
}

LinearOp identity_op(const GridSpec& g, const CellMask& window, cplx scale) {
    LinearOp op;
    op.grid = g;
    op.window = window;
    op.forward = [scale](const GridFunction& f) { return scale * f; };
    op.backward = [scale](const GridFunction& f) { return std::conj(scale) * f; };
    return op;
}

LinearOp compose(const LinearOp& a, const LinearOp& b) {
    LinearOp op;
    op.grid = b.grid;
    op.in_dim = b.in_dim;
    op.out_dim = a.out_dim;
    op.window = b.window;
    op.forward = [a, b](const GridFunction& f) { return a.apply(b.forward(f)); };
    op.backward = [a, b](const GridFunction& g) { return b.backward(a.adjoint(g)); };
    return op;
}

LinearOp scaled(const LinearOp& a, cplx s) {
    LinearOp op = a;
    op.forward = [a, s](const GridFunction& f) { return s * a.forward(f); };
    op.backward = [a, s](const GridFunction& g) { return std::conj(s) * a.backward(g); };
    return op;
}

CellMask interior_window(const GridSpec& g, double margin) {
    auto m = static_cast<std::int64_t>(std::ceil(margin / g.spacing() - 1e-9));
    CellBox b = whole_grid(g);
    for (int a = 0; a < g.dim; ++a) {
        b.lo[a] += m;
        b.hi[a] -= m;
    }
    if (b.empty()) throw Error("interior window is empty");
    return CellMask::from_box(b);
}

double OperatorFamily::a(int j) const {
    auto it = coeff.find(j);
    return it == coeff.end() ? 1.0 : it->second;
}

GridFunction OperatorFamily::kernel(int j) const {
    if (j < n1 || j > n2) throw Error("scale outside the family range");
    GridFunction k = kernel_fn(j);
    double c = a(j);
    if (c != 1.0) k *= c;
    return k;
}

GridFunction OperatorFamily::summed_kernel(int lo, int hi) const {
    const int a = std::max(lo, n1), b = std::min(hi, n2);
    if (a > b) return GridFunction(grid, in_dim == 1 && out_dim == 1 ? 1 : in_dim * out_dim);
    GridFunction s = kernel(a);
    for (int j = a + 1; j <= b; ++j) s += kernel(j);
    return s;
}

GridFunction apply_scale(const OperatorFamily& fam, int j, const GridFunction& f) {
    return convolve(f, fam.kernel(j));
}

GridFunction sum_apply(const OperatorFamily& fam, int lo, int hi, const GridFunction& f) {
    return convolve(f, fam.summed_kernel(lo, hi));
}

GridFunction dilate_kernel(const GridFunction& kj, int j) {
    GridFunction out = kj.dilated(-j);
    out *= std::pow(2.0, j * kj.grid().dim);
    return out;
}

DilatedScale dilate_op(const OperatorFamily& fam, int j) {
    GridFunction full = dilate_kernel(fam.kernel(j), j);
    const GridSpec& dg = full.grid();
    // Crop to a small unit-scale window with the same spacing.
    double Lu = std::min(dg.half_width, 4.0);
    auto nu = static_cast<std::int64_t>(std::llround(2.0 * Lu / dg.spacing()));
    GridSpec ug(dg.dim, nu, Lu);
    GridFunction k(ug, full.value_dim());
    const std::int64_t shift = dg.origin() - ug.origin();
    const std::int64_t rows = ug.dim == 2 ? nu : 1;
    for (std::int64_t i1 = 0; i1 < rows; ++i1)
        for (std::int64_t i0 = 0; i0 < nu; ++i0)
            for (int m = 0; m < full.value_dim(); ++m)
                k.at(k.cell_index(i0, i1), m) = full.at(full.cell_index(i0 + shift, ug.dim == 2 ? i1 + shift : 0), m);
    DilatedScale ds{k, convolution_op(k, interior_window(ug, 1.0 + ug.spacing()))};
    return ds;
}

double kernel_support_radius(const GridFunction& k) {
    const GridSpec& g = k.grid();
    const double h = g.spacing();
    double best = 0.0;
    for (std::size_t c = 0; c < k.cells(); ++c) {
        if (k.magnitude(c) == 0.0) continue;
        auto x = k.position(c);
        double s = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double off = x[a] + g.half_width - static_cast<double>(g.origin()) * h;  // offset from the origin sample
            double m = std::max(std::abs(off), std::abs(off + h));
            s += m * m;
        }
        best = std::max(best, std::sqrt(s));
    }
    return best;
}

double kernel_inner_radius(const GridFunction& k) {
    const GridSpec& g = k.grid();
    const double h = g.spacing();
    double best = kInf;
    for (std::size_t c = 0; c < k.cells(); ++c) {
        if (k.magnitude(c) == 0.0) continue;
        auto x = k.position(c);
        double s = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double off = x[a] + g.half_width - static_cast<double>(g.origin()) * h;
            double m = (off <= 0.0 && off + h >= 0.0) ? 0.0 : std::min(std::abs(off), std::abs(off + h));
            s += m * m;
        }
        best = std::min(best, std::sqrt(s));
    }
    return best;
}

bool support_condition_holds(const OperatorFamily& fam) {
    for (int j = fam.n1; j <= fam.n2; ++j)
        if (kernel_support_radius(fam.kernel(j)) > std::ldexp(1.0, j) * (1.0 + 1e-12)) return false;
    return true;
}

bool strengthened_support_holds(const OperatorFamily& fam, double delta) {
    for (int j = fam.n1; j <= fam.n2; ++j) {
        GridFunction k = fam.kernel(j);
        if (k.is_zero()) continue;
        double s = std::ldexp(1.0, j);
        if (kernel_support_radius(k) > s * (1.0 + 1e-12)) return false;
        if (kernel_inner_radius(k) < delta * s * (1.0 - 1e-12)) return false;
    }
    return true;
}

bool output_within(const GridFunction& in, const GridFunction& out, double radius) {
    const GridSpec& g = in.grid();
    const double h = g.spacing();
    const auto R = static_cast<std::int64_t>(std::ceil(radius / h)) + 1;
    const std::int64_t rows = g.dim == 2 ? g.n : 1;
    for (std::int64_t i1 = 0; i1 < rows; ++i1) {
        for (std::int64_t i0 = 0; i0 < g.n; ++i0) {
            if (out.magnitude(out.cell_index(i0, i1)) == 0.0) continue;
            bool found = false;
            for (std::int64_t j1 = std::max<std::int64_t>(0, i1 - (g.dim == 2 ? R : 0));
                 !found && j1 <= std::min(rows - 1, i1 + (g.dim == 2 ? R : 0)); ++j1) {
                for (std::int64_t j0 = std::max<std::int64_t>(0, i0 - R); j0 <= std::min(g.n - 1, i0 + R); ++j0) {
                    if (in.magnitude(in.cell_index(j0, j1)) == 0.0) continue;
                    double dx = static_cast<double>(i0 - j0) * h;
                    double dy = static_cast<double>(i1 - j1) * h;
                    if (std::sqrt(dx * dx + dy * dy) <= radius * (1.0 + 1e-12)) {
                        found = true;
                        break;
                    }
                }
            }
            if (!found) return false;
        }
    }
    return true;
}

namespace {

struct Weight {
    std::int64_t index;
    double w;
};

// Overlap weights of the target interval [u, v) (sigma coordinates) with the
// sigma cells, normalized by the interval length.
std::vector<Weight> overlaps(double u, double v, const GridSpec& s) {
    std::vector<Weight> out;
    const double hs = s.spacing();
    auto i_lo = static_cast<std::int64_t>(std::floor((u + s.half_width) / hs));
    auto i_hi = static_cast<std::int64_t>(std::ceil((v + s.half_width) / hs));
    for (std::int64_t i = std::max<std::int64_t>(i_lo, 0); i < std::min(i_hi, s.n); ++i) {
        double a = std::max(u, s.coord(i));
        double b = std::min(v, s.coord(i) + hs);
        if (b > a) out.push_back({i, (b - a) / (v - u)});
    }
    return out;
}

}  // namespace

GridFunction resample_dilated(const GridFunction& sigma, double t, const GridSpec& target) {
    const GridSpec& sg = sigma.grid();
    if (sg.dim != target.dim) throw Error("resample: dimension mismatch");
    GridFunction out(target, sigma.value_dim());
    const double h = target.spacing();
    const double scale = std::pow(t, -target.dim);
    const auto o = target.origin();
    // Offsets are measured from the origin sample; sigma lives on [-L_s, L_s).
    const auto reach = static_cast<std::int64_t>(std::ceil(t * sg.half_width / h)) + 1;
    std::vector<std::vector<Weight>> w(static_cast<std::size_t>(2 * reach + 1));
    for (std::int64_t d = -reach; d <= reach; ++d) {
        double x = static_cast<double>(d) * h;
        w[static_cast<std::size_t>(d + reach)] = overlaps(x / t, (x + h) / t, sg);
    }
    const std::int64_t rows = target.dim == 2 ? target.n : 1;
    for (std::int64_t i1 = 0; i1 < rows; ++i1) {
        std::int64_t d1 = target.dim == 2 ? i1 - o : 0;
        if (target.dim == 2 && (d1 < -reach || d1 > reach)) continue;
        for (std::int64_t i0 = 0; i0 < target.n; ++i0) {
            std::int64_t d0 = i0 - o;
            if (d0 < -reach || d0 > reach) continue;
            const auto& w0 = w[static_cast<std::size_t>(d0 + reach)];
            std::size_t c = out.cell_index(i0, i1);
            for (int m = 0; m < sigma.value_dim(); ++m) {
                cplx acc = 0.0;
                if (target.dim == 1) {
                    for (const auto& a : w0) acc += a.w * sigma.at(static_cast<std::size_t>(a.index), m);
                } else {
                    const auto& w1 = w[static_cast<std::size_t>(d1 + reach)];
                    for (const auto& b : w1)
                        for (const auto& a : w0) acc += a.w * b.w * sigma.at(sigma.cell_index(a.index, b.index), m);
                }
                out.at(c, m) = acc * scale;
            }
        }
    }
    return out;
}

namespace {

std::function<GridFunction(int)> cached(std::function<GridFunction(int)> fn) {
    struct Cache {
        std::mutex mu;
        std::map<int, GridFunction> store;
    };
    auto cache = std::make_shared<Cache>();
    return [cache, fn](int j) {
        {
            std::lock_guard lock(cache->mu);
            auto it = cache->store.find(j);
            if (it != cache->store.end()) return it->second;
        }
        GridFunction k = fn(j);
        std::lock_guard lock(cache->mu);
        cache->store.emplace(j, k);
        return k;
    };
}

void check_sigma(const GridFunction& sigma) {
    if (sigma.grid().half_width != 1.0) throw Error("sigma must be given on a unit grid (L = 1)");
    cplx mean = 0.0;
    double mass = 0.0;
    for (std::size_t c = 0; c < sigma.cells(); ++c) {
        mean += sigma.values()[c];
        mass += std::abs(sigma.values()[c]);
    }
    if (std::abs(mean) > 1e-12 * std::max(mass, 1.0)) throw Error("radon_family: sigma has nonzero mean");
    if (kernel_support_radius(sigma) > 1.0 + 1e-12) throw Error("radon_family: sigma not supported in the unit ball");
}

}  // namespace

OperatorFamily radon_family(const GridFunction& sigma, const GridSpec& working, int n1, int n2,
                            const std::map<int, double>& coeff) {
    check_sigma(sigma);
    for (auto& [j, c] : coeff)
        if (std::abs(c) > 1.0 + 1e-12) throw Error("radon_family: coefficients must satisfy |a_j| <= 1");
    OperatorFamily fam;
    fam.name = "radon";
    fam.grid = working;
    fam.n1 = n1;
    fam.n2 = n2;
    fam.coeff = coeff;
    fam.inner_radius = kernel_inner_radius(sigma);
    auto s = std::make_shared<GridFunction>(sigma);
    fam.kernel_fn = cached([s, working](int j) { return resample_dilated(*s, std::ldexp(1.0, j), working); });
    return fam;
}

OperatorFamily growing_family(const GridFunction& sigma, const GridSpec& working, int n1, int n2) {
    OperatorFamily fam = radon_family(sigma, working, n1, n2);
    fam.name = "growing";
    auto base = fam.kernel_fn;
    const int d = working.dim;
    fam.kernel_fn = [base, d](int j) {
        GridFunction k = base(j);
        k *= std::pow(2.0, 0.5 * j * d);
        return k;
    };
    return fam;
}

GridFunction odd_step_sigma(std::int64_t n) {
    GridSpec g(1, n, 1.0);
    GridFunction s(g);
    for (std::size_t c = 0; c < s.cells(); ++c) {
        double x = g.coord(static_cast<std::int64_t>(c));
        if (x >= 0.5 && x < 1.0) s.values()[c] = 1.0;
        if (x >= -1.0 && x < -0.5) s.values()[c] = -1.0;
    }
    return s;
}

GridFunction hat_sigma(std::int64_t n) {
    GridSpec g(1, n, 1.0);
    GridFunction s(g);
    for (std::size_t c = 0; c < s.cells(); ++c) s.values()[c] = std::max(0.0, 1.0 - std::abs(g.center(static_cast<std::int64_t>(c))));
    return s;
}

GridFunction bump_sigma(std::int64_t n) {
    GridSpec g(1, n, 1.0);
    GridFunction s(g);
    for (std::size_t c = 0; c < s.cells(); ++c) {
        double x = g.center(static_cast<std::int64_t>(c));
        if (std::abs(x) < 1.0) s.values()[c] = std::exp(1.0 - 1.0 / (1.0 - x * x));
    }
    return s;
}

DilationSet::DilationSet(std::vector<double> values) : t(std::move(values)) {
    for (double v : t)
        if (!(v > 0.0)) throw Error("dilation set must be positive");
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
}

std::vector<double> DilationSet::piece(int j) const {
    std::vector<double> out;
    for (double v : t) {
        double s = std::ldexp(v, -j);
        if (s >= 1.0 && s <= 2.0) out.push_back(s);
    }
    return out;
}

std::vector<int> DilationSet::octaves() const {
    std::vector<int> out;
    for (double v : t) {
        int e = 0;
        double m = std::frexp(v, &e);  // v = m 2^e, m in [1/2, 1)
        int j = e - 1;
        out.push_back(j);
        if (m == 0.5) out.push_back(j - 1);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DilationSet DilationSet::lacunary(int jlo, int jhi) {
    std::vector<double> v;
    for (int j = jlo; j <= jhi; ++j) v.push_back(std::ldexp(1.0, j));
    return DilationSet(v);
}

GridFunction maximal_over_dilations(const GridFunction& sigma, const DilationSet& E, const GridFunction& f) {
    GridFunction out(f.grid());
    for (double t : E.t) {
        GridFunction k = resample_dilated(sigma, t, f.grid());
        GridFunction c = convolve(f, k);
        for (std::size_t i = 0; i < out.cells(); ++i)
            out.values()[i] = std::max(out.values()[i].real(), c.magnitude(i));
    }
    return out;
}

}  // namespace sdlab
