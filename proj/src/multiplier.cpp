#include "sdlab/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sdlab/fft.hpp"

namespace sdlab {

namespace {

constexpr double kPi = std::numbers::pi;

fft::Shape shape_of(const GridSpec& g) { return fft::Shape{g.dim, g.n, g.dim == 2 ? g.n : 1}; }

// Signed displacement |x_j| of FFT index j (periodic kernel layout).
double displacement(const GridSpec& g, std::size_t i) {
    const auto j0 = static_cast<std::int64_t>(i % static_cast<std::size_t>(g.n));
    const auto j1 = static_cast<std::int64_t>(i / static_cast<std::size_t>(g.n));
    const double h = g.spacing();
    const double x0 = static_cast<double>(fft::signed_bin(j0, g.n)) * h;
    const double x1 = g.dim == 2 ? static_cast<double>(fft::signed_bin(j1, g.n)) * h : 0.0;
    return std::hypot(x0, x1);
}

Xi frequency_at(const GridSpec& g, std::size_t i) {
    const auto k0 = static_cast<std::int64_t>(i % static_cast<std::size_t>(g.n));
    const auto k1 = static_cast<std::int64_t>(i / static_cast<std::size_t>(g.n));
    return {frequency(g, k0), g.dim == 2 ? frequency(g, k1) : 0.0};
}

double radius(const Xi& xi) { return std::hypot(xi[0], xi[1]); }

double log_bump(double r) {
    if (r <= 0.5 || r >= 2.0) return 0.0;
    double u = std::log2(r);
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

MultiplierSymbol composite(const MultiplierSymbol& m, std::function<cplx(const Xi&)> fn) {
    MultiplierSymbol c = m;
    c.matrix = nullptr;
    c.scalar = std::move(fn);
    return c;
}

}  // namespace

SampledSymbol SampledSymbol::zeros(const GridSpec& g, int rows, int cols) {
    SampledSymbol s;
    s.grid = g;
    s.rows = rows;
    s.cols = cols;
    s.entries.assign(static_cast<std::size_t>(rows * cols), std::vector<cplx>(g.cells()));
    return s;
}

SampledSymbol SampledSymbol::sample(const MultiplierSymbol& m, const GridSpec& g) {
    if (!m.is_matrix()) {
        SampledSymbol s = zeros(g, 1, 1);
        s.entries[0] = symbol_samples(m, g);
        return s;
    }
    SampledSymbol s = zeros(g, m.out_dim, m.in_dim);
    for (std::size_t i = 0; i < g.cells(); ++i) {
        Eigen::MatrixXcd M = m.matrix(frequency_at(g, i));
        for (int r = 0; r < s.rows; ++r)
            for (int c = 0; c < s.cols; ++c) s.entry(r, c)[i] = M(r, c);
    }
    return s;
}

double SampledSymbol::norm_at(std::size_t i) const {
    if (rows == 1 && cols == 1) return std::abs(entries[0][i]);
    Eigen::MatrixXcd M(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) M(r, c) = entry(r, c)[i];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(0);
}

double SampledSymbol::sup_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.cells(); ++i) s = std::max(s, norm_at(i));
    return s;
}

double SampledSymbol::l2_norm() const {
    double dxi = 1.0;
    for (int a = 0; a < grid.dim; ++a) dxi *= kPi / grid.half_width;
    double s = 0.0;
    for (const auto& e : entries)
        for (const auto& v : e) s += std::norm(v);
    return std::sqrt(s * dxi / std::pow(2.0 * kPi, grid.dim));
}

SampledSymbol& SampledSymbol::operator+=(const SampledSymbol& o) {
    if (!(o.grid == grid) || o.rows != rows || o.cols != cols) throw Error("sampled symbol mismatch");
    for (std::size_t e = 0; e < entries.size(); ++e)
        for (std::size_t i = 0; i < entries[e].size(); ++i) entries[e][i] += o.entries[e][i];
    return *this;
}

GridFunction apply_sampled(const SampledSymbol& m, const GridFunction& f) {
    const GridSpec& g = f.grid();
    if (!(g == m.grid)) throw Error("apply_sampled: grid mismatch");
    if (m.rows == 1 && m.cols == 1) return apply_samples(m.entries[0], f);
    if (f.value_dim() != m.cols) throw Error("apply_sampled: value dimension mismatch");
    std::vector<std::vector<cplx>> hat(static_cast<std::size_t>(m.cols), std::vector<cplx>(g.cells()));
    for (int c = 0; c < m.cols; ++c) {
        auto& v = hat[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.at(i, c);
        fft::forward(v, shape_of(g));
    }
    GridFunction out(g, m.rows);
    for (int r = 0; r < m.rows; ++r) {
        std::vector<cplx> acc(g.cells());
        for (int c = 0; c < m.cols; ++c) {
            const auto& e = m.entry(r, c);
            const auto& h = hat[static_cast<std::size_t>(c)];
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += e[i] * h[i];
        }
        fft::inverse(acc, shape_of(g));
        for (std::size_t i = 0; i < acc.size(); ++i) out.at(i, r) = acc[i];
    }
    return out;
}

LinearOp multiplier_op(const SampledSymbol& m) {
    LinearOp T;
    T.grid = m.grid;
    T.in_dim = m.cols;
    T.out_dim = m.rows;
    T.window = interior_window(m.grid, m.grid.half_width / 2.0);
    SampledSymbol adj = SampledSymbol::zeros(m.grid, m.cols, m.rows);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) {
            const auto& e = m.entry(r, c);
            auto& a = adj.entry(c, r);
            for (std::size_t i = 0; i < e.size(); ++i) a[i] = std::conj(e[i]);
        }
    T.forward = [m](const GridFunction& f) { return apply_sampled(m, f); };
    T.backward = [adj](const GridFunction& g) { return apply_sampled(adj, g); };
    return T;
}

double mpq_norm(const SampledSymbol& m, double p, double q, const AscentOptions& opt) {
    if (p == 2.0 && q == 2.0) return m.sup_norm();
    bool zero = true;
    for (const auto& e : m.entries)
        for (const auto& v : e) zero = zero && v == cplx(0.0);
    if (zero) return 0.0;
    return opnorm(multiplier_op(m), p, q, opt).value;
}

SymbolLocalization SymbolLocalization::standard(const GridSpec& g) {
    if (nyquist(g) / 4.0 < 2.0) throw Error("localization grid does not resolve the band |xi| < 2");
    SymbolLocalization loc;
    loc.grid = g;
    loc.phi = [](double r) { return stein_beta(r); };
    loc.psi0 = [](double r) { return 1.0 - smooth_step(4.0 * r - 1.0); };
    return loc;
}

SymbolLocalization SymbolLocalization::alternate(const GridSpec& g) {
    SymbolLocalization loc = standard(g);
    loc.phi = log_bump;
    loc.psi0 = [](double r) { return 1.0 - smooth_step((r * r - 1.0 / 16.0) / (3.0 / 16.0)); };
    return loc;
}

double SymbolLocalization::psi(int l, double r) const {
    if (l == 0) return psi0(r);
    return psi0(std::ldexp(r, -l)) - psi0(std::ldexp(r, 1 - l));
}

int SymbolLocalization::max_level() const {
    return static_cast<int>(std::ceil(std::log2(grid.half_width * std::sqrt(static_cast<double>(grid.dim))) - 1e-12)) +
           2;
}

SampledSymbol band_symbol(const MultiplierSymbol& m, double t, const SymbolLocalization& loc) {
    if (!(t > 0.0)) throw Error("band_symbol: t must be positive");
    if (2.0 * t > loc.band_limit) throw Error("band_symbol: t pushes the phi support past Nyquist/4");
    if (m.dim != loc.grid.dim) throw Error("band_symbol: dimension mismatch");
    const GridSpec& g = loc.grid;
    SampledSymbol s = SampledSymbol::zeros(g, m.is_matrix() ? m.out_dim : 1, m.is_matrix() ? m.in_dim : 1);
    for (std::size_t i = 0; i < g.cells(); ++i) {
        Xi xi = frequency_at(g, i);
        double ph = loc.phi(radius(xi));
        if (ph == 0.0) continue;
        Xi tx{t * xi[0], t * xi[1]};
        if (!m.is_matrix()) {
            s.entries[0][i] = ph * m.scalar(tx);
            continue;
        }
        Eigen::MatrixXcd M = m.matrix(tx);
        for (int r = 0; r < s.rows; ++r)
            for (int c = 0; c < s.cols; ++c) s.entry(r, c)[i] = ph * M(r, c);
    }
    return s;
}

namespace {

std::vector<std::vector<cplx>> kernels_of(const SampledSymbol& band) {
    std::vector<std::vector<cplx>> k = band.entries;
    for (auto& e : k) fft::inverse(e, shape_of(band.grid));
    return k;
}

SampledSymbol piece_from_kernels(const std::vector<std::vector<cplx>>& kern, const SampledSymbol& like, int l,
                                 const SymbolLocalization& loc) {
    SampledSymbol out = like;
    const GridSpec& g = like.grid;
    std::vector<double> w(g.cells());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = loc.psi(l, displacement(g, i));
    for (std::size_t e = 0; e < kern.size(); ++e) {
        auto& v = out.entries[e];
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = kern[e][i] * w[i];
        fft::forward(v, shape_of(g));
    }
    return out;
}

}  // namespace

SampledSymbol localize(const SampledSymbol& band, int l, const SymbolLocalization& loc) {
    if (l < 0) throw Error("localize: l must be >= 0");
    return piece_from_kernels(kernels_of(band), band, l, loc);
}

SampledSymbol localized_piece(const MultiplierSymbol& m, double t, int l, const SymbolLocalization& loc) {
    return localize(band_symbol(m, t, loc), l, loc);
}

std::vector<double> octave_tgrid(double lo_log2, double hi_log2, int per_octave) {
    std::vector<double> t;
    auto k0 = static_cast<int>(std::ceil(lo_log2 * per_octave - 1e-9));
    auto k1 = static_cast<int>(std::floor(hi_log2 * per_octave + 1e-9));
    for (int k = k0; k <= k1; ++k) t.push_back(std::exp2(static_cast<double>(k) / per_octave));
    return t;
}

int BFunctional::peak() const {
    if (profile.empty()) return -1;
    return static_cast<int>(std::max_element(profile.begin(), profile.end()) - profile.begin());
}

nlohmann::json BFunctional::to_json() const {
    return {{"B", B},         {"Bcirc", Bcirc},    {"profile", profile}, {"circ_profile", circ_profile},
            {"argmax_t", argmax_t}, {"p", p}, {"q", q}, {"peak", peak()}};
}

BFunctional b_functional(const MultiplierSymbol& m, double p, double q, int L, const std::vector<double>& tgrid,
                         const SymbolLocalization& loc, const AscentOptions& opt) {
    if (L < 0) throw Error("b_functional: L must be >= 0");
    BFunctional out;
    out.p = p;
    out.q = q;
    const auto nl = static_cast<std::size_t>(L + 1);
    const auto nt = tgrid.size();
    std::vector<double> nrm(nt * nl, 0.0), sup(nt * nl, 0.0);
    for (double t : tgrid)
        if (2.0 * t > loc.band_limit) throw Error("band_symbol: t pushes the phi support past Nyquist/4");
#pragma omp parallel for schedule(dynamic)
    for (std::size_t ti = 0; ti < nt; ++ti) {
        SampledSymbol band = band_symbol(m, tgrid[ti], loc);
        auto kern = kernels_of(band);
        for (std::size_t l = 0; l < nl; ++l) {
            SampledSymbol piece = piece_from_kernels(kern, band, static_cast<int>(l), loc);
            sup[ti * nl + l] = piece.sup_norm();
            nrm[ti * nl + l] = sup[ti * nl + l] == 0.0 ? 0.0 : mpq_norm(piece, p, q, opt);
        }
    }
    const int d = loc.grid.dim;
    out.profile.assign(nl, 0.0);
    out.circ_profile.assign(nl, 0.0);
    out.argmax_t.assign(nl, tgrid.empty() ? 0.0 : tgrid[0]);
    for (std::size_t l = 0; l < nl; ++l) {
        for (std::size_t ti = 0; ti < nt; ++ti) {
            if (nrm[ti * nl + l] > out.profile[l]) {
                out.profile[l] = nrm[ti * nl + l];
                out.argmax_t[l] = tgrid[ti];
            }
            out.circ_profile[l] = std::max(out.circ_profile[l], sup[ti * nl + l]);
        }
        const double wl = std::exp2(static_cast<double>(l) * d * (1.0 / p - 1.0 / q)) * (1.0 + static_cast<double>(l));
        out.B += out.profile[l] * wl;
        out.Bcirc += out.circ_profile[l];
    }
    return out;
}

double hoermander_sobolev(const MultiplierSymbol& m, double r, double alpha, const std::vector<double>& tgrid,
                          const SobolevOptions& opt) {
    if (alpha < 0.0) throw Error("hoermander_sobolev: alpha must be >= 0");
    if (!(r >= 1.0)) throw Error("hoermander_sobolev: r must be >= 1");
    const int d = m.dim;
    const std::int64_t n = opt.n;
    const double P = opt.P, delta = 2.0 * P / static_cast<double>(n);
    const fft::Shape sh{d, n, d == 2 ? n : 1};
    const std::size_t N = sh.size();
    const double dx = kPi / P;
    auto xcoord = [&](std::int64_t j) { return dx * static_cast<double>(fft::signed_bin(j, n)); };
    double best = 0.0;
    for (double t : tgrid) {
        std::vector<cplx> g(N);
        for (std::size_t i = 0; i < N; ++i) {
            auto k0 = static_cast<std::int64_t>(i % static_cast<std::size_t>(n));
            auto k1 = static_cast<std::int64_t>(i / static_cast<std::size_t>(n));
            Xi xi{-P + static_cast<double>(k0) * delta, d == 2 ? -P + static_cast<double>(k1) * delta : 0.0};
            double ph = opt.use_phi ? stein_beta(radius(xi)) : 1.0;
            if (ph != 0.0) g[i] = ph * m(Xi{t * xi[0], t * xi[1]});
        }
        std::vector<cplx> G = g;
        fft::forward(G, sh);
        std::vector<double> xr(N);
        for (std::size_t i = 0; i < N; ++i) {
            auto j0 = static_cast<std::int64_t>(i % static_cast<std::size_t>(n));
            auto j1 = static_cast<std::int64_t>(i / static_cast<std::size_t>(n));
            xr[i] = std::hypot(xcoord(j0), d == 2 ? xcoord(j1) : 0.0);
        }
        const double vol = std::pow(delta, d);
        double val = 0.0;
        if (r == 2.0) {
            // (2 pi)^{-d} int (1+|x|^2)^alpha |g^(x)|^2 dx with g^ = vol * G.
            long double s = 0.0;
            for (std::size_t i = 0; i < N; ++i) s += std::pow(1.0 + xr[i] * xr[i], alpha) * std::norm(G[i]);
            val = std::sqrt(static_cast<double>(s) * vol * vol * std::pow(dx / (2.0 * kPi), d));
        } else {
            auto theta = [](double s) { return 1.0 - smooth_step(s - 1.0); };
            double xmax = 0.0;
            for (double x : xr) xmax = std::max(xmax, x);
            int K = static_cast<int>(std::ceil(std::log2(std::max(xmax, 1.0)))) + 2;
            for (int k = 0; k <= K; ++k) {
                std::vector<cplx> Pk(N);
                for (std::size_t i = 0; i < N; ++i) {
                    double w = theta(std::ldexp(xr[i], -k)) - (k > 0 ? theta(std::ldexp(xr[i], 1 - k)) : 0.0);
                    Pk[i] = G[i] * w;
                }
                fft::inverse(Pk, sh);
                long double s = 0.0;
                for (auto v : Pk) s += std::pow(std::abs(v), r);
                val += std::exp2(k * alpha) * std::pow(static_cast<double>(s) * vol, 1.0 / r);
            }
        }
        best = std::max(best, val);
    }
    return best;
}

nlohmann::json GrowthVerdict::to_json() const {
    return {{"finite", finite}, {"values", values}, {"ratios", ratios}, {"increment_ratio", increment_ratio},
            {"rule", rule}};
}

GrowthVerdict ratio_stable(const std::vector<double>& values, double threshold) {
    GrowthVerdict v;
    v.values = values;
    v.rule = "growth <= " + std::to_string(threshold) + "x per doubling";
    for (double x : values) v.finite = v.finite && std::isfinite(x);
    for (std::size_t i = 1; i < values.size(); ++i) {
        double r = values[i - 1] == 0.0 ? (values[i] == 0.0 ? 1.0 : kInf) : values[i] / values[i - 1];
        v.ratios.push_back(r);
        v.finite = v.finite && r <= threshold;
    }
    return v;
}

GrowthVerdict increments_decay(const std::vector<double>& values) {
    if (values.size() < 4) throw Error("increments_decay: need at least four resolutions");
    GrowthVerdict v;
    v.values = values;
    v.rule = "increments of squared values shrink";
    for (double x : values) v.finite = v.finite && std::isfinite(x);
    for (std::size_t i = 1; i < values.size(); ++i)
        v.ratios.push_back(values[i - 1] == 0.0 ? 1.0 : values[i] / values[i - 1]);
    if (!v.finite) return v;
    std::vector<double> inc;
    for (std::size_t i = 1; i < values.size(); ++i)
        inc.push_back(std::abs(values[i] * values[i] - values[i - 1] * values[i - 1]));
    const std::size_t k = inc.size();
    const double first = inc[k - 3], last = inc[k - 1];
    if (last == 0.0) {
        v.increment_ratio = 0.0;
    } else if (first == 0.0) {
        v.increment_ratio = kInf;
    } else {
        v.increment_ratio = std::sqrt(last / first);
    }
    v.finite = v.increment_ratio < 1.0;
    return v;
}

GrowthVerdict sobolev_finiteness(const MultiplierSymbol& m, double alpha, const std::vector<double>& tgrid,
                                 const std::vector<std::int64_t>& resolutions, double P) {
    std::vector<double> vals;
    for (auto n : resolutions) vals.push_back(hoermander_sobolev(m, 2.0, alpha, tgrid, SobolevOptions{n, P, true}));
    return increments_decay(vals);
}

double symbol_derivative(const MultiplierSymbol& m, const Xi& xi, int order, double eps) {
    if (order == 0) return m.norm_at(xi);
    auto binom = [](int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); };
    double best = 0.0;
    // Multi-index (k0, order - k0) with a tensor central-difference stencil.
    for (int k0 = (m.dim == 1 ? order : 0); k0 <= order; ++k0) {
        const int k1 = order - k0;
        cplx acc = 0.0;
        for (int i = 0; i <= k0; ++i) {
            for (int j = 0; j <= k1; ++j) {
                double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
                Xi x{xi[0] + (0.5 * k0 - i) * eps, xi[1] + (0.5 * k1 - j) * eps};
                acc += sgn * binom(k0, i) * binom(k1, j) * m(x);
            }
        }
        best = std::max(best, std::abs(acc) / std::pow(eps, order));
    }
    return best;
}

double symbol_derivative(const MultiplierSymbol& m, const Xi& xi, int order) {
    const double r = std::max(radius(xi), 1e-3);
    return symbol_derivative(m, xi, order, 1e-3 * std::min(1.0, r) * (order > 2 ? 10.0 : 1.0));
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("fit_slope: need two or more points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw Error("fit_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / den;
}

nlohmann::json MiyachiReport::to_json() const {
    return {{"a", a},           {"b", b},       {"orders", orders},   {"slopes", slopes},
            {"predicted", predicted}, {"sups", sups}, {"band_lo", band_lo}, {"band_hi", band_hi}, {"pass", pass}};
}

MiyachiReport miyachi_check(const MultiplierSymbol& m, double a, double b, const std::vector<int>& orders, int band_lo,
                            int band_hi, int samples_per_band) {
    if (band_hi - band_lo < 2) throw Error("miyachi_check: need at least three bands");
    MiyachiReport rep;
    rep.a = a;
    rep.b = b;
    rep.orders = orders;
    rep.band_lo = band_lo;
    rep.band_hi = band_hi;
    const int nang = m.dim == 2 ? 8 : 2;
    for (int k : orders) {
        std::vector<double> xs, ys, sups;
        for (int n = band_lo; n <= band_hi; ++n) {
            double s = 0.0;
            for (int i = 0; i < samples_per_band; ++i) {
                const double r = std::exp2(n + static_cast<double>(i) / samples_per_band);
                // Step well below both |xi| and the oscillation length |xi|^{1-a}.
                const double eps = 1e-3 * std::min(r, std::pow(r, 1.0 - a)) * (k > 2 ? 10.0 : 1.0);
                for (int ang = 0; ang < nang; ++ang) {
                    const double th = m.dim == 2 ? kPi * ang / nang : kPi * ang;
                    s = std::max(s, symbol_derivative(m, Xi{r * std::cos(th), r * std::sin(th) * (m.dim == 2)}, k, eps));
                }
            }
            sups.push_back(s);
            xs.push_back(static_cast<double>(n));
            ys.push_back(std::log2(std::max(s, 1e-300)));
        }
        const double slope = fit_slope(xs, ys);
        const double pred = -b + k * (a - 1.0);
        rep.slopes.push_back(slope);
        rep.predicted.push_back(pred);
        rep.sups.push_back(sups);
        rep.pass = rep.pass && slope <= pred + 0.1;
    }
    return rep;
}

double holder_mpq(const MultiplierSymbol& m, double p, double q, double s, int M, const std::vector<double>& tgrid,
                  const std::vector<double>& hladder, const SymbolLocalization& loc, DifferencePlacement where,
                  const AscentOptions& opt) {
    if (M < 1) throw Error("holder_mpq: M must be >= 1");
    if (!(M > s)) throw Error("holder_mpq: need M > s");
    std::vector<double> coef(static_cast<std::size_t>(M + 1));
    for (int k = 0; k <= M; ++k)
        coef[static_cast<std::size_t>(k)] = std::tgamma(M + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(M - k + 1.0)) *
                                            (((M - k) % 2 == 0) ? 1.0 : -1.0);
    const GridSpec& g = loc.grid;
    double best = 0.0;
    for (double t : tgrid) {
        if (2.0 * t > loc.band_limit) throw Error("band_symbol: t pushes the phi support past Nyquist/4");
        for (double h : hladder) {
            if (!(h > 0.0 && h <= 1.0)) throw Error("holder_mpq: need 0 < |h| <= 1");
            for (int axis = 0; axis < g.dim; ++axis) {
                Xi e{axis == 0 ? h : 0.0, axis == 1 ? h : 0.0};
                MultiplierSymbol dm = composite(m, [&, t, e](const Xi& xi) {
                    cplx acc = 0.0;
                    for (int k = 0; k <= M; ++k) {
                        Xi y{xi[0] + k * e[0], xi[1] + k * e[1]};
                        if (where == DifferencePlacement::product)
                            acc += coef[static_cast<std::size_t>(k)] * loc.phi(radius(y)) * m(Xi{t * y[0], t * y[1]});
                        else
                            acc += coef[static_cast<std::size_t>(k)] * m(Xi{t * y[0], t * y[1]});
                    }
                    if (where == DifferencePlacement::symbol) acc *= loc.phi(radius(xi));
                    return acc;
                });
                SampledSymbol sm = SampledSymbol::zeros(g, 1, 1);
                for (std::size_t i = 0; i < g.cells(); ++i) sm.entries[0][i] = dm.scalar(frequency_at(g, i));
                best = std::max(best, std::pow(h, -s) * mpq_norm(sm, p, q, opt));
            }
        }
    }
    return best;
}

nlohmann::json LogInterpReport::to_json() const {
    return {{"p", p},         {"a", a},         {"a_circ", a_circ}, {"b", b},       {"global", global},
            {"bound", bound}, {"ratio", ratio}, {"slack", slack},   {"pass", pass}};
}

LogInterpReport log_interp_check(const MultiplierSymbol& m, double p, const std::vector<double>& tgrid,
                                 const SymbolLocalization& loc, const GridSpec& global_grid,
                                 const AscentOptions& opt) {
    if (!(p > 1.0 && p < kInf)) throw Error("log_interp_check: need 1 < p < inf");
    LogInterpReport rep;
    rep.p = p;
    const int d = loc.grid.dim;
    std::vector<double> bsum(static_cast<std::size_t>(d + 2), 0.0);
    for (double t : tgrid) {
        SampledSymbol band = band_symbol(m, t, loc);
        rep.a = std::max(rep.a, mpq_norm(band, p, p, opt));
        rep.a_circ = std::max(rep.a_circ, band.sup_norm());
        MultiplierSymbol pm = composite(m, [&, t](const Xi& xi) {
            double ph = loc.phi(radius(xi));
            return ph == 0.0 ? cplx(0.0) : ph * m(Xi{t * xi[0], t * xi[1]});
        });
        for (int k = 0; k <= d + 1; ++k) {
            double s = 0.0;
            for (int i = 0; i < 512; ++i) {
                const double r = 0.5 + 1.5 * (i + 0.5) / 512.0;
                for (int ang = 0; ang < (d == 2 ? 8 : 2); ++ang) {
                    const double th = d == 2 ? kPi * ang / 8.0 : kPi * ang;
                    s = std::max(s, symbol_derivative(pm, Xi{r * std::cos(th), d == 2 ? r * std::sin(th) : 0.0}, k,
                                                      k > 2 ? 1e-2 : 1e-3));
                }
            }
            bsum[static_cast<std::size_t>(k)] = std::max(bsum[static_cast<std::size_t>(k)], s);
        }
    }
    for (double v : bsum) rep.b += v;
    SampledSymbol glob = SampledSymbol::sample(m, global_grid);
    rep.global = mpq_norm(glob, p, p, opt);
    const double e = std::abs(1.0 / p - 0.5);
    rep.bound = rep.a > 0.0 ? rep.a_circ + rep.a * std::pow(std::log(2.0 + rep.b / rep.a), e) : rep.a_circ;
    rep.ratio = rep.bound > 0.0 ? rep.global / rep.bound : (rep.global == 0.0 ? 0.0 : kInf);
    rep.pass = rep.ratio <= rep.slack;
    return rep;
}

MultiplierSymbol random_sign_symbol(int kmin, int kmax, std::uint64_t seed, int dim, int osc) {
    std::mt19937_64 rng(seed);
    std::vector<double> eps;
    for (int k = kmin; k <= kmax; ++k) eps.push_back((rng() >> 63) ? 1.0 : -1.0);
    MultiplierSymbol m = symbol_zoo("identity", {}, dim);
    m.name = "random_sign";
    m.scalar = [eps, kmin, osc](const Xi& xi) {
        const double r = radius(xi);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < eps.size(); ++i) {
            const int k = kmin + static_cast<int>(i);
            const double b = stein_beta(std::ldexp(r, -k));
            if (b != 0.0) acc += eps[i] * b * std::cos(std::ldexp(xi[0], osc - k));
        }
        return acc;
    };
    return m;
}

nlohmann::json InvarianceReport::to_json() const {
    return {{"b_standard", b_standard},     {"b_alternate", b_alternate},   {"b_factor", b_factor},
            {"ratio_choice", ratio_choice}, {"ratio_factor", ratio_factor}, {"cstar", cstar},
            {"pass", pass}};
}

MultiplierSymbol order_zero_symbol(int dim) {
    MultiplierSymbol a = symbol_zoo("identity", {}, dim);
    a.name = "order_zero";
    a.scalar = [](const Xi& xi) { return cplx(1.0 + 0.5 * std::sin(std::log1p(xi[0] * xi[0] + xi[1] * xi[1]))); };
    return a;
}

InvarianceReport symbol_invariance_checks(const MultiplierSymbol& m, double p, double q, int L,
                                          const std::vector<double>& tgrid, const GridSpec& g,
                                          const MultiplierSymbol* factor, const AscentOptions& opt) {
    InvarianceReport rep;
    const MultiplierSymbol a = factor ? *factor : order_zero_symbol(m.dim);
    rep.b_standard = b_functional(m, p, q, L, tgrid, SymbolLocalization::standard(g), opt).B;
    rep.b_alternate = b_functional(m, p, q, L, tgrid, SymbolLocalization::alternate(g), opt).B;
    rep.b_factor = b_functional(product(a, m), p, q, L, tgrid, SymbolLocalization::standard(g), opt).B;
    auto ratio = [](double x, double y) { return y == 0.0 ? (x == 0.0 ? 1.0 : kInf) : x / y; };
    rep.ratio_choice = ratio(rep.b_alternate, rep.b_standard);
    rep.ratio_factor = ratio(rep.b_factor, rep.b_standard);
    auto inside = [&](double r) { return r >= 1.0 / rep.cstar && r <= rep.cstar; };
    rep.pass = inside(rep.ratio_choice) && inside(rep.ratio_factor);
    return rep;
}

}  // namespace sdlab
