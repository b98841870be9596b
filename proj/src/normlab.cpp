#include "sdlab/normlab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sdlab/symbols.hpp"

namespace sdlab {

nlohmann::json NormEstimate::to_json() const {
    return {{"value", value},         {"quotient", quotient}, {"p", p},
            {"q", q},                 {"restarts", restarts}, {"iterations", iterations},
            {"best_restart", best_restart}};
}

namespace {

double finite_or_throw(double v, const char* what) {
    if (!std::isfinite(v)) throw Error(std::string("ascent diverged in ") + what + " (non-finite quotient)");
    return v;
}

// |v|^{r-2} v per cell (the duality map of L^r up to normalization).
GridFunction duality_map(const GridFunction& y, double r) {
    GridFunction out(y.grid(), y.value_dim());
    for (std::size_t c = 0; c < y.cells(); ++c) {
        double a = y.magnitude(c);
        if (a == 0.0) continue;
        double s = std::pow(a, r - 2.0);
        for (int m = 0; m < y.value_dim(); ++m) out.at(c, m) = s * y.at(c, m);
    }
    return out;
}

void normalize(GridFunction& f, double p) {
    double n = lp_norm(f, p);
    if (n > 0.0) f *= 1.0 / n;
}

// Structured starting points: window indicator, random sub-boxes, modulated
// bumps and noise, all restricted to the window.
std::vector<GridFunction> structured_seeds(const LinearOp& T, const AscentOptions& opt) {
    std::vector<GridFunction> out;
    for (const auto& s : opt.seeds) out.push_back(s.restricted(T.window));
    const GridSpec& g = T.grid;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> N(0.0, 1.0);
    auto flags = T.window.to_flags(g);
    std::vector<std::size_t> cells;
    for (std::size_t c = 0; c < flags.size(); ++c)
        if (flags[c]) cells.push_back(c);
    if (cells.empty()) throw Error("operator window is empty");
    const int in = T.in_dim;
    auto make = [&](const std::function<cplx(const std::array<double, 2>&)>& fn) {
        GridFunction f(g, in);
        for (auto c : cells) {
            auto x = f.position(c);
            cplx v = fn(x);
            for (int m = 0; m < in; ++m) f.at(c, m) = m == 0 ? v : 0.5 * v;
        }
        return f;
    };
    int k = 0;
    while (static_cast<int>(out.size()) < opt.restarts) {
        int kind = k % 4;
        ++k;
        std::size_t center = cells[static_cast<std::size_t>(U(rng) * static_cast<double>(cells.size())) % cells.size()];
        GridFunction probe(g);
        auto xc = probe.position(center);
        double extent = g.half_width * std::pow(2.0, -8.0 * U(rng));
        if (kind == 0 && k == 1) {
            out.push_back(make([](const std::array<double, 2>&) { return cplx(1.0); }));
        } else if (kind == 0 || kind == 1) {
            double w = extent;
            out.push_back(make([&](const std::array<double, 2>& x) {
                bool in0 = std::abs(x[0] - xc[0]) <= w;
                bool in1 = g.dim == 1 || std::abs(x[1] - xc[1]) <= w;
                return cplx(in0 && in1 ? 1.0 : 0.0);
            }));
        } else if (kind == 2) {
            double w = extent, om = U(rng) * 3.14159 / g.spacing() * 0.5, ph = U(rng) * 6.28318;
            out.push_back(make([&](const std::array<double, 2>& x) {
                double r2 = (x[0] - xc[0]) * (x[0] - xc[0]) + (g.dim == 2 ? (x[1] - xc[1]) * (x[1] - xc[1]) : 0.0);
                return std::exp(-r2 / (w * w)) * std::exp(cplx(0.0, om * x[0] + ph)).real();
            }));
        } else {
            out.push_back(make([&](const std::array<double, 2>&) { return cplx(N(rng)); }));
        }
    }
    out.resize(static_cast<std::size_t>(opt.restarts));
    return out;
}

}  // namespace

double strong_quotient(const LinearOp& T, const GridFunction& f, double p, double q) {
    GridFunction x = f.restricted(T.window);
    double d = lp_norm(x, p);
    if (d == 0.0) return 0.0;
    return lp_norm(T.apply(x), q) / d;
}

double weak_quotient(const LinearOp& T, const GridFunction& f, double p) {
    GridFunction x = f.restricted(T.window);
    double d = lp_norm(x, p);
    if (d == 0.0) return 0.0;
    return lorentz_weak_norm(T.apply(x), p) / d;
}

double restricted_quotient(const LinearOp& T, const GridFunction& indicator, double q) {
    GridFunction x = indicator.restricted(T.window);
    double d = lorentz_q1_norm(x, q);
    if (d == 0.0) return 0.0;
    return lp_norm(T.apply(x), q) / d;
}

double realized_value(const LinearOp& T, const NormEstimate& e) {
    if (e.quotient == "weak") return weak_quotient(T, e.witness, e.p);
    if (e.quotient == "restricted") return restricted_quotient(T, e.witness, e.q);
    return strong_quotient(T, e.witness, e.p, e.q);
}

NormEstimate opnorm(const LinearOp& T, double p, double q, const AscentOptions& opt) {
    if (!(p > 1.0 && p < kInf && q > 1.0 && q < kInf)) throw Error("opnorm: exponents must lie in (1, inf)");
    const double pd = p / (p - 1.0);
    NormEstimate best;
    best.quotient = "strong";
    best.p = p;
    best.q = q;
    best.restarts = opt.restarts;
    best.witness = GridFunction(T.grid, T.in_dim);
    int r = 0;
    for (auto& x0 : structured_seeds(T, opt)) {
        GridFunction x = x0;
        normalize(x, p);
        double prev = -1.0;
        for (int it = 0; it < opt.iterations; ++it) {
            double val = finite_or_throw(strong_quotient(T, x, p, q), "opnorm");
            if (val > best.value) {
                best.value = val;
                best.witness = x;
                best.best_restart = r;
            }
            best.iterations++;
            if (val == 0.0 || (prev > 0.0 && val - prev <= opt.tol * val)) break;
            prev = val;
            GridFunction z = T.adjoint(duality_map(T.apply(x), q));
            x = duality_map(z, pd);
            normalize(x, p);
            if (lp_norm(x, p) == 0.0) break;
        }
        ++r;
    }
    best.value = strong_quotient(T, best.witness, p, q);
    return best;
}

NormEstimate l2_power_norm(const LinearOp& T, int iterations, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    GridFunction x(T.grid, T.in_dim);
    for (auto& v : x.values()) v = N(rng);
    x = x.restricted(T.window);
    normalize(x, 2.0);
    NormEstimate e;
    e.quotient = "l2-power";
    e.restarts = 1;
    for (int it = 0; it < iterations; ++it) {
        GridFunction z = T.adjoint(T.apply(x));
        double n = lp_norm(z, 2.0);
        e.iterations++;
        if (n == 0.0) break;
        z *= 1.0 / n;
        x = z;
    }
    e.witness = x;
    e.best_restart = 0;
    e.value = strong_quotient(T, x, 2.0, 2.0);
    return e;
}

namespace {

// Cells realizing the weak norm max_k v_k (k mu)^{1/p}.
std::vector<std::size_t> weak_extremal_set(const GridFunction& y, double p) {
    std::vector<std::size_t> idx(y.cells());
    std::iota(idx.begin(), idx.end(), 0);
    auto mag = y.magnitudes();
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
    const double mu = y.grid().cell_measure();
    double best = -1.0;
    std::size_t kbest = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        double v = mag[idx[k]] * std::pow(static_cast<double>(k + 1) * mu, 1.0 / p);
        if (v > best) {
            best = v;
            kbest = k + 1;
        }
    }
    idx.resize(kbest);
    return idx;
}

}  // namespace

NormEstimate weak_type_norm(const LinearOp& T, double p, const AscentOptions& opt) {
    const double pd = p / (p - 1.0);
    NormEstimate best;
    best.quotient = "weak";
    best.p = p;
    best.q = p;
    best.restarts = opt.restarts;
    best.witness = GridFunction(T.grid, T.in_dim);
    int r = 0;
    for (auto& x0 : structured_seeds(T, opt)) {
        GridFunction x = x0;
        normalize(x, p);
        double prev = -1.0;
        for (int it = 0; it < opt.iterations; ++it) {
            GridFunction y = T.apply(x);
            double d = lp_norm(x, p);
            double val = d == 0.0 ? 0.0 : finite_or_throw(lorentz_weak_norm(y, p) / d, "weak_type_norm");
            best.iterations++;
            if (val > best.value) {
                best.value = val;
                best.witness = x;
                best.best_restart = r;
            }
            if (val == 0.0 || (prev > 0.0 && std::abs(val - prev) <= opt.tol * val)) break;
            prev = val;
            // Dual step against sgn(y) 1_A with A the extremal level set.
            GridFunction g(y.grid(), y.value_dim());
            for (auto c : weak_extremal_set(y, p)) {
                double a = y.magnitude(c);
                if (a == 0.0) continue;
                for (int m = 0; m < y.value_dim(); ++m) g.at(c, m) = y.at(c, m) / a;
            }
            x = duality_map(T.adjoint(g), pd);
            normalize(x, p);
            if (lp_norm(x, p) == 0.0) break;
        }
        ++r;
    }
    best.value = weak_quotient(T, best.witness, p);
    return best;
}

NormEstimate restricted_strong_norm(const LinearOp& T, double q, const AscentOptions& opt) {
    NormEstimate best;
    best.quotient = "restricted";
    best.p = q;
    best.q = q;
    best.restarts = opt.restarts;
    best.witness = GridFunction(T.grid, T.in_dim);
    auto to_indicator = [&](const GridFunction& f) {
        GridFunction out(f.grid(), T.in_dim);
        for (std::size_t c = 0; c < f.cells(); ++c)
            if (f.magnitude(c) > 0.0) out.at(c, 0) = 1.0;
        return out.restricted(T.window);
    };
    int r = 0;
    for (auto& x0 : structured_seeds(T, opt)) {
        // Random unions of boxes: threshold the seed.
        GridFunction x = x0;
        for (std::size_t c = 0; c < x.cells(); ++c)
            if (x.at(c, 0).real() <= 0.0) x.at(c, 0) = 0.0;
        x = to_indicator(x);
        if (x.is_zero()) x = to_indicator(x0);
        for (int it = 0; it < opt.iterations; ++it) {
            double val = finite_or_throw(restricted_quotient(T, x, q), "restricted_strong_norm");
            best.iterations++;
            if (val > best.value) {
                best.value = val;
                best.witness = x;
                best.best_restart = r;
            }
            // Refine: superlevel sets of Re T*(|Tx|^{q-2} Tx).
            GridFunction z = T.adjoint(duality_map(T.apply(x), q));
            double zmax = 0.0;
            for (std::size_t c = 0; c < z.cells(); ++c) zmax = std::max(zmax, z.at(c, 0).real());
            if (zmax <= 0.0) break;
            GridFunction next;
            double nval = -1.0;
            for (double tau : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                GridFunction cand(z.grid(), T.in_dim);
                for (std::size_t c = 0; c < z.cells(); ++c)
                    if (z.at(c, 0).real() >= tau * zmax) cand.at(c, 0) = 1.0;
                cand = cand.restricted(T.window);
                double v = restricted_quotient(T, cand, q);
                if (v > nval) {
                    nval = v;
                    next = cand;
                }
            }
            if (nval <= val * (1.0 + opt.tol)) break;
            x = next;
        }
        ++r;
    }
    best.value = restricted_quotient(T, best.witness, q);
    return best;
}

CellMask shift_mask(const CellMask& m, std::int64_t s0, std::int64_t s1) {
    std::vector<CellMask::Run> runs;
    for (auto r : m.runs()) runs.push_back({r.row + s1, r.begin + s0, r.end + s0});
    return CellMask::from_runs(runs);
}

LinearOp precompose(const LinearOp& T, std::function<GridFunction(const GridFunction&)> X,
                    std::function<GridFunction(const GridFunction&)> Xadj, const std::string&) {
    LinearOp op;
    op.grid = T.grid;
    op.in_dim = T.in_dim;
    op.out_dim = T.out_dim;
    op.window = T.window;
    CellMask w = T.window;
    op.forward = [T, X, w](const GridFunction& f) { return T.forward(X(f.restricted(w)).restricted(w)); };
    op.backward = [T, Xadj, w](const GridFunction& g) {
        return Xadj(T.backward(g).restricted(w)).restricted(w);
    };
    return op;
}

LinearOp precompose(const LinearOp& T, std::function<GridFunction(const GridFunction&)> X,
                    std::function<GridFunction(const GridFunction&)> Xadj, const CellMask& domain) {
    LinearOp op = precompose(T, X, Xadj);
    const CellMask w = T.window;
    const CellMask d = domain.intersect(w);
    op.window = d;
    op.forward = [T, X, w, d](const GridFunction& f) { return T.forward(X(f.restricted(d)).restricted(w)); };
    op.backward = [T, Xadj, w, d](const GridFunction& g) {
        return Xadj(T.backward(g).restricted(w)).restricted(d);
    };
    return op;
}

double eta_hat(int l, double r) {
    auto e0 = [](double s) { return 1.0 - smooth_step(4.0 * s - 3.0); };
    if (l == 0) return e0(r);
    return e0(std::ldexp(r, -l)) - e0(std::ldexp(r, 1 - l));
}

namespace {

std::vector<std::array<std::int64_t, 2>> ladder_shifts(const GridSpec& g, double hmin, std::vector<double>& lengths) {
    std::vector<std::array<std::int64_t, 2>> out;
    const double h = g.spacing();
    for (double len = 1.0; len >= std::max(h, hmin) * (1.0 - 1e-12); len *= 0.5) {
        auto s = static_cast<std::int64_t>(std::llround(len / h));
        for (int a = 0; a < g.dim; ++a) {
            out.push_back(a == 0 ? std::array<std::int64_t, 2>{s, 0} : std::array<std::int64_t, 2>{0, s});
            lengths.push_back(len);
        }
    }
    return out;
}

}  // namespace

RegularityResult regularity_modulus(const LinearOp& T, double eps, double p, double q, RegularityMode mode,
                                    const RegularityOptions& opt) {
    RegularityResult res;
    const GridSpec& g = T.grid;
    auto record = [&](double at, double weighted) {
        res.ladder.push_back(at);
        res.profile.push_back(weighted);
        res.value = std::max(res.value, weighted);
    };
    if (mode == RegularityMode::spatial) {
        std::vector<double> lengths;
        auto shifts = ladder_shifts(g, opt.hmin, lengths);
        const double h = g.spacing();
        for (std::size_t i = 0; i < shifts.size(); ++i) {
            std::array<double, 2> hv{static_cast<double>(shifts[i][0]) * h, static_cast<double>(shifts[i][1]) * h};
            std::array<double, 2> hm{-hv[0], -hv[1]};
            const CellMask dom = T.window.intersect(shift_mask(T.window, shifts[i][0], shifts[i][1]))
                                     .intersect(shift_mask(T.window, -shifts[i][0], -shifts[i][1]));
            LinearOp C = precompose(
                T, [hv](const GridFunction& f) { return delta_h(f, hv); },
                [hm](const GridFunction& f) { return delta_h(f, hm); }, dom);
            double n = opnorm(C, p, q, opt.ascent).value;
            record(lengths[i], std::pow(lengths[i], -eps) * n);
        }
    } else if (mode == RegularityMode::martingale) {
        for (int n = 0; n <= finest_generation(g); ++n) {
            auto X = [n](const GridFunction& f) { return f - conditional_expectation(f, n); };
            // Cells whose generation-n cube lies inside the window.
            GridFunction out = GridFunction::constant(g, 1.0) - GridFunction::indicator(g, T.window);
            GridFunction spread = conditional_expectation(out, n);
            std::vector<std::uint8_t> keep(g.cells(), 0);
            for (std::size_t c = 0; c < g.cells(); ++c) keep[c] = std::abs(spread.at(c)) == 0.0;
            const CellMask dom = CellMask::from_flags(g, keep);
            if (dom.empty()) continue;
            LinearOp C = precompose(T, X, X, dom);
            double v = opnorm(C, p, q, opt.ascent).value;
            record(n, std::pow(2.0, n * eps) * v);
        }
    } else {
        record(0.0, opnorm(T, p, q, opt.ascent).value);
        const double nyq = nyquist(g);
        for (int l = 1; std::ldexp(1.0, l - 2) < nyq; ++l) {
            MultiplierSymbol m;
            m.dim = g.dim;
            m.scalar = [l, d = g.dim](const Xi& xi) {
                double r = d == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
                return cplx(eta_hat(l, r));
            };
            auto samples = std::make_shared<std::vector<cplx>>(symbol_samples(m, g));
            auto X = [samples](const GridFunction& f) { return apply_samples(*samples, f); };
            LinearOp C = precompose(T, X, X);
            double v = opnorm(C, p, q, opt.ascent).value;
            record(std::ldexp(1.0, l), std::pow(2.0, l * eps) * v);
        }
    }
    return res;
}

RegularityResult lp_modulus(const LinearOp& T, double theta, double p, double q, const LPResolution& lp,
                            const RegularityOptions& opt) {
    if (!(lp.grid() == T.grid)) throw Error("lp_modulus: resolution lives on a different grid");
    RegularityResult res;
    for (int k = 0; k <= lp.kmax(); ++k) {
        auto X = [&lp, k](const GridFunction& f) { return lp.Lambda(k, f); };
        LinearOp C = precompose(T, X, X);
        double v = opnorm(C, p, q, opt.ascent).value;
        res.ladder.push_back(k);
        res.profile.push_back(std::pow(2.0, k * theta) * v);
        res.value = std::max(res.value, res.profile.back());
    }
    return res;
}

double constant_C(double Ap, double Aq, double A0, double B) {
    if (Ap < 0.0 || Aq < 0.0 || A0 < 0.0 || B < 0.0) throw Error("constant_C: inputs must be nonnegative");
    if (A0 == 0.0) throw Error("constant_C: A0 must be positive");
    return Ap + Aq + A0 * std::log(2.0 + B / A0);
}

LinearOp family_operator(const OperatorFamily& fam) {
    return convolution_op(fam.summed_kernel(), interior_window(fam.grid, std::ldexp(1.0, fam.n2) + fam.grid.spacing()));
}

NormEstimate single_scale_norm(const OperatorFamily& fam, double p, double q, const AscentOptions& opt) {
    NormEstimate best;
    best.quotient = "strong";
    best.p = p;
    best.q = q;
    for (int j = fam.n1; j <= fam.n2; ++j) {
        auto ds = dilate_op(fam, j);
        if (ds.kernel.is_zero()) continue;
        NormEstimate e = opnorm(ds.op, p, q, opt);
        if (e.value > best.value || best.witness.cells() == 0) best = e;
    }
    return best;
}

nlohmann::json BatteryReport::to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& pt : points)
        pts.push_back({{"n", pt.n},
                       {"weak", pt.weak},
                       {"restricted", pt.restricted},
                       {"single", pt.single},
                       {"ratio_weak", pt.ratio_weak},
                       {"ratio_restricted", pt.ratio_restricted},
                       {"ratio_single", pt.ratio_single}});
    return {{"family", family},
            {"p", p},
            {"q", q},
            {"sparse_constant", sparse_constant},
            {"stability_threshold", stability_threshold},
            {"single_scale_checked", single_scale_checked},
            {"notice", notice},
            {"points", pts},
            {"spread_weak", spread_weak},
            {"spread_restricted", spread_restricted},
            {"spread_single", spread_single},
            {"finite", finite},
            {"stable", stable},
            {"flagged", flagged}};
}

namespace {

BatteryPoint measure_point(const OperatorFamily& fam, double C, double p, double q, const AscentOptions& opt,
                           bool single) {
    BatteryPoint pt;
    pt.n = fam.grid.n;
    LinearOp S = family_operator(fam);
    pt.weak = weak_type_norm(S, p, opt).value;
    pt.restricted = restricted_strong_norm(S, q, opt).value;
    pt.single = single ? single_scale_norm(fam, p, q, opt).value : 0.0;
    pt.ratio_weak = pt.weak / C;
    pt.ratio_restricted = pt.restricted / C;
    pt.ratio_single = pt.single / C;
    return pt;
}

double spread(const std::vector<double>& v) {
    double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
    if (hi == 0.0) return 1.0;
    if (lo == 0.0) return kInf;
    return hi / lo;
}

void summarize(BatteryReport& rep) {
    std::vector<double> w, r, s;
    for (const auto& pt : rep.points) {
        w.push_back(pt.ratio_weak);
        r.push_back(pt.ratio_restricted);
        s.push_back(pt.ratio_single);
        rep.finite = rep.finite && std::isfinite(pt.ratio_weak) && std::isfinite(pt.ratio_restricted) &&
                     std::isfinite(pt.ratio_single);
    }
    rep.spread_weak = spread(w);
    rep.spread_restricted = spread(r);
    rep.spread_single = spread(s);
    rep.stable = rep.spread_weak <= rep.stability_threshold && rep.spread_restricted <= rep.stability_threshold &&
                 rep.spread_single <= rep.stability_threshold;
    rep.flagged = !rep.finite || !rep.stable;
}

}  // namespace

BatteryReport necessity_battery(const FamilyFactory& make, double sparse_constant, double p, double q,
                                const std::vector<std::int64_t>& resolutions, const AscentOptions& opt,
                                double delta) {
    if (!(p < q)) throw Error("necessity_battery: need p < q");
    if (!(sparse_constant > 0.0)) throw Error("necessity_battery: sparse constant must be positive");
    BatteryReport rep;
    rep.p = p;
    rep.q = q;
    rep.sparse_constant = sparse_constant;
    for (auto n : resolutions) {
        OperatorFamily fam = make(n);
        rep.family = fam.name;
        bool single = strengthened_support_holds(fam, delta);
        if (!single) {
            rep.single_scale_checked = false;
            rep.notice = "strengthened support condition violated; single-scale part skipped";
        }
        rep.points.push_back(measure_point(fam, sparse_constant, p, q, opt, single));
    }
    summarize(rep);
    return rep;
}

BatteryReport necessity_battery(const OperatorFamily& fam, double sparse_constant, double p, double q,
                                const AscentOptions& opt, double delta) {
    return necessity_battery([&](std::int64_t) { return fam; }, sparse_constant, p, q, {fam.grid.n}, opt, delta);
}

}  // namespace sdlab
