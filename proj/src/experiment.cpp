#include "sdlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "sdlab/sparse.hpp"
#include "sdlab/svg.hpp"

namespace sdlab {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int scale_of(double t) { return static_cast<int>(std::ceil(std::log2(t) - 1e-12)); }

}  // namespace

MaximalSetup maximal_setup(const GridFunction& sigma, const std::vector<double>& E, const GridSpec& g, double tmax) {
    MaximalSetup M;
    M.grid = g;
    const double h = g.spacing();
    if (tmax <= 0.0) tmax = g.half_width / 4.0;
    std::vector<double> ts(E.begin(), E.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (double t : ts) {
        if (t < 4.0 * h * (1.0 - 1e-12) || t > tmax * (1.0 + 1e-12)) continue;
        M.times.push_back(t);
        M.kernels.push_back(resample_dilated(sigma, t, g));
        M.adjoints.push_back(reflected_adjoint_kernel(M.kernels.back(), 1));
    }
    if (M.times.empty()) throw Error("maximal_setup: no dilation of E is resolved on the grid");
    M.window = interior_window(g, M.times.back() + h);
    return M;
}

namespace {

std::vector<GridFunction> all_dilates(const MaximalSetup& M, const GridFunction& f) {
    GridFunction fr = f.restricted(M.window);
    std::vector<GridFunction> out;
    out.reserve(M.kernels.size());
    for (const auto& k : M.kernels) out.push_back(convolve(fr, k));
    return out;
}

}  // namespace

GridFunction maximal_apply(const MaximalSetup& M, const GridFunction& f) {
    auto conv = all_dilates(M, f);
    GridFunction out(M.grid);
    for (std::size_t i = 0; i < out.cells(); ++i) {
        double best = 0.0;
        for (const auto& c : conv) best = std::max(best, std::abs(c.at(i)));
        out.at(i) = best;
    }
    return out;
}

std::vector<int> maximal_selector(const MaximalSetup& M, const GridFunction& f) {
    auto conv = all_dilates(M, f);
    std::vector<int> sel(M.grid.cells(), 0);
    for (std::size_t i = 0; i < sel.size(); ++i) {
        double best = -1.0;
        for (std::size_t k = 0; k < conv.size(); ++k) {
            double v = std::abs(conv[k].at(i));
            if (v > best) {
                best = v;
                sel[i] = static_cast<int>(k);
            }
        }
    }
    return sel;
}

LinearOp linearized_maximal(const MaximalSetup& M, const std::vector<int>& selector) {
    LinearOp T;
    T.grid = M.grid;
    T.window = M.window;
    auto setup = std::make_shared<MaximalSetup>(M);
    auto sel = std::make_shared<std::vector<int>>(selector);
    T.forward = [setup, sel](const GridFunction& f) {
        GridFunction out(setup->grid);
        for (std::size_t k = 0; k < setup->kernels.size(); ++k) {
            GridFunction c = convolve(f, setup->kernels[k]);
            for (std::size_t i = 0; i < out.cells(); ++i)
                if ((*sel)[i] == static_cast<int>(k)) out.at(i) = c.at(i);
        }
        return out;
    };
    T.backward = [setup, sel](const GridFunction& g) {
        GridFunction out(setup->grid);
        for (std::size_t k = 0; k < setup->kernels.size(); ++k) {
            GridFunction part(setup->grid);
            bool any = false;
            for (std::size_t i = 0; i < part.cells(); ++i)
                if ((*sel)[i] == static_cast<int>(k) && g.at(i) != cplx(0.0)) {
                    part.at(i) = g.at(i);
                    any = true;
                }
            if (any) out += convolve_truncated(part, setup->adjoints[k]);
        }
        return out;
    };
    return T;
}

namespace {

double true_quotient(const MaximalSetup& M, MaximalQuotient kind, const GridFunction& f, double p, double q) {
    GridFunction fr = f.restricted(M.window);
    if (fr.is_zero()) return 0.0;
    GridFunction mf = maximal_apply(M, fr);
    switch (kind) {
        case MaximalQuotient::weak:
            return lorentz_weak_norm(mf, p) / lp_norm(fr, p);
        case MaximalQuotient::restricted:
            return lp_norm(mf, q) / lorentz_q1_norm(fr, q);
        case MaximalQuotient::strong:
            break;
    }
    return lp_norm(mf, q) / lp_norm(fr, p);
}

}  // namespace

NormEstimate maximal_norm(const MaximalSetup& M, MaximalQuotient kind, double p, double q, const AscentOptions& opt,
                          int rounds) {
    NormEstimate best;
    best.p = p;
    best.q = q;
    best.quotient = kind == MaximalQuotient::weak ? "weak" : kind == MaximalQuotient::restricted ? "restricted" : "strong";
    best.witness = GridFunction(M.grid);
    std::vector<int> sel(M.grid.cells(), 0);
    AscentOptions o = opt;
    for (int r = 0; r < std::max(1, rounds); ++r) {
        LinearOp T = linearized_maximal(M, sel);
        NormEstimate e = kind == MaximalQuotient::weak         ? weak_type_norm(T, p, o)
                         : kind == MaximalQuotient::restricted ? restricted_strong_norm(T, q, o)
                                                               : opnorm(T, p, q, o);
        best.iterations += e.iterations;
        best.restarts += e.restarts;
        double v = true_quotient(M, kind, e.witness, p, q);
        if (v > best.value) {
            best.value = v;
            best.witness = e.witness;
            best.best_restart = r;
        }
        if (e.witness.is_zero()) break;
        sel = maximal_selector(M, e.witness);
        o.seeds = {e.witness};
    }
    return best;
}

OperatorFamily maximal_family(const MaximalSetup& M) {
    OperatorFamily fam;
    fam.name = "maximal";
    fam.grid = M.grid;
    fam.in_dim = 1;
    fam.out_dim = static_cast<int>(M.times.size());
    fam.n1 = scale_of(M.times.front());
    fam.n2 = scale_of(M.times.back());
    auto setup = std::make_shared<MaximalSetup>(M);
    fam.kernel_fn = [setup](int j) {
        const int K = static_cast<int>(setup->times.size());
        GridFunction k(setup->grid, K);
        for (int c = 0; c < K; ++c) {
            if (scale_of(setup->times[static_cast<std::size_t>(c)]) != j) continue;
            const auto& s = setup->kernels[static_cast<std::size_t>(c)];
            for (std::size_t i = 0; i < s.cells(); ++i) k.at(i, c) = s.at(i);
        }
        return k;
    };
    return fam;
}

GridFunction linf_aggregate(const GridFunction& F) {
    GridFunction out(F.grid());
    for (std::size_t i = 0; i < F.cells(); ++i) {
        double best = 0.0;
        for (int c = 0; c < F.value_dim(); ++c) best = std::max(best, std::abs(F.at(i, c)));
        out.at(i) = best;
    }
    return out;
}

std::array<double, 2> phi_map(const std::array<double, 2>& xy) { return {xy[0], 1.0 - xy[1]}; }

std::vector<double> lacunary_set(int lo, int hi) {
    std::vector<double> E;
    for (int k = lo; k <= hi; ++k) E.push_back(std::ldexp(1.0, k));
    return E;
}

std::pair<GridFunction, GridFunction> random_pair(const GridSpec& g, const Cube& q0, std::uint64_t seed,
                                                 const CellMask& f2_region) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    GridFunction f1(g), f2(g);
    CellMask box = CellMask::from_box(cells_of(q0, g)).clipped(g);
    box.for_each_grid_cell(g, [&](std::size_t i) {
        double v = N(rng);
        if (U(rng) < 0.02) v *= std::pow(std::max(U(rng), 1e-6), -0.7) * 4.0;
        f1.at(i) = v;
    });
    f2_region.clipped(g).for_each_grid_cell(g, [&](std::size_t i) { f2.at(i) = std::abs(N(rng)); });
    return {f1, f2};
}

const RegionPoint* RegionReport::find(const std::vector<RegionPoint>& pts, double x, double y) const {
    for (const auto& p : pts)
        if (std::abs(p.x - x) < 1e-9 && std::abs(p.y - y) < 1e-9) return &p;
    return nullptr;
}

nlohmann::json RegionReport::to_json() const {
    auto pts = [](const std::vector<RegionPoint>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& p : v)
            a.push_back({{"x", p.x},
                         {"y", p.y},
                         {"verdict", p.verdict},
                         {"weak", p.weak},
                         {"restricted", p.restricted},
                         {"single", p.single},
                         {"c_meas", p.c_meas},
                         {"lower", p.lower}});
        return a;
    };
    return {{"lebesgue", pts(lebesgue)},       {"sparse", pts(sparse)},     {"resolutions", resolutions},
            {"threshold", threshold},          {"violations", violations}, {"involution", involution},
            {"nonempty", nonempty}};
}

void RegionReport::write_csv(std::ostream& os) const {
    os << "plane,x,y,verdict,resolution,weak,restricted,single,c_meas,lower\n";
    auto rows = [&](const char* plane, const std::vector<RegionPoint>& v) {
        for (const auto& p : v) {
            for (std::size_t r = 0; r < resolutions.size(); ++r) {
                auto at = [&](const std::vector<double>& a) { return r < a.size() ? format_double(a[r]) : ""; };
                os << plane << "," << format_double(p.x) << "," << format_double(p.y) << "," << p.verdict << ","
                   << resolutions[r] << "," << at(p.weak) << "," << at(p.restricted) << "," << at(p.single) << ","
                   << at(p.c_meas) << "," << at(p.lower) << "\n";
            }
        }
    };
    rows("lebesgue", lebesgue);
    rows("sparse", sparse);
}

namespace {

// Place samples of a unit-grid function on a grid with the same spacing,
// matching positions.
GridFunction transplant(const GridFunction& f, const GridSpec& target) {
    GridFunction out(target);
    const GridSpec& s = f.grid();
    const std::int64_t shift = target.origin() - s.origin();
    for (std::int64_t i = 0; i < s.n; ++i) {
        std::int64_t j = i + shift;
        if (j >= 0 && j < target.n) out.at(static_cast<std::size_t>(j)) = f.at(static_cast<std::size_t>(i));
    }
    return out;
}

GridFunction top_set(const GridFunction& mf, std::size_t k) {
    std::vector<std::size_t> idx(mf.cells());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    k = std::min(k, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          double va = mf.magnitude(a), vb = mf.magnitude(b);
                          return va != vb ? va > vb : a < b;
                      });
    GridFunction out(mf.grid());
    for (std::size_t t = 0; t < k; ++t)
        if (mf.magnitude(idx[t]) > 0.0) out.at(idx[t]) = 1.0;
    return out;
}

double sparse_lower_bound(const MaximalSetup& M, const GridFunction& f1, double p, double q, double gamma) {
    if (f1.is_zero()) return 0.0;
    GridFunction mf = maximal_apply(M, f1);
    const double qd = Exponent(q).dual();
    const double hd = M.grid.cell_measure();
    std::vector<GridFunction> cands;
    GridFunction pw(M.grid);
    for (std::size_t i = 0; i < pw.cells(); ++i) pw.at(i) = std::pow(mf.magnitude(i), q - 1.0);
    cands.push_back(pw);
    const std::size_t n = M.grid.cells();
    for (std::size_t k : {n / 64, n / 16, n / 4})
        if (k > 0) cands.push_back(top_set(mf, k));
    double best = 0.0;
    for (const auto& f2 : cands) {
        double lhs = 0.0;
        for (std::size_t i = 0; i < f2.cells(); ++i) lhs += mf.magnitude(i) * f2.magnitude(i);
        lhs *= hd;
        double up = maximal_form_upper(f1, f2, p, qd, gamma);
        if (up > 0.0) best = std::max(best, lhs / up);
    }
    return best;
}

bool stable_sequence(const std::vector<double>& v, double threshold) { return ratio_stable(v, threshold).finite; }

struct Key {
    double v;
    bool operator<(const Key& o) const { return v < o.v - 1e-12; }
};

}  // namespace

RegionReport region_scan(const GridFunction& sigma, const std::vector<double>& E, const RegionOptions& opt) {
    RegionReport rep;
    rep.resolutions = opt.resolutions;
    rep.threshold = opt.threshold;
    const std::size_t nr = opt.resolutions.size();
    auto key = [](double x, double y) { return std::make_pair(std::llround(x * 1e9), std::llround(y * 1e9)); };
    std::map<std::pair<long long, long long>, RegionPoint> leb, sp;
    for (double x : opt.axis)
        for (double y : opt.axis) {
            leb[key(x, y)] = RegionPoint{x, y, x > y ? "" : "undetermined", {}, {}, {}, {}, {}};
            auto s = phi_map({x, y});
            sp[key(s[0], s[1])] = RegionPoint{s[0], s[1], x > y ? "" : "undetermined", {}, {}, {}, {}, {}};
        }

    for (std::size_t ri = 0; ri < nr; ++ri) {
        const std::int64_t n = opt.resolutions[ri];
        GridSpec g(sigma.grid().dim, n, opt.half_width);
        const double h = g.spacing();
        MaximalSetup M = maximal_setup(sigma, E, g);
        // Distinct unit-scale pieces E_j = (2^{-j} E) cap [1, 2].
        GridSpec ug(g.dim, static_cast<std::int64_t>(std::llround(8.0 / h)), 4.0);
        std::vector<std::vector<double>> pieces;
        for (int j = scale_of(M.times.front()) - 1; j <= scale_of(M.times.back()); ++j) {
            std::vector<double> pc;
            for (double t : M.times) {
                double s = std::ldexp(t, -j);
                if (s >= 1.0 - 1e-12 && s <= 2.0 + 1e-12) pc.push_back(s);
            }
            if (pc.empty()) continue;
            bool dup = false;
            for (const auto& o : pieces) {
                if (o.size() != pc.size()) continue;
                bool same = true;
                for (std::size_t i = 0; i < pc.size(); ++i) same = same && std::abs(o[i] - pc[i]) < 1e-12;
                dup = dup || same;
            }
            if (!dup) pieces.push_back(pc);
        }
        std::vector<MaximalSetup> units;
        for (const auto& pc : pieces) units.push_back(maximal_setup(sigma, pc, ug, 2.0));

        std::map<Key, NormEstimate> weak, restr;
        for (double x : opt.axis) weak[{x}] = maximal_norm(M, MaximalQuotient::weak, 1.0 / x, 2.0, opt.ascent, opt.rounds);
        for (double y : opt.axis)
            restr[{y}] = maximal_norm(M, MaximalQuotient::restricted, 2.0, 1.0 / y, opt.ascent, opt.rounds);

        OperatorFamily fam = maximal_family(M);
        const Cube q0{g.dim, {0.0, 0.0}, std::ldexp(1.0, fam.n2)};
        DominateOptions dopt;
        dopt.aggregate = linf_aggregate;

        for (double x : opt.axis) {
            for (double y : opt.axis) {
                RegionPoint& L = leb.at(key(x, y));
                auto s = phi_map({x, y});
                RegionPoint& S = sp.at(key(s[0], s[1]));
                const double p = 1.0 / x, q = 1.0 / y;
                L.weak.push_back(weak[{x}].value);
                L.restricted.push_back(restr[{y}].value);
                if (!(x > y)) continue;
                NormEstimate single;
                for (const auto& U : units) {
                    NormEstimate e = maximal_norm(U, MaximalQuotient::strong, p, q, opt.ascent, opt.rounds);
                    if (e.value >= single.value) single = e;
                }
                L.single.push_back(single.value);

                std::vector<double> cs;
                for (int t = 0; t < opt.trials; ++t) {
                    auto [f1, f2] = random_pair(g, q0, opt.seed + 7919u * static_cast<std::uint64_t>(t), M.window);
                    cs.push_back(dominate(fam, f1, f2, p, q, opt.gamma, dopt).c_meas);
                }
                S.c_meas.push_back(median(cs));
                double lower = 0.0;
                lower = std::max(lower, sparse_lower_bound(M, weak[{x}].witness, p, q, opt.gamma));
                lower = std::max(lower, sparse_lower_bound(M, restr[{y}].witness, p, q, opt.gamma));
                if (single.witness.cells() > 0)
                    lower = std::max(lower, sparse_lower_bound(M, transplant(single.witness, g).restricted(M.window),
                                                               p, q, opt.gamma));
                S.lower.push_back(lower);
            }
        }
    }

    for (auto& [k, L] : leb) {
        if (L.verdict == "undetermined") continue;
        bool ok = stable_sequence(L.weak, opt.threshold) && stable_sequence(L.restricted, opt.threshold) &&
                  stable_sequence(L.single, opt.threshold);
        L.verdict = ok ? "stable" : "unstable";
    }
    for (auto& [k, S] : sp) {
        if (S.verdict == "undetermined") continue;
        bool ok = stable_sequence(S.c_meas, opt.threshold) && stable_sequence(S.lower, opt.threshold);
        S.verdict = ok ? "stable" : "unstable";
        if (ok) rep.nonempty = true;
        auto pre = phi_map({S.x, S.y});
        const auto& L = leb.at(key(pre[0], pre[1]));
        if (ok && L.verdict != "stable") ++rep.violations;
    }
    for (auto& [k, L] : leb) {
        auto back = phi_map(phi_map({L.x, L.y}));
        rep.involution = rep.involution && key(back[0], back[1]) == key(L.x, L.y);
        rep.lebesgue.push_back(L);
    }
    for (auto& [k, S] : sp) rep.sparse.push_back(S);
    return rep;
}

GridFunction power_weight(const GridSpec& g, double a) {
    GridFunction w(g);
    const std::int64_t rows = g.dim == 2 ? g.n : 1;
    for (std::int64_t i1 = 0; i1 < rows; ++i1)
        for (std::int64_t i0 = 0; i0 < g.n; ++i0) {
            double x0 = g.center(i0), x1 = g.dim == 2 ? g.center(i1) : 0.0;
            w.at(w.cell_index(i0, i1)) = std::pow(std::hypot(x0, x1), a);
        }
    return w;
}

WeightConstants weight_constants(const GridFunction& w, double t, double s) {
    if (!(t > 1.0) || !(s >= 1.0)) throw Error("weight_constants: need t > 1 and s >= 1");
    const GridSpec& g = w.grid();
    std::vector<double> v1(w.cells()), vinv(w.cells()), vs(w.cells());
    const double e = 1.0 / (t - 1.0);  // t' - 1
    for (std::size_t i = 0; i < w.cells(); ++i) {
        double x = w.at(i).real();
        if (!(x > 0.0) || w.at(i).imag() != 0.0) throw Error("weight must be positive on the grid");
        v1[i] = x;
        vinv[i] = std::pow(x, -e);
        vs[i] = std::pow(x, s);
    }
    PrefixSums P1(g, v1), Pinv(g, vinv), Ps(g, vs);
    WeightConstants c;
    c.a_t = 0.0;
    c.rh_s = 0.0;
    const CellBox all = whole_grid(g);
    const Cube extent{g.dim, {-g.half_width, -g.half_width}, 2.0 * g.half_width};
    for (const auto& lat : DyadicLattice::shifted_family(g.dim)) {
        for (int k = finest_generation(g); k >= -ilog2_exact(2.0 * g.half_width); --k) {
            for (const auto& Q : lattice_cubes(lat, k, extent)) {
                CellBox b = cells_of(Q.geometry(), g);
                if (b.empty() || !all.contains(b)) continue;
                const double cnt = static_cast<double>(b.count());
                const double m1 = P1.box_sum(b) / cnt;
                const double minv = std::pow(Pinv.box_sum(b) / cnt, 1.0 / e);
                const double ms = std::pow(Ps.box_sum(b) / cnt, 1.0 / s);
                c.a_t = std::max(c.a_t, m1 * minv);
                c.rh_s = std::max(c.rh_s, ms / m1);
            }
        }
    }
    return c;
}

nlohmann::json WeightedReport::to_json() const {
    return {{"r", r},           {"p", p},           {"q", q},         {"alpha", alpha},
            {"a_const", a_const}, {"rh_const", rh_const}, {"sparse_constant", sparse_constant},
            {"bound", bound},   {"slack", slack},   {"trials", trials}};
}

WeightedReport weighted_check(const LinearOp& T, const GridFunction& w, double r, double p, double q,
                              double sparse_constant, int trials, std::uint64_t seed) {
    if (!(p < r && r < q)) throw Error("weighted_check: need p < r < q");
    WeightedReport rep;
    rep.r = r;
    rep.p = p;
    rep.q = q;
    rep.sparse_constant = sparse_constant;
    rep.trials = trials;
    rep.alpha = std::max(1.0 / (r - p), (q - 1.0) / (q - r));
    const double s = Exponent(q / r).dual();
    WeightConstants a = weight_constants(w, r / p, s);
    rep.a_const = a.a_t;
    rep.rh_const = a.rh_s;
    rep.bound = sparse_constant * std::pow(rep.a_const * rep.rh_const, rep.alpha);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    auto wnorm = [&](const GridFunction& f) {
        long double acc = 0.0;
        for (std::size_t i = 0; i < f.cells(); ++i) acc += std::pow(f.magnitude(i), r) * w.at(i).real();
        return std::pow(static_cast<double>(acc) * f.grid().cell_measure(), 1.0 / r);
    };
    for (int t = 0; t < trials; ++t) {
        GridFunction f(T.grid, T.in_dim);
        for (auto& v : f.values()) v = cplx(N(rng), N(rng));
        f = f.restricted(T.window);
        double den = wnorm(f);
        if (den == 0.0) continue;
        rep.slack = std::max(rep.slack, wnorm(T.apply(f)) / (rep.bound * den));
    }
    return rep;
}

double minkowski_dim(const std::vector<double>& E, const std::vector<double>& scales) {
    if (scales.size() < 3) throw Error("minkowski_dim: need at least three scales");
    if (E.empty()) throw Error("minkowski_dim: empty set");
    std::vector<double> xs, ys;
    for (double d : scales) {
        if (!(d > 0.0)) throw Error("minkowski_dim: scales must be positive");
        // Closed boxes covering [1, 2]: t = 2 belongs to the last one.
        const long long last = static_cast<long long>(std::ceil(1.0 / d - 1e-9)) - 1;
        std::set<long long> boxes;
        for (double t : E) {
            long long b = static_cast<long long>(std::floor((t - 1.0) / d + 1e-9));
            boxes.insert(t <= 2.0 ? std::min(b, std::max(last, 0LL)) : b);
        }
        xs.push_back(std::log(1.0 / d));
        ys.push_back(std::log(static_cast<double>(boxes.size())));
    }
    return fit_slope(xs, ys);
}

std::vector<double> cantor_sample(int depth) {
    std::vector<double> pts{0.0};
    double scale = 1.0;
    for (int k = 0; k < depth; ++k) {
        scale /= 3.0;
        std::vector<double> next;
        for (double p : pts) {
            next.push_back(p);
            next.push_back(p + 2.0 * scale);
        }
        pts.swap(next);
    }
    for (double& p : pts) p += 1.0;
    std::sort(pts.begin(), pts.end());
    return pts;
}

// ---- experiment plumbing ----

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.experiment = j.value("experiment", c.experiment);
    if (j.contains("operator")) {
        const auto& o = j.at("operator");
        if (o.is_string()) {
            c.op = o.get<std::string>();
        } else {
            c.op = o.value("name", c.op);
            if (o.contains("params")) c.params = o.at("params");
        }
    }
    if (j.contains("params")) c.params = j.at("params");
    c.dim = j.value("dim", c.dim);
    if (j.contains("resolutions")) c.resolutions = j.at("resolutions").get<std::vector<std::int64_t>>();
    if (j.contains("resolution")) c.resolutions = {j.at("resolution").get<std::int64_t>()};
    if (j.contains("exponents")) {
        c.exponents.clear();
        for (const auto& e : j.at("exponents")) c.exponents.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
    }
    c.gamma = j.value("gamma", c.gamma);
    if (j.contains("scales")) {
        c.n1 = j.at("scales").at(0).get<int>();
        c.n2 = j.at("scales").at(1).get<int>();
    }
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    c.out = j.value("out", c.out);
    c.validate();
    return c;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json ex = nlohmann::json::array();
    for (const auto& e : exponents) ex.push_back({e[0], e[1]});
    return {{"experiment", experiment},
            {"operator", {{"name", op}, {"params", params}}},
            {"dim", dim},
            {"resolutions", resolutions},
            {"exponents", ex},
            {"gamma", gamma},
            {"scales", {n1, n2}},
            {"trials", trials},
            {"seed", seed},
            {"out", out}};
}

namespace {

const std::vector<std::string> kExperiments{"dominate", "battery", "region", "bfunctional", "weights"};
const std::vector<std::string> kFamilies{"identity", "radon", "growing"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!contains(kExperiments, experiment)) throw Error("unknown experiment: " + experiment);
    if (experiment == "bfunctional") {
        if (!contains(symbol_names(), op)) throw Error("unknown operator: " + op);
    } else if (!contains(kFamilies, op)) {
        throw Error("unknown operator: " + op);
    }
    if (dim != 1 && dim != 2) throw Error("config: dim must be 1 or 2");
    for (const auto& e : exponents)
        if (!(e[0] > 1.0 && e[0] < kInf && e[1] > 1.0 && e[1] < kInf))
            throw Error("config: exponents must lie in (1, inf)^2");
    if (resolutions.empty()) throw Error("config: no resolution given");
    for (auto n : resolutions)
        if (n < 8 || (n & (n - 1)) != 0) throw Error("config: resolutions must be powers of two >= 8");
    if (!(gamma > 0.0 && gamma < 1.0)) throw Error("config: gamma must lie in (0, 1)");
    if (n1 > n2) throw Error("config: scales must satisfy n1 <= n2");
    if (trials < 1) throw Error("config: trials must be positive");
}

OperatorFamily identity_family(const GridSpec& g, int n1, int n2) {
    OperatorFamily fam;
    fam.name = "identity";
    fam.grid = g;
    fam.n1 = n1;
    fam.n2 = n2;
    fam.kernel_fn = [g, n1](int j) {
        GridFunction k(g);
        if (j == n1) {
            const std::size_t o = g.dim == 2 ? k.cell_index(g.origin(), g.origin()) : k.cell_index(g.origin());
            k.at(o) = 1.0 / g.cell_measure();
        }
        return k;
    };
    return fam;
}

OperatorFamily named_family(const std::string& name, const GridSpec& g, int n1, int n2) {
    if (name == "identity") return identity_family(g, n1, n2);
    if (g.dim != 1) throw Error("named_family: radon families are one-dimensional");
    if (name == "radon") return radon_family(odd_step_sigma(64), g, n1, n2);
    if (name == "growing") return growing_family(odd_step_sigma(64), g, n1, n2);
    throw Error("unknown operator: " + name);
}

namespace {

std::filesystem::path prepare_out(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::filesystem::path probe = std::filesystem::path(dir) / ".write_probe";
    std::ofstream f(probe);
    if (ec || !f) throw Error("cannot write output directory: " + dir);
    f.close();
    std::filesystem::remove(probe, ec);
    return dir;
}

void write_text(const std::filesystem::path& p, const std::string& s, ResultBundle& b) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << s;
    b.files.push_back(p.string());
}

ResultBundle run_dominate(const ExperimentConfig& c, const std::filesystem::path& out) {
    ResultBundle b;
    const double L = std::ldexp(1.0, c.n2 + 2);
    const std::int64_t n = c.resolutions.front();
    GridSpec g(c.dim, n, L);
    OperatorFamily fam = named_family(c.op, g, c.n1, c.n2);
    const double p = c.exponents.front()[0], q = c.exponents.front()[1];
    const Cube q0{c.dim, {0.0, 0.0}, std::ldexp(1.0, c.n2)};
    const CellMask window = interior_window(g, std::ldexp(1.0, c.n2) + g.spacing());
    std::ostringstream csv;
    csv << "trial,cubes,lhs,form,c_meas,sparse_ok,omega_in_7q0\n";
    nlohmann::json certs = nlohmann::json::array();
    svg::Series s{"C_meas", {}, {}};
    for (int t = 0; t < c.trials; ++t) {
        auto [f1, f2] = random_pair(g, q0, c.seed + 7919u * static_cast<std::uint64_t>(t), window);
        auto cert = dominate(fam, f1, f2, p, q, c.gamma);
        auto rep = verify_certificate(cert, fam, f1, f2, p, q);
        csv << t << "," << cert.family.size() << "," << format_double(cert.lhs) << "," << format_double(cert.form)
            << "," << format_double(cert.c_meas) << "," << rep.sparse.ok << "," << rep.omega_in_7q0 << "\n";
        nlohmann::json cj = cert.to_json();
        cj["verification"] = rep.to_json();
        certs.push_back(cj);
        s.x.push_back(t);
        s.y.push_back(cert.c_meas);
    }
    b.report = {{"config", c.to_json()}, {"certificates", certs}};
    write_text(out / "dominate.csv", csv.str(), b);
    std::ostringstream sv;
    svg::line_plot(sv, {"Measured domination constant", "trial", "C_meas", false}, {s});
    write_text(out / "dominate.svg", sv.str(), b);
    return b;
}

ResultBundle run_battery(const ExperimentConfig& c, const std::filesystem::path& out) {
    ResultBundle b;
    const double C = c.params.value("sparse_constant", 1.0);
    const double p = c.exponents.front()[0], q = c.exponents.front()[1];
    std::vector<std::int64_t> res = c.resolutions;
    if (res.size() == 1) res = {1024, 2048, 4096};
    BatteryReport rep = necessity_battery(battery_factory(c.op), C, p, q, res);
    std::ostringstream csv;
    csv << "n,weak,restricted,single,ratio_weak,ratio_restricted,ratio_single\n";
    svg::Series sw{"weak", {}, {}}, sr{"restricted", {}, {}}, ss{"single", {}, {}};
    for (const auto& pt : rep.points) {
        csv << pt.n << "," << format_double(pt.weak) << "," << format_double(pt.restricted) << ","
            << format_double(pt.single) << "," << format_double(pt.ratio_weak) << ","
            << format_double(pt.ratio_restricted) << "," << format_double(pt.ratio_single) << "\n";
        const double x = std::log2(static_cast<double>(pt.n));
        sw.x.push_back(x), sw.y.push_back(pt.ratio_weak);
        sr.x.push_back(x), sr.y.push_back(pt.ratio_restricted);
        ss.x.push_back(x), ss.y.push_back(pt.ratio_single);
    }
    b.report = {{"config", c.to_json()}, {"battery", rep.to_json()}};
    write_text(out / "battery.csv", csv.str(), b);
    std::ostringstream sv;
    svg::line_plot(sv, {"Necessity battery ratios", "log2 n", "ratio", true}, {sw, sr, ss});
    write_text(out / "battery.svg", sv.str(), b);
    return b;
}

ResultBundle run_region(const ExperimentConfig& c, const std::filesystem::path& out) {
    ResultBundle b;
    RegionOptions opt;
    if (c.resolutions.size() >= 2) opt.resolutions = c.resolutions;
    opt.gamma = c.gamma;
    opt.seed = c.seed;
    opt.trials = c.trials;
    std::vector<double> E;
    const auto spec = c.params.value("E", nlohmann::json("lacunary"));
    if (spec.is_array()) {
        E = spec.get<std::vector<double>>();
    } else if (spec.get<std::string>() == "single") {
        E = {1.0};
    } else if (spec.get<std::string>() == "lacunary") {
        E = lacunary_set(-12, 4);
    } else {
        throw Error("unknown dilation set: " + spec.get<std::string>());
    }
    RegionReport rep = region_scan(odd_step_sigma(64), E, opt);
    std::ostringstream csv;
    rep.write_csv(csv);
    b.report = {{"config", c.to_json()}, {"region", rep.to_json()}};
    write_text(out / "region.csv", csv.str(), b);
    std::vector<svg::Marker> pts;
    auto color = [](const std::string& v) {
        return v == "stable" ? std::string("#2ca02c") : v == "unstable" ? std::string("#d62728") : std::string("#999999");
    };
    for (const auto& p : rep.sparse) pts.push_back({p.x, p.y, color(p.verdict)});
    std::ostringstream sv;
    svg::scatter_plot(sv, {"Sparse exponent verdicts", "1/p", "1/q'", false}, pts, 0.0, 1.0, 0.0, 1.0);
    write_text(out / "region.svg", sv.str(), b);
    return b;
}

ResultBundle run_bfunctional(const ExperimentConfig& c, const std::filesystem::path& out) {
    ResultBundle b;
    std::map<std::string, double> sp;
    if (c.params.contains("symbol"))
        for (auto& [k, v] : c.params.at("symbol").items()) sp[k] = v.get<double>();
    MultiplierSymbol m = symbol_zoo(c.op, sp, c.dim);
    const double L = c.params.value("grid_L", 64.0);
    const std::int64_t n = c.params.value("grid_n", std::int64_t{1024});
    const int levels = c.params.value("levels", 8);
    auto tg = octave_tgrid(c.params.value("t_lo", 0.0), c.params.value("t_hi", 1.0));
    const double p = c.exponents.front()[0], q = c.exponents.front()[1];
    auto loc = SymbolLocalization::standard(GridSpec(c.dim, n, L));
    BFunctional bf = b_functional(m, p, q, levels, tg, loc);
    std::ostringstream csv;
    csv << "l,profile,circ_profile,argmax_t\n";
    svg::Series s{"sup_t norm", {}, {}};
    for (std::size_t l = 0; l < bf.profile.size(); ++l) {
        csv << l << "," << format_double(bf.profile[l]) << "," << format_double(bf.circ_profile[l]) << ","
            << format_double(bf.argmax_t[l]) << "\n";
        s.x.push_back(static_cast<double>(l));
        s.y.push_back(bf.profile[l]);
    }
    b.report = {{"config", c.to_json()}, {"bfunctional", bf.to_json()}};
    write_text(out / "bfunctional.csv", csv.str(), b);
    std::ostringstream sv;
    svg::line_plot(sv, {"l-profile of localized pieces", "l", "norm", true}, {s});
    write_text(out / "bfunctional.svg", sv.str(), b);
    return b;
}

ResultBundle run_weights(const ExperimentConfig& c, const std::filesystem::path& out) {
    ResultBundle b;
    std::vector<double> powers = c.params.value("powers", std::vector<double>{0.0, 0.5, 1.5});
    const double t = c.params.value("t", 2.0), s = c.params.value("s", 2.0);
    std::vector<std::int64_t> res = c.resolutions;
    if (res.size() == 1) res = {512, 1024, 2048};
    std::ostringstream csv;
    csv << "power,n,a_t,rh_s\n";
    nlohmann::json verdicts = nlohmann::json::array();
    std::vector<svg::Series> series;
    for (double a : powers) {
        std::vector<double> at;
        svg::Series sr{"a = " + format_double(a), {}, {}};
        for (auto n : res) {
            WeightConstants wc = weight_constants(power_weight(GridSpec(c.dim, n, 1.0), a), t, s);
            at.push_back(wc.a_t);
            csv << format_double(a) << "," << n << "," << format_double(wc.a_t) << "," << format_double(wc.rh_s)
                << "\n";
            sr.x.push_back(std::log2(static_cast<double>(n)));
            sr.y.push_back(wc.a_t);
        }
        GrowthVerdict v = ratio_stable(at);
        verdicts.push_back({{"power", a}, {"verdict", v.to_json()}});
        series.push_back(sr);
    }
    b.report = {{"config", c.to_json()}, {"weights", verdicts}};
    write_text(out / "weights.csv", csv.str(), b);
    std::ostringstream sv;
    svg::line_plot(sv, {"A_t constants of power weights", "log2 n", "[w]_A", true}, series);
    write_text(out / "weights.svg", sv.str(), b);
    return b;
}

}  // namespace

FamilyFactory battery_factory(const std::string& name, double spacing) {
    return [name, spacing](std::int64_t n) {
        const double L = 0.5 * static_cast<double>(n) * spacing;
        GridSpec g(1, n, L);
        const int n1 = ilog2_exact(4.0 * spacing);
        const int n2 = ilog2_exact(L / 4.0);
        return named_family(name, g, n1, n2);
    };
}

ResultBundle run(const ExperimentConfig& cfg) {
    cfg.validate();
    auto out = prepare_out(cfg.out);
    ResultBundle b;
    if (cfg.experiment == "dominate") b = run_dominate(cfg, out);
    else if (cfg.experiment == "battery") b = run_battery(cfg, out);
    else if (cfg.experiment == "region") b = run_region(cfg, out);
    else if (cfg.experiment == "bfunctional") b = run_bfunctional(cfg, out);
    else b = run_weights(cfg, out);
    write_text(out / (cfg.experiment + ".json"), b.report.dump(2) + "\n", b);
    return b;
}

}  // namespace sdlab
