#include "sdlab/maxvar.hpp"

#include <algorithm>
#include <cmath>

#include "sdlab/kernels.hpp"

namespace sdlab {

namespace {

double dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

double vnorm(const std::vector<cplx>& a) {
    double s = 0.0;
    for (auto v : a) s += std::norm(v);
    return std::sqrt(s);
}

// G[i] = best sum of |increment|^r over chains starting at i (r < inf), or the
// best single increment after i (r = inf). Exact O(N^2).
template <class Dist>
std::vector<double> chain_tail(std::size_t n, double r, const Dist& d) {
    std::vector<double> G(n, 0.0);
    if (n == 0) return G;
    if (r == kInf) {
        // max_{i <= k < j} d(k, j)
        for (std::size_t ii = n; ii-- > 0;) {
            double best = ii + 1 < n ? G[ii + 1] : 0.0;
            for (std::size_t j = ii + 1; j < n; ++j) best = std::max(best, d(ii, j));
            G[ii] = best;
        }
        return G;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double best = 0.0;
        for (std::size_t j = ii + 1; j < n; ++j) best = std::max(best, std::pow(d(ii, j), r) + G[j]);
        G[ii] = best;
    }
    return G;
}

template <class Dist, class Mag>
double variation(std::size_t n, double r, bool with_first, const Dist& d, const Mag& mag) {
    if (r < 1.0) throw Error("variation exponent must be >= 1");
    if (n == 0) return 0.0;
    auto G = chain_tail(n, r, d);
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double tail = r == kInf ? G[i] : std::pow(G[i], 1.0 / r);
        best = std::max(best, (with_first ? mag(i) : 0.0) + tail);
    }
    return best;
}

double real_variation(const std::vector<double>& seq, double r, bool with_first) {
    auto idx = extrema_candidates(seq);
    std::vector<double> a;
    a.reserve(idx.size());
    for (auto i : idx) a.push_back(seq[i]);
    return variation(
        a.size(), r, with_first, [&](std::size_t i, std::size_t j) { return std::abs(a[j] - a[i]); },
        [&](std::size_t i) { return std::abs(a[i]); });
}

bool is_real_scalar(const std::vector<std::vector<cplx>>& seq) {
    for (const auto& v : seq)
        if (v.size() != 1 || v[0].imag() != 0.0) return false;
    return true;
}

double vector_variation(const std::vector<std::vector<cplx>>& seq, double r, bool with_first) {
    if (is_real_scalar(seq)) {
        std::vector<double> a;
        a.reserve(seq.size());
        for (const auto& v : seq) a.push_back(v[0].real());
        return real_variation(a, r, with_first);
    }
    return variation(
        seq.size(), r, with_first, [&](std::size_t i, std::size_t j) { return dist(seq[i], seq[j]); },
        [&](std::size_t i) { return vnorm(seq[i]); });
}

}  // namespace

std::vector<std::size_t> extrema_candidates(const std::vector<double>& seq) {
    // Collapse plateaus, then keep endpoints and turning points.
    std::vector<std::size_t> keep;
    const std::size_t n = seq.size();
    if (n <= 2) {
        for (std::size_t i = 0; i < n; ++i) keep.push_back(i);
        return keep;
    }
    std::vector<std::size_t> u{0};
    for (std::size_t i = 1; i < n; ++i)
        if (seq[i] != seq[u.back()]) u.push_back(i);
    keep.push_back(0);
    for (std::size_t k = 1; k + 1 < u.size(); ++k) {
        double a = seq[u[k - 1]], b = seq[u[k]], c = seq[u[k + 1]];
        if ((b > a && b > c) || (b < a && b < c)) keep.push_back(u[k]);
    }
    if (u.size() > 1) keep.push_back(u.back());
    return keep;
}

double vr_norm(const std::vector<std::vector<cplx>>& seq, double r) { return vector_variation(seq, r, true); }
double vr_norm(const std::vector<double>& seq, double r) { return real_variation(seq, r, true); }
double vr_seminorm(const std::vector<std::vector<cplx>>& seq, double r) { return vector_variation(seq, r, false); }
double vr_seminorm(const std::vector<double>& seq, double r) { return real_variation(seq, r, false); }

namespace {

std::vector<GridFunction> scale_outputs(const OperatorFamily& fam, const GridFunction& f) {
    std::vector<GridFunction> out;
    for (int j = fam.n1; j <= fam.n2; ++j) out.push_back(apply_scale(fam, j, f));
    return out;
}

GridFunction from_values(const GridSpec& g, const std::vector<double>& v) {
    GridFunction out(g);
    for (std::size_t c = 0; c < v.size(); ++c) out.values()[c] = v[c];
    return out;
}

}  // namespace

GridFunction sr_apply(const OperatorFamily& fam, double r, const GridFunction& f) {
    return from_values(f.grid(), kernels::pointwise_lr(scale_outputs(fam, f), r));
}

GridFunction vr_operator(const OperatorFamily& fam, double r, const GridFunction& f) {
    return from_values(f.grid(), kernels::pointwise_variation(scale_outputs(fam, f), r));
}

namespace {

bool is_dyadic(double t) {
    int e = 0;
    return std::frexp(t, &e) == 0.5;
}

int octave_of(double t) {
    int e = 0;
    std::frexp(t, &e);
    return e - 1;
}

std::vector<cplx> value_at(const GridFunction& f, std::size_t c) {
    std::vector<cplx> v(static_cast<std::size_t>(f.value_dim()));
    for (int m = 0; m < f.value_dim(); ++m) v[static_cast<std::size_t>(m)] = f.at(c, m);
    return v;
}

LongShort split_impl(const std::vector<double>& times, const std::vector<GridFunction>& seq,
                     const std::vector<bool>& in_full, double r) {
    if (times.size() != seq.size() || seq.empty()) throw Error("long_short_split: bad sequence");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw Error("long_short_split: times must increase");
    const GridSpec& g = seq.front().grid();
    std::vector<std::size_t> dyad;
    for (std::size_t i = 0; i < times.size(); ++i)
        if (is_dyadic(times[i])) dyad.push_back(i);
    // Octave membership, endpoints included.
    int jlo = octave_of(times.front()), jhi = octave_of(times.back());
    std::vector<std::vector<std::size_t>> oct;
    for (int j = jlo; j <= jhi; ++j) {
        double a = std::ldexp(1.0, j), b = std::ldexp(1.0, j + 1);
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < times.size(); ++i)
            if (times[i] >= a && times[i] <= b) idx.push_back(i);
        bool has_a = !idx.empty() && times[idx.front()] == a;
        bool has_b = !idx.empty() && times[idx.back()] == b;
        bool interior = false;
        for (auto i : idx) interior = interior || (times[i] > a && times[i] < b);
        if (interior && !(has_a && has_b)) throw Error("long_short_split: octave endpoints missing");
        oct.push_back(idx);
    }
    LongShort out{GridFunction(g), GridFunction(g), GridFunction(g)};
    const auto cells = static_cast<std::int64_t>(g.cells());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t ci = 0; ci < cells; ++ci) {
        auto c = static_cast<std::size_t>(ci);
        std::vector<std::vector<cplx>> all, d;
        for (std::size_t i = 0; i < seq.size(); ++i)
            if (in_full[i]) all.push_back(value_at(seq[i], c));
        for (auto i : dyad) d.push_back(value_at(seq[i], c));
        double acc = 0.0;
        for (const auto& idx : oct) {
            std::vector<std::vector<cplx>> s;
            for (auto i : idx) s.push_back(value_at(seq[i], c));
            double v = vr_seminorm(s, r);
            acc = r == kInf ? std::max(acc, v) : acc + std::pow(v, r);
        }
        out.full.values()[c] = vr_norm(all, r);
        out.dyadic.values()[c] = vr_norm(d, r);
        out.shortv.values()[c] = r == kInf ? acc : std::pow(acc, 1.0 / r);
    }
    return out;
}

}  // namespace

LongShort long_short_split(const std::vector<double>& times, const std::vector<GridFunction>& seq, double r) {
    return split_impl(times, seq, std::vector<bool>(times.size(), true), r);
}

LongShort long_short_split(const GridFunction& sigma, const DilationSet& E, double r, const GridFunction& f) {
    std::vector<double> times = E.t;
    for (double t : E.t) {
        int j = octave_of(t);
        times.push_back(std::ldexp(1.0, j));
        if (!is_dyadic(t)) times.push_back(std::ldexp(1.0, j + 1));
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::vector<GridFunction> seq;
    std::vector<bool> in_E;
    for (double t : times) {
        seq.push_back(convolve(f, resample_dilated(sigma, t, f.grid())));
        in_E.push_back(std::binary_search(E.t.begin(), E.t.end(), t));
    }
    return split_impl(times, seq, in_E, r);
}

namespace {

std::vector<GridFunction> partial_sums(const OperatorFamily& fam, const GridFunction& f) {
    if (fam.n2 - fam.n1 + 1 > kMaxTruncationRange)
        throw Error("truncation range longer than 64 scales; coarsen the family");
    std::vector<GridFunction> out;
    for (int j = fam.n1; j <= fam.n2; ++j) {
        GridFunction t = apply_scale(fam, j, f);
        if (!out.empty()) t += out.back();
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

GridFunction trunc_max(const OperatorFamily& fam, const GridFunction& f) {
    auto P = partial_sums(fam, f);
    const GridSpec& g = f.grid();
    GridFunction out(g);
    const auto cells = static_cast<std::int64_t>(g.cells());
    const std::size_t K = P.size();
#pragma omp parallel for schedule(static)
    for (std::int64_t ci = 0; ci < cells; ++ci) {
        auto c = static_cast<std::size_t>(ci);
        std::vector<std::vector<cplx>> s{std::vector<cplx>(static_cast<std::size_t>(P[0].value_dim()))};
        for (std::size_t k = 0; k < K; ++k) s.push_back(value_at(P[k], c));
        double best = 0.0;
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = a + 1; b < s.size(); ++b) best = std::max(best, dist(s[a], s[b]));
        out.values()[c] = best;
    }
    return out;
}

GridFunction trunc_var(const OperatorFamily& fam, double r, const GridFunction& f) {
    return from_values(f.grid(), kernels::pointwise_variation(partial_sums(fam, f), r));
}

std::size_t embed_index_count(const OperatorFamily& fam, EmbedKind kind) {
    auto K = static_cast<std::size_t>(fam.n2 - fam.n1 + 1);
    return kind == EmbedKind::truncation ? K * (K + 1) / 2 : K;
}

namespace {

// Rows (index positions) receiving T_j.
std::vector<std::size_t> embed_rows(const OperatorFamily& fam, EmbedKind kind, int j) {
    std::vector<std::size_t> rows;
    const int K = fam.n2 - fam.n1 + 1;
    const int jj = j - fam.n1;
    if (kind == EmbedKind::lr) {
        rows.push_back(static_cast<std::size_t>(jj));
    } else if (kind == EmbedKind::vr) {
        for (int n = jj; n < K; ++n) rows.push_back(static_cast<std::size_t>(n));
    } else {
        std::size_t idx = 0;
        for (int a = 0; a < K; ++a)
            for (int b = a; b < K; ++b, ++idx)
                if (a <= jj && jj <= b) rows.push_back(idx);
    }
    return rows;
}

}  // namespace

OperatorFamily hj_embed(const OperatorFamily& fam, EmbedKind kind) {
    OperatorFamily out = fam;
    const std::size_t I = embed_index_count(fam, kind);
    const int in = fam.in_dim, blk = fam.out_dim;
    out.name = fam.name + (kind == EmbedKind::lr ? "/lr" : kind == EmbedKind::vr ? "/vr" : "/trunc");
    out.out_dim = static_cast<int>(I) * blk;
    out.coeff.clear();
    OperatorFamily base = fam;
    out.kernel_fn = [base, kind, I, in, blk](int j) {
        GridFunction k = base.kernel(j);  // coefficient included
        const int total_out = static_cast<int>(I) * blk;
        GridFunction big(k.grid(), total_out * in);
        auto rows = embed_rows(base, kind, j);
        const bool componentwise = k.value_dim() == 1;
        for (std::size_t c = 0; c < k.cells(); ++c) {
            if (k.magnitude(c) == 0.0) continue;
            for (auto row : rows) {
                for (int a = 0; a < blk; ++a) {
                    for (int b = 0; b < in; ++b) {
                        cplx v = componentwise ? (a == b ? k.at(c, 0) : cplx(0.0)) : k.at(c, a * in + b);
                        big.at(c, (static_cast<int>(row) * blk + a) * in + b) = v;
                    }
                }
            }
        }
        return big;
    };
    return out;
}

GridFunction embed_aggregate(const GridFunction& F, EmbedKind kind, double r, int block) {
    const int I = F.value_dim() / block;
    if (I * block != F.value_dim()) throw Error("embed_aggregate: block does not divide the value dimension");
    GridFunction out(F.grid());
    for (std::size_t c = 0; c < F.cells(); ++c) {
        std::vector<std::vector<cplx>> s(static_cast<std::size_t>(I), std::vector<cplx>(static_cast<std::size_t>(block)));
        for (int i = 0; i < I; ++i)
            for (int a = 0; a < block; ++a) s[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = F.at(c, i * block + a);
        double v = 0.0;
        if (kind == EmbedKind::vr) {
            v = vr_norm(s, r);
        } else if (kind == EmbedKind::truncation || r == kInf) {
            for (const auto& x : s) v = std::max(v, vnorm(x));
        } else {
            for (const auto& x : s) v += std::pow(vnorm(x), r);
            v = std::pow(v, 1.0 / r);
        }
        out.values()[c] = v;
    }
    return out;
}

}  // namespace sdlab
