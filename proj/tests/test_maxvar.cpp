#include <cmath>
#include <random>

#include <doctest.h>

#include "sdlab/maxvar.hpp"
#include "sdlab/operators.hpp"

using namespace sdlab;

namespace {

// Brute force over every increasing index chain (bitmask enumeration).
double brute_vr(const std::vector<cplx>& a, double r) {
    const std::size_t n = a.size();
    double best = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<cplx> chain;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) chain.push_back(a[i]);
        double s = 0.0;
        for (std::size_t i = 1; i < chain.size(); ++i) {
            const double d = std::abs(chain[i] - chain[i - 1]);
            s = std::isinf(r) ? std::max(s, d) : s + std::pow(d, r);
        }
        best = std::max(best, std::abs(chain[0]) + (std::isinf(r) ? s : std::pow(s, 1.0 / r)));
    }
    return best;
}

double brute_vr(const std::vector<double>& a, double r) { return brute_vr(std::vector<cplx>(a.begin(), a.end()), r); }

GridFunction random_input(const GridSpec& g, std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    std::normal_distribution<double> N(0.0, 1.0);
    GridFunction f(g);
    for (std::int64_t i = lo; i < hi; ++i) f.at(static_cast<std::size_t>(i)) = N(rng);
    return f;
}

}  // namespace

TEST_CASE("square functions") {
    GridSpec g(1, 1024, 8.0);
    OperatorFamily fam = radon_family(odd_step_sigma(128), g, -3, 1);
    OperatorFamily one = radon_family(odd_step_sigma(128), g, 0, 0);
    std::mt19937_64 rng(3);
    GridFunction f = random_input(g, rng, 400, 620);
    GridFunction s1 = sr_apply(one, 2.0, f), t0 = apply_scale(one, 0, f);
    for (std::size_t i = 0; i < g.cells(); ++i) CHECK(std::abs(s1.at(i).real() - std::abs(t0.at(i))) < 1e-14);

    GridFunction sinf = sr_apply(fam, kInf, f), s2 = sr_apply(fam, 2.0, f);
    for (std::size_t i = 0; i < g.cells(); ++i) CHECK(sinf.at(i).real() <= s2.at(i).real());

    // Delta-like input: per-scale outputs summed by hand.
    GridFunction d(g);
    d.at(static_cast<std::size_t>(g.origin())) = 1.0 / g.spacing();
    GridFunction s3 = sr_apply(fam, 3.0, d);
    std::vector<GridFunction> per;
    for (int j = fam.n1; j <= fam.n2; ++j) per.push_back(convolve(d, fam.kernel(j)));
    for (std::size_t i = 0; i < g.cells(); ++i) {
        double s = 0.0;
        for (const auto& p : per) s += std::pow(std::abs(p.at(i)), 3.0);
        CHECK(s3.at(i).real() == doctest::Approx(std::cbrt(s)).epsilon(1e-12));
    }
}

TEST_CASE("variation norms") {
    CHECK(vr_norm(std::vector<double>{-3.0, -3.0, -3.0, -3.0}, 2.0) == 3.0);
    CHECK(vr_norm(std::vector<double>{1.0, 2.0, 4.0}, 2.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(vr_seminorm(std::vector<double>{1.0, 2.0, 4.0}, 1.0) == doctest::Approx(3.0).epsilon(1e-15));

    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> len(1, 12);
    std::normal_distribution<double> N(0.0, 1.0);
    int bad = 0;
    for (int t = 0; t < 200; ++t) {
        const int n = len(rng);
        std::vector<double> a(static_cast<std::size_t>(n));
        double x = N(rng);
        for (auto& v : a) v = (x += std::abs(N(rng)));
        for (double r : {1.0, 1.5, 2.0, 3.0, kInf})
            bad += std::abs(vr_norm(a, r) - brute_vr(a, r)) > 1e-12 * std::max(1.0, brute_vr(a, r));
    }
    CHECK(bad == 0);

    std::vector<double> zig{0.0, 1.0, 1.0, -2.0, 3.0, 3.0, 3.0, 0.5};
    auto c = extrema_candidates(zig);
    CHECK(c.front() == 0);
    CHECK(c.back() == zig.size() - 1);
    CHECK(vr_norm(zig, 2.0) == doctest::Approx(brute_vr(zig, 2.0)).epsilon(1e-14));
}

TEST_CASE("variation operators") {
    GridSpec g(1, 1024, 8.0);
    OperatorFamily fam = radon_family(odd_step_sigma(128), g, -3, 1);
    OperatorFamily one = radon_family(odd_step_sigma(128), g, 0, 0);
    std::mt19937_64 rng(8);
    GridFunction f = random_input(g, rng, 420, 600);

    GridFunction v1 = vr_operator(one, 2.0, f), t0 = apply_scale(one, 0, f);
    GridFunction m1 = trunc_max(one, f), w1 = trunc_var(one, 2.0, f);
    for (std::size_t i = 0; i < g.cells(); ++i) {
        CHECK(std::abs(v1.at(i).real() - std::abs(t0.at(i))) < 1e-14);
        CHECK(std::abs(m1.at(i).real() - std::abs(t0.at(i))) < 1e-14);
        CHECK(std::abs(w1.at(i).real() - std::abs(t0.at(i))) < 1e-14);
    }

    GridFunction vinf = vr_operator(fam, kInf, f);
    std::vector<GridFunction> per;
    for (int j = fam.n1; j <= fam.n2; ++j) per.push_back(apply_scale(fam, j, f));
    GridFunction all = sum_apply(fam, f), tm = trunc_max(fam, f), tv = trunc_var(fam, kInf, f);
    for (std::size_t i = 0; i < g.cells(); ++i) {
        std::vector<cplx> seq;
        for (const auto& a : per) seq.push_back(a.at(i));
        CHECK(vinf.at(i).real() == doctest::Approx(brute_vr(seq, kInf)).epsilon(1e-12));
        CHECK(tm.at(i).real() >= std::abs(all.at(i)) - 1e-12);
        CHECK(tv.at(i).real() >= tm.at(i).real() - 1e-12);
    }

    // Long/short split on a mixed dilation set.
    GridSpec gs(1, 2048, 16.0);
    GridFunction sigma = odd_step_sigma(256);
    DilationSet E({0.75, 1.0, 1.3, 1.7, 2.5, 3.0, 3.9, 5.0});
    int bad = 0;
    for (int t = 0; t < 50; ++t) {
        GridFunction h = random_input(gs, rng, 900, 1150);
        for (double r : {2.0, 3.0}) {
            LongShort ls = long_short_split(sigma, E, r, h);
            for (std::size_t i = 0; i < gs.cells(); ++i)
                bad += ls.full.at(i).real() >
                       (ls.dyadic.at(i).real() + kShortVariationConstant * ls.shortv.at(i).real()) * (1.0 + 1e-12) +
                           1e-12;
        }
    }
    CHECK(bad == 0);
}

TEST_CASE("scale embeddings") {
    GridSpec g(1, 512, 8.0);
    OperatorFamily one = radon_family(odd_step_sigma(64), g, 0, 0);
    std::mt19937_64 rng(2);
    GridFunction f = random_input(g, rng, 200, 300);
    for (auto kind : {EmbedKind::lr, EmbedKind::vr, EmbedKind::truncation}) {
        OperatorFamily e = hj_embed(one, kind);
        CHECK(embed_index_count(one, kind) == 1);
        GridFunction a = sum_apply(e, f), b = apply_scale(one, 0, f);
        for (std::size_t i = 0; i < g.cells(); ++i) CHECK(std::abs(a.at(i, 0) - b.at(i)) < 1e-14);
    }

    OperatorFamily fam = radon_family(odd_step_sigma(64), g, -2, 1);
    OperatorFamily e = hj_embed(fam, EmbedKind::lr);
    GridFunction F = sum_apply(e, f);
    int k = 0;
    for (int j = fam.n1; j <= fam.n2; ++j, ++k) {
        GridFunction tj = apply_scale(fam, j, f);
        for (std::size_t i = 0; i < g.cells(); ++i) CHECK(std::abs(F.at(i, k) - tj.at(i)) < 1e-13);
    }
    GridFunction agg = embed_aggregate(F, EmbedKind::lr, kInf, 1), s = sr_apply(fam, kInf, f);
    for (std::size_t i = 0; i < g.cells(); ++i) CHECK(std::abs(agg.at(i) - s.at(i)) <= 1e-12);
}
