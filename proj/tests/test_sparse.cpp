#include <cmath>
#include <random>

#include <doctest.h>

#include "sdlab/dyadic.hpp"
#include "sdlab/sparse.hpp"

using namespace sdlab;

namespace {

GridFunction indicator(const GridSpec& g, const Cube& q) {
    GridFunction f(g);
    CellMask::from_box(cells_of(q, g)).clipped(g).for_each_grid_cell(g, [&](std::size_t i) { f.at(i) = 1.0; });
    return f;
}

GridFunction random_nonneg(const GridSpec& g, std::mt19937_64& rng) {
    std::exponential_distribution<double> E(1.0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    GridFunction f(g);
    for (auto& v : f.values()) v = U(rng) < 0.3 ? 0.0 : E(rng);
    return f;
}

// Average of |f|^p over the cells of q (virtual cells count as zero).
double cell_average(const GridFunction& f, const Cube& q, double p) {
    const GridSpec& g = f.grid();
    CellBox b = cells_of(q, g);
    double s = 0.0;
    for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i)
        if (i >= 0 && i < g.n) s += std::pow(std::abs(f.at(static_cast<std::size_t>(i))), p);
    return std::pow(s / static_cast<double>(b.hi[0] - b.lo[0]), 1.0 / p);
}

// Random gamma-sparse family of standard cubes: each cube keeps the free
// cells of its left part.
SparseFamily random_family(const GridSpec& g, double gamma, std::mt19937_64& rng) {
    SparseFamily fam;
    fam.grid = g;
    fam.gamma = gamma;
    std::vector<unsigned char> used(g.cells(), 0);
    std::uniform_int_distribution<int> gen(0, 5);
    for (int t = 0; t < 30; ++t) {
        const int k = gen(rng);
        auto cubes = lattice_cubes(DyadicLattice::standard(1), k, Cube{1, {-g.half_width, 0.0}, 2.0 * g.half_width});
        std::uniform_int_distribution<std::size_t> pick(0, cubes.size() - 1);
        const Cube q = cubes[pick(rng)].geometry();
        CellBox b = cells_of(q, g);
        const auto need = static_cast<std::int64_t>(std::ceil(gamma * static_cast<double>(b.count())));
        std::vector<std::size_t> free;
        for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i)
            if (!used[static_cast<std::size_t>(i)]) free.push_back(static_cast<std::size_t>(i));
        if (static_cast<std::int64_t>(free.size()) < need) continue;
        free.resize(static_cast<std::size_t>(need));
        std::vector<unsigned char> flags(g.cells(), 0);
        for (auto i : free) used[i] = flags[i] = 1;
        fam.add(q, CellMask::from_flags(g, flags));
    }
    return fam;
}

}  // namespace

TEST_CASE("verify sparse") {
    GridSpec g(1, 256, 4.0);
    SparseFamily fam;
    fam.grid = g;
    for (int i = -3; i < 3; ++i) {
        const Cube q{1, {static_cast<double>(i), 0.0}, 1.0};
        fam.add(q, CellMask::from_box(cells_of(q, g)));
    }
    for (double gamma : {0.1, 0.5, 1.0}) CHECK(verify_sparse(fam, gamma).ok);

    SparseFamily twice;
    twice.grid = g;
    const Cube q{1, {0.0, 0.0}, 1.0};
    twice.add(q, CellMask::from_box(cells_of(q, g)));
    twice.add(q, CellMask::from_box(cells_of(q, g)));
    auto rep = verify_sparse(twice, 0.5);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.violations.empty());

    SparseFamily outside;
    outside.grid = g;
    outside.add(q, CellMask::from_box(cells_of(Cube{1, {1.0, 0.0}, 1.0}, g)));
    CHECK_FALSE(verify_sparse(outside, 0.5).ok);

    SparseFamily thin;
    thin.grid = g;
    thin.add(q, CellMask::from_box(cells_of(Cube{1, {0.0, 0.0}, 0.25}, g)));
    CHECK(verify_sparse(thin, 0.25).ok);
    CHECK_FALSE(verify_sparse(thin, 0.3).ok);
    CHECK(verify_sparse(SparseFamily{}, 1.0).min_ratio == 1.0);
}

TEST_CASE("sparse form") {
    GridSpec g(1, 256, 4.0);
    const Cube q{1, {0.0, 0.0}, 1.0}, r{1, {-2.0, 0.0}, 0.5};
    SparseFamily one;
    one.grid = g;
    one.add(q, CellMask::from_box(cells_of(q, g)));
    GridFunction iq = indicator(g, q);
    CHECK(sparse_form(one, iq, iq, 1.5, 2.0).value == doctest::Approx(1.0).epsilon(1e-14));

    SparseFamily two = one;
    two.add(r, CellMask::from_box(cells_of(r, g)));
    GridFunction both = iq + indicator(g, r);
    CHECK(sparse_form(two, both, both, 1.0, 1.0).value == doctest::Approx(1.5).epsilon(1e-14));

    std::mt19937_64 rng(12);
    for (int t = 0; t < 20; ++t) {
        SparseFamily fam = random_family(g, 0.5, rng);
        REQUIRE(verify_sparse(fam, 0.5).ok);
        GridFunction f1 = random_nonneg(g, rng), f2 = random_nonneg(g, rng);
        double oracle = 0.0;
        for (const auto& c : fam.cubes) oracle += c.measure() * cell_average(f1, c, 1.5) * cell_average(f2, c, 3.0);
        const double v = sparse_form(fam, f1, f2, 1.5, 3.0).value;
        CHECK(v == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(sparse_form(fam, f1, 0.5 * f2, 1.5, 1.0).value ==
              doctest::Approx(0.5 * sparse_form(fam, f1, f2, 1.5, 1.0).value).epsilon(1e-14));
        // Monotone under inclusion and pointwise increase.
        if (fam.size() > 1) {
            SparseFamily sub = fam;
            sub.cubes.pop_back();
            sub.masks.pop_back();
            CHECK(sparse_form(sub, f1, f2, 1.5, 3.0).value <= v + 1e-12);
        }
        GridFunction bigger = f1;
        for (auto& z : bigger.values()) z = std::abs(z) + 0.1;
        CHECK(sparse_form(fam, bigger, f2, 1.5, 3.0).value >= v - 1e-12);
    }
}

TEST_CASE("maximal form bounds") {
    GridSpec g(1, 256, 2.0);
    GridFunction ind = indicator(g, Cube{1, {0.0, 0.0}, 1.0});
    const double up = maximal_form_upper(ind, ind, 1.5, 2.0, 0.5);
    CHECK(up >= 1.0);
    CHECK(std::isfinite(up));
    CHECK(maximal_form_upper(GridFunction(g), ind, 1.5, 2.0, 0.5) == 0.0);

    LowerBound lb = maximal_form_lower(ind, ind, 1.5, 2.0, 0.5);
    CHECK(lb.form.value >= 1.0 - 1e-12);
    CHECK(verify_sparse(lb.family, 0.5).ok);
    CHECK(lb.form.value <= up);

    // Dilating the grid by 2 doubles the value in d = 1.
    std::mt19937_64 rng(77);
    for (int t = 0; t < 5; ++t) {
        GridFunction f1 = random_nonneg(g, rng), f2 = random_nonneg(g, rng);
        GridSpec g2(1, 256, 4.0);
        GridFunction h1(g2), h2(g2);
        for (std::size_t i = 0; i < g.cells(); ++i) h1.at(i) = f1.at(i), h2.at(i) = f2.at(i);
        const double a = maximal_form_lower(f1, f2, 1.5, 2.0, 0.5).form.value;
        const double b = maximal_form_lower(h1, h2, 1.5, 2.0, 0.5).form.value;
        CHECK(b == doctest::Approx(2.0 * a).epsilon(1e-12));
    }

    int bad = 0;
    for (int t = 0; t < 100; ++t) {
        GridFunction f1 = random_nonneg(g, rng), f2 = random_nonneg(g, rng);
        const double u = maximal_form_upper(f1, f2, 1.5, 2.0, 0.5);
        SparseFamily fam = random_family(g, 0.5, rng);
        bad += sparse_form(fam, f1, f2, 1.5, 2.0).value > u * (1.0 + 1e-12);
        bad += maximal_form_lower(f1, f2, 1.5, 2.0, 0.5).form.value > u * (1.0 + 1e-12);
    }
    CHECK(bad == 0);
}

TEST_CASE("triple form") {
    GridSpec g(1, 256, 4.0);
    const Cube q0{1, {0.0, 0.0}, 1.0};
    SparseFamily one;
    one.grid = g;
    one.add(q0, CellMask::from_box(cells_of(q0, g)));
    GridFunction ring = indicator(g, Cube{1, {1.0, 0.0}, 1.0});
    GridFunction ind = indicator(g, q0);
    CHECK(triple_form(one, ind, ring, 1.5, 2.0, q0).value > 0.0);
    CHECK(sparse_form(one, ind, ring, 1.5, 2.0).value == 0.0);
    GridFunction full = indicator(g, q0.tripled());
    CHECK(triple_form(one, ind, full, 1.5, 2.0, q0).value == doctest::Approx(1.0).epsilon(1e-14));

    SparseFamily bad;
    bad.grid = g;
    const Cube far{1, {2.0, 0.0}, 1.0};
    bad.add(far, CellMask::from_box(cells_of(far, g)));
    CHECK_THROWS_AS(triple_form(bad, ind, ind, 1.5, 2.0, q0), Error);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        SparseFamily fam;
        fam.grid = g;
        for (int k = 0; k <= 3; ++k) {
            const Cube c{1, {0.0, 0.0}, std::ldexp(1.0, -k)};
            const Cube in{1, {0.0, 0.0}, std::ldexp(1.0, -k - 1)};
            fam.add(c, CellMask::from_box(cells_of(c, g)).subtract(CellMask::from_box(cells_of(in, g))));
        }
        GridFunction f1 = random_nonneg(g, rng), f2 = random_nonneg(g, rng).restricted(cells_of(q0, g));
        const double qd = 2.0;
        CHECK(triple_form(fam, f1, f2, 1.5, qd, q0).value >=
              std::pow(3.0, -1.0 / qd) * sparse_form(fam, f1, f2, 1.5, qd).value * (1.0 - 1e-12));
    }
}

TEST_CASE("hardy littlewood sparse domination") {
    GridSpec g(1, 512, 4.0);
    CHECK(hl_sparse_dominate(GridFunction(g), 0.5).level_ratio == doctest::Approx(4.0));
    HLDomination z = hl_sparse_dominate(GridFunction(g), 0.5);
    for (const auto& f : z.families) CHECK(f.empty());

    const Cube q{1, {0.0, 0.0}, 1.0};
    HLDomination d = hl_sparse_dominate(indicator(g, q), 0.5);
    CHECK(d.certificate_holds);
    CHECK(d.families_sparse);
    bool comparable = false;
    for (const auto& fam : d.families)
        for (const auto& c : fam.cubes) comparable = comparable || (c.side >= 0.5 && c.side <= 4.0 && c.intersects(q));
    CHECK(comparable);

    GridSpec g2(2, 64, 2.0);
    CHECK(hl_sparse_dominate(GridFunction(g2), 0.5).level_ratio == doctest::Approx(8.0));
    std::mt19937_64 rng(8);
    for (int t = 0; t < 3; ++t) {
        GridFunction f = random_nonneg(g2, rng);
        HLDomination r = hl_sparse_dominate(f, 0.5);
        CHECK(r.certificate_holds);
        CHECK(r.families_sparse);
        CHECK(r.families.size() == 9);
    }
}
