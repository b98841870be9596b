#include <cmath>
#include <random>

#include <doctest.h>

#include "sdlab/dyadic.hpp"
#include "sdlab/grid.hpp"
#include "sdlab/operators.hpp"
#include "sdlab/kernels.hpp"
#include "sdlab/reference.hpp"

using namespace sdlab;

namespace {

GridFunction unit_indicator(const GridSpec& g) { return GridFunction::indicator(g, Cube{g.dim, {0.0, 0.0}, 1.0}); }

GridFunction noise(const GridSpec& g, std::uint64_t seed, bool nonneg = false) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    GridFunction f(g);
    for (auto& v : f.values()) v = nonneg ? std::abs(N(rng)) : N(rng);
    return f;
}

CellBox middle_half(const GridSpec& g) {
    CellBox b{g.dim, {g.n / 4, g.dim == 2 ? g.n / 4 : 0}, {3 * g.n / 4, g.dim == 2 ? 3 * g.n / 4 : 1}};
    return b;
}

}  // namespace

TEST_CASE("grid spec invariants") {
    GridSpec g(1, 256, 4.0);
    CHECK(g.spacing() * static_cast<double>(g.n) == 8.0);
    CHECK(g.coord(g.origin()) == 0.0);
    CHECK_THROWS_AS(GridSpec(1, 100, 1.0), Error);
    CHECK_THROWS_AS(Exponent(1.0), Error);
    CHECK(Exponent(3.0).dual() == doctest::Approx(1.5));
}

TEST_CASE("lp norms") {
    GridSpec g(1, 1024, 2.0);
    const double h = g.spacing();
    CHECK(lp_norm(GridFunction(g), 2.0) == 0.0);
    CHECK(std::abs(lp_norm(unit_indicator(g), 2.0) - 1.0) <= h);
    GridFunction x = GridFunction::sample(g, [](const std::array<double, 2>& p) {
        return p[0] >= 0.0 && p[0] < 1.0 ? cplx(p[0]) : cplx(0.0);
    });
    CHECK(std::abs(lp_norm(x, 2.0) - 1.0 / std::sqrt(3.0)) <= 2.0 * h);
    for (double p : {1.5, 2.0, 4.0})
        CHECK(lp_norm(noise(g, 3), p) >= 0.0);
}

TEST_CASE("lorentz norms of an indicator") {
    GridSpec g(1, 1024, 2.0);
    GridFunction f = unit_indicator(g);
    for (double p : {1.25, 2.0, 3.0}) CHECK(lorentz_weak_norm(f, p) == doctest::Approx(1.0).epsilon(1e-12));
    for (double q : {1.5, 2.0, 4.0}) {
        // int_0^1 t^{1/q - 1} dt = q
        CHECK(std::abs(lorentz_q1_norm(f, q) / q - 1.0) <= 0.03);
    }
    CHECK(lorentz_weak_norm(GridFunction(g), 2.0) == 0.0);
    CHECK(lorentz_q1_norm(GridFunction(g), 2.0) == 0.0);
}

TEST_CASE("local averages") {
    GridSpec g(1, 512, 2.0);
    const Cube q{1, {0.0, 0.0}, 1.0};
    CHECK(local_average(GridFunction::constant(g, -3.0), q, 2.0) == doctest::Approx(3.0));
    GridFunction left = GridFunction::indicator(g, Cube{1, {0.0, 0.0}, 0.5});
    CHECK(std::abs(local_average(left, q, 1.0) - 0.5) <= g.spacing());
    CHECK(local_average(left, q, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("hl maximal function") {
    GridSpec g(1, 64, 2.0);
    GridFunction c = GridFunction::constant(g, 2.5);
    GridFunction mc = hl_maximal(c, 1.0);
    for (std::size_t i = 0; i < mc.cells(); ++i) CHECK(mc.at(i).real() == doctest::Approx(2.5));

    // Exhaustive oracle over every admitted cube containing the cell center.
    GridFunction f = unit_indicator(g);
    GridFunction mf = hl_maximal(f, 1.0);
    const Cube big{1, {-4.0 * g.half_width, 0.0}, 8.0 * g.half_width};
    for (std::int64_t i = 0; i < g.n; i += 5) {
        const double x = g.center(i);
        double best = 0.0;
        for (const auto& lat : DyadicLattice::shifted_family(1)) {
            for (int k = coarsest_generation(g); k <= finest_generation(g); ++k) {
                for (const auto& dq : lattice_cubes(lat, k, big)) {
                    Cube q = dq.geometry();
                    if (!(x >= q.lo[0] && x < q.hi(0))) continue;
                    double s = 0.0;
                    for (std::int64_t j = 0; j < g.n; ++j)
                        if (g.center(j) >= q.lo[0] && g.center(j) < q.hi(0)) s += f.at(static_cast<std::size_t>(j)).real();
                    best = std::max(best, s / std::round(q.side / g.spacing()));
                }
            }
        }
        CHECK(mf.at(static_cast<std::size_t>(i)).real() == doctest::Approx(best).epsilon(1e-12));
    }

    GridSpec g2(1, 256, 2.0);
    for (int t = 0; t < 50; ++t) {
        GridFunction r = noise(g2, 100 + static_cast<std::uint64_t>(t));
        GridFunction m1 = hl_maximal(r, 1.0), m2 = hl_maximal(r, 2.0);
        bool ok = true;
        for (std::size_t i = 0; i < r.cells(); ++i) ok = ok && m2.at(i).real() >= m1.at(i).real() * (1.0 - 1e-12);
        CHECK(ok);
    }
}

TEST_CASE("convolution") {
    GridSpec g(1, 256, 4.0);
    GridFunction f = noise(g, 7).restricted(CellBox{1, {64, 0}, {192, 1}});
    GridFunction delta(g);
    delta.at(static_cast<std::size_t>(g.origin())) = 1.0 / g.spacing();
    GridFunction fd = convolve(f, delta);
    for (std::size_t i = 0; i < f.cells(); ++i) CHECK(std::abs(fd.at(i) - f.at(i)) < 1e-12);

    // 1_[0,1] * 1_[0,1] against a direct double sum.
    GridFunction u = unit_indicator(g);
    GridFunction k(g);
    for (std::int64_t i = 0; i < g.n; ++i)
        if (g.center(i) >= 0.0 && g.center(i) < 1.0) k.at(static_cast<std::size_t>(i)) = 1.0;
    GridFunction hat = convolve(u, k);
    double peak = 0.0, peak_x = 0.0;
    for (std::int64_t i = 0; i < g.n; ++i) {
        double direct = 0.0;
        for (std::int64_t j = 0; j < g.n; ++j) {
            const std::int64_t off = i - j + g.origin();
            if (off >= 0 && off < g.n) direct += u.at(static_cast<std::size_t>(j)).real() * k.at(static_cast<std::size_t>(off)).real();
        }
        direct *= g.spacing();
        CHECK(hat.at(static_cast<std::size_t>(i)).real() == doctest::Approx(direct).epsilon(1e-12));
        if (direct > peak) peak = direct, peak_x = g.coord(i);
    }
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(peak_x - 1.0) <= g.spacing());

    CellBox fb = f.support_box(), hb = convolve(f, k).support_box();
    CHECK(hb.lo[0] >= fb.lo[0] - 1);
    CHECK(hb.hi[0] <= fb.hi[0] + static_cast<std::int64_t>(1.0 / g.spacing()) + 1);

    GridFunction wide(g);
    wide.at(static_cast<std::size_t>(g.n - 1)) = 1.0;
    CHECK_THROWS_WITH_AS(convolve(wide, k), doctest::Contains("wraparound"), Error);
}

TEST_CASE("finite differences") {
    GridSpec g(1, 256, 4.0);
    const double h0 = 4.0 * g.spacing();
    GridFunction c = GridFunction::constant(g, 3.0);
    GridFunction dc = delta_h(c, {h0, 0.0});
    GridFunction x = GridFunction::sample(g, [](const std::array<double, 2>& p) { return cplx(p[0]); });
    GridFunction x2 = GridFunction::sample(g, [](const std::array<double, 2>& p) { return cplx(p[0] * p[0]); });
    GridFunction dx = delta_h(x, {h0, 0.0});
    GridFunction d2 = delta_h_iter(x2, {h0, 0.0}, 2);
    for (std::int64_t i = 8; i < g.n - 16; ++i) {
        const auto s = static_cast<std::size_t>(i);
        CHECK(std::abs(dc.at(s)) < 1e-12);
        CHECK(dx.at(s).real() == doctest::Approx(h0).epsilon(1e-9));
        CHECK(d2.at(s).real() == doctest::Approx(2.0 * h0 * h0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(delta_h(x, {0.3 * g.spacing(), 0.0}), Error);
}

TEST_CASE("parallel kernels agree with the serial reference") {
    for (int d : {1, 2}) {
        GridSpec g(d, d == 1 ? 512 : 32, 2.0);
        GridFunction f = noise(g, 11, true);
        auto lats = DyadicLattice::shifted_family(d);
        for (double p : {1.0, 2.0}) {
            PrefixSums ps(f, p);
            std::vector<double> fast;
            kernels::lattice_maximal(ps, lats, coarsest_generation(g), finest_generation(g), fast);
            auto slow = reference::lattice_maximal(f, p, lats, coarsest_generation(g), finest_generation(g));
            REQUIRE(fast.size() == slow.size());
            for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-12));
        }
        GridFunction k(g);
        for (std::int64_t i = -2; i <= 2; ++i) k.at(k.cell_index(g.origin() + i, d == 2 ? g.origin() : 0)) = 0.3 * static_cast<double>(i);
        GridFunction fs = f.restricted(middle_half(g));
        GridFunction fast(g);
        kernels::convolve_direct(fs, k, fast);
        GridFunction slow = reference::convolve_direct(fs, k);
        for (std::size_t i = 0; i < fast.cells(); ++i) CHECK(std::abs(fast.at(i) - slow.at(i)) < 1e-12);
    }
    GridSpec g(1, 128, 2.0);
    std::vector<GridFunction> seq;
    for (int i = 0; i < 8; ++i) seq.push_back(noise(g, 40 + static_cast<std::uint64_t>(i)));
    for (double r : {1.0, 2.0, kInf}) {
        auto fast = kernels::pointwise_variation(seq, r);
        auto slow = reference::pointwise_variation(seq, r);
        for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-12));
    }
}
