#include <cmath>
#include <random>

#include <doctest.h>

#include "sdlab/multiplier.hpp"

using namespace sdlab;

namespace {

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<double> log_ladder(int lo, int hi) {
    std::vector<double> h;
    for (int k = hi; k >= lo; --k) h.push_back(std::ldexp(1.0, k));
    return h;
}

}  // namespace

TEST_CASE("localized pieces") {
    const SymbolLocalization loc = SymbolLocalization::standard(GridSpec(1, 2048, 64.0));
    const int top = loc.max_level();
    REQUIRE(top >= 6);

    // The kernel of phi decays like exp(-c sqrt|x|), so the far pieces need a
    // long grid before they drop below 1e-8.
    auto one = symbol_zoo("identity", {});
    const SymbolLocalization far = SymbolLocalization::standard(GridSpec(1, 1 << 18, 8192.0));
    REQUIRE(far.max_level() >= 15);
    std::vector<double> sups;
    for (int l = 0; l <= far.max_level(); ++l) sups.push_back(localized_piece(one, 1.0, l, far).sup_norm());
    CHECK(sups[0] > 0.1);
    for (int l = 14; l <= far.max_level(); ++l) CHECK(sups[static_cast<std::size_t>(l)] <= 1e-8);
    SampledSymbol phi_only = band_symbol(one, 1.0, far);
    SampledSymbol head = SampledSymbol::zeros(far.grid, 1, 1);
    for (int l = 0; l < 14; ++l) head += localized_piece(one, 1.0, l, far);
    CHECK(max_abs_diff(head.entry(0, 0), phi_only.entry(0, 0)) <= 1e-8);

    for (int ls : {2, 3, 4}) {
        const double shift = std::ldexp(1.0, ls);
        auto tr = symbol_zoo("translation", {{"h0", shift}});
        int best = 0;
        double bv = -1.0;
        for (int l = 0; l <= top; ++l) {
            const double v = localized_piece(tr, 1.0, l, loc).sup_norm();
            if (v > bv) bv = v, best = l;
        }
        // The peak piece is the one whose annulus carries the shifted kernel.
        CHECK(loc.psi(best, shift) > 0.5);
    }

    for (std::uint64_t s = 0; s < 20; ++s) {
        auto m = random_sign_symbol(-2, 3, 40 + s);
        const double t = std::ldexp(1.0, static_cast<int>(s % 3) - 1);
        SampledSymbol band = band_symbol(m, t, loc);
        SampledSymbol acc = SampledSymbol::zeros(loc.grid, 1, 1);
        for (int l = 0; l <= top; ++l) acc += localized_piece(m, t, l, loc);
        CHECK(max_abs_diff(acc.entry(0, 0), band.entry(0, 0)) < 1e-12);
    }
}

TEST_CASE("b functional") {
    const SymbolLocalization loc = SymbolLocalization::standard(GridSpec(1, 1024, 64.0));
    const auto tg = octave_tgrid(0, 1);
    BFunctional z = b_functional(symbol_zoo("constant", {{"c", 0.0}}), 2.0, 2.0, loc.max_level(), tg, loc);
    CHECK(z.B == 0.0);
    CHECK(z.Bcirc == 0.0);
    for (double v : z.profile) CHECK(v == 0.0);

    // Smooth compactly supported symbol: the profile decays fast and B settles.
    const SymbolLocalization wide = SymbolLocalization::standard(GridSpec(1, 16384, 2048.0));
    REQUIRE(wide.max_level() >= 12);
    auto bump = symbol_zoo("bump", {{"center", 1.0}, {"width", 1.0}});
    BFunctional bf = b_functional(bump, 2.0, 2.0, wide.max_level(), {1.0}, wide);
    for (std::size_t l = 11; l < bf.profile.size(); ++l) CHECK(bf.profile[l] <= 1e-6);
    // Each step beyond the kernel's bulk gains more than a factor 2^4.
    for (std::size_t l = 9; l + 1 < bf.profile.size() && bf.profile[l] > 1e-13; ++l)
        CHECK(bf.profile[l + 1] <= bf.profile[l] / 16.0);
    double prev = b_functional(bump, 2.0, 2.0, 10, {1.0}, wide).B;
    for (int L = 11; L <= wide.max_level(); ++L) {
        const double cur = b_functional(bump, 2.0, 2.0, L, {1.0}, wide).B;
        CHECK(std::abs(cur - prev) <= 1e-6);
        prev = cur;
    }
}

TEST_CASE("sobolev norms") {
    auto one = symbol_zoo("identity", {});
    SobolevOptions so;
    so.n = 2048;
    const double a = hoermander_sobolev(one, 2.0, 1.0, {1.0}, so);
    const double b = hoermander_sobolev(one, 2.0, 1.0, {0.25, 3.0, 7.5}, so);
    CHECK(std::isfinite(a));
    CHECK(b == doctest::Approx(a).epsilon(1e-12));

    auto br = symbol_zoo("bochner_riesz", {{"lambda", 1.0}});
    const std::vector<double> G{0.5, 1.0, 2.0, 4.0};
    std::vector<double> G2;
    for (double t : G) G2.push_back(2.0 * t);
    CHECK(hoermander_sobolev(dilate_symbol(br, 2.0), 2.0, 0.5, G, so) ==
          doctest::Approx(hoermander_sobolev(br, 2.0, 0.5, G2, so)).epsilon(1e-12));

    GrowthVerdict fin = sobolev_finiteness(br, 0.3, {1.0}, {2048, 4096, 8192, 16384});
    CHECK(fin.finite);
    GrowthVerdict inf = sobolev_finiteness(symbol_zoo("bochner_riesz", {{"lambda", 0.3}}), 0.9, {1.0},
                                           {2048, 4096, 8192, 16384});
    CHECK_FALSE(inf.finite);
}

TEST_CASE("miyachi slopes") {
    auto pw = symbol_zoo("power", {{"b", 0.75}});
    MiyachiReport r0 = miyachi_check(pw, 1.0, 0.75, {0});
    REQUIRE(r0.slopes.size() == 1);
    CHECK(std::abs(r0.slopes[0] + 0.75) <= 0.05 * 0.75);

    auto mab = symbol_zoo("m_ab", {{"a", 0.5}, {"b", 1.0}});
    MiyachiReport r1 = miyachi_check(mab, 0.5, 1.0, {1});
    CHECK(std::abs(r1.slopes[0] - (-1.0 + (0.5 - 1.0))) <= 0.1 * 1.5);
    CHECK(r1.pass);

    MiyachiReport neg = miyachi_check(symbol_zoo("identity", {}), 1.0, 0.5, {0});
    CHECK(std::abs(neg.slopes[0]) < 1e-9);
    CHECK_FALSE(neg.pass);
}

TEST_CASE("holder modulus") {
    const SymbolLocalization loc = SymbolLocalization::standard(GridSpec(1, 1024, 64.0));
    AscentOptions asc(2, 10);
    const auto hl = log_ladder(-6, -2);
    for (int M : {1, 2, 3})
        CHECK(holder_mpq(symbol_zoo("constant", {{"c", 2.0}}), 2.0, 2.0, 0.5, M, {1.0}, hl, loc,
                         DifferencePlacement::symbol, asc) < 1e-12);
    CHECK(holder_mpq(symbol_zoo("linear", {{"c0", 1.0}, {"c1", 3.0}}), 2.0, 2.0, 1.5, 2, {1.0, 2.0}, hl, loc,
                     DifferencePlacement::symbol, asc) < 1e-10);

    auto bump = symbol_zoo("bump", {{"center", 1.0}, {"width", 0.75}});
    const double coarse = holder_mpq(bump, 2.0, 2.0, 0.5, 1, {1.0}, log_ladder(-5, -1), loc,
                                     DifferencePlacement::product, asc);
    const double fine = holder_mpq(bump, 2.0, 2.0, 0.5, 1, {1.0}, log_ladder(-8, -1), loc,
                                   DifferencePlacement::product, asc);
    CHECK(std::isfinite(fine));
    CHECK(fine <= 1.5 * coarse);
    CHECK(fine >= coarse * (1.0 - 1e-12));
}

TEST_CASE("logarithmic interpolation") {
    const SymbolLocalization loc = SymbolLocalization::standard(GridSpec(1, 2048, 128.0));
    const GridSpec global(1, 4096, 256.0);
    AscentOptions asc(2, 10);
    LogInterpReport one = log_interp_check(symbol_zoo("identity", {}), 1.5, {1.0}, loc, global, asc);
    CHECK(one.global <= 1.0 + 1e-9);
    CHECK(one.ratio <= 1.0 + 1e-9);

    double worst = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        LogInterpReport r =
            log_interp_check(random_sign_symbol(-2, 3, 100 + s), 1.5, octave_tgrid(-3, 3, 2), loc, global, asc);
        worst = std::max(worst, r.ratio);
    }
    CHECK(worst <= 10.0);

    std::vector<double> lx, ly;
    for (int osc = 0; osc <= 6; ++osc) {
        LogInterpReport r =
            log_interp_check(random_sign_symbol(-1, 1, 7, 1, osc), 1.5, octave_tgrid(-2, 2, 2), loc, global, asc);
        lx.push_back(std::log(r.b));
        ly.push_back(r.global);
    }
    CHECK(fit_slope(lx, ly) <= std::abs(1.0 / 1.5 - 0.5) + 0.2);
}

TEST_CASE("symbol invariance") {
    const GridSpec g(1, 1024, 64.0);
    AscentOptions asc(2, 10);
    auto band = symbol_zoo("bump", {{"center", 1.0}, {"width", 0.5}});
    auto unit = symbol_zoo("identity", {});
    InvarianceReport same = symbol_invariance_checks(band, 2.0, 2.0, 6, {1.0}, g, &unit, asc);
    CHECK(same.ratio_factor == 1.0);
    CHECK(same.ratio_choice >= 0.01);
    CHECK(same.ratio_choice <= 100.0);

    auto oz = order_zero_symbol(1);
    InvarianceReport r = symbol_invariance_checks(band, 2.0, 2.0, 6, {1.0, 2.0}, g, &oz, asc);
    CHECK(r.ratio_factor <= r.cstar);
    CHECK(r.ratio_factor >= 1.0 / r.cstar);
    CHECK(r.pass);
}
