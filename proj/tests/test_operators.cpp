#include <cmath>
#include <random>

#include <doctest.h>

#include "sdlab/fft.hpp"
#include "sdlab/normlab.hpp"
#include "sdlab/operators.hpp"
#include "sdlab/symbols.hpp"

using namespace sdlab;

namespace {

GridFunction random_compact(const GridSpec& g, std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    std::normal_distribution<double> N(0.0, 1.0);
    GridFunction f(g);
    for (std::int64_t i = lo; i < hi; ++i) f.at(static_cast<std::size_t>(i)) = N(rng);
    return f;
}

double max_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.cells(); ++i) m = std::max(m, std::abs(a.at(i) - b.at(i)));
    return m;
}

// Least squares slope, computed here rather than through the library.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxy / sxx;
}

}  // namespace

TEST_CASE("scale application") {
    GridSpec g(1, 2048, 16.0);
    OperatorFamily fam = radon_family(odd_step_sigma(256), g, -3, 1);
    CHECK(sum_apply(fam, GridFunction(g)).is_zero());
    GridFunction f(g);
    f.at(1000) = 1.0;
    CHECK(max_diff(sum_apply(fam, 0, 0, f), apply_scale(fam, 0, f)) == 0.0);

    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::int64_t> start(600, 1300);
    int bad = 0;
    for (int t = 0; t < 50; ++t) {
        const auto lo = start(rng);
        GridFunction u = random_compact(g, rng, lo, lo + 64);
        for (int j = fam.n1; j <= fam.n2; ++j)
            bad += !output_within(u, apply_scale(fam, j, u), std::ldexp(1.0, j) + g.spacing());
        bad += !output_within(u, sum_apply(fam, u), std::ldexp(1.0, fam.n2) + g.spacing());
    }
    CHECK(bad == 0);
    CHECK(support_condition_holds(fam));
    CHECK(strengthened_support_holds(fam, 0.5 - 1e-9));
}

TEST_CASE("dilated scales") {
    GridSpec g(1, 1024, 8.0);
    OperatorFamily fam = radon_family(odd_step_sigma(128), g, -2, 1);
    DilatedScale d0 = dilate_op(fam, 0);
    GridFunction k0 = fam.kernel(0);
    CHECK(max_diff(dilate_kernel(k0, 0), k0) == 0.0);
    const std::int64_t off = g.origin() - d0.kernel.grid().origin();
    for (std::int64_t i = 0; i < d0.kernel.grid().n; ++i)
        CHECK(d0.kernel.at(static_cast<std::size_t>(i)) == k0.at(static_cast<std::size_t>(i + off)));
    for (int j = fam.n1; j <= fam.n2; ++j) {
        DilatedScale dj = dilate_op(fam, j);
        const double rk = kernel_support_radius(fam.kernel(j));
        CHECK(kernel_support_radius(dj.kernel) == doctest::Approx(std::ldexp(rk, -j)).epsilon(1e-12));
        CHECK(kernel_support_radius(dj.kernel) <= 1.0 + 1e-12);
        // Same window, pulled back to the working grid.
        const std::int64_t sh = g.origin() - dj.op.grid.origin();
        LinearOp tj = convolution_op(fam.kernel(j), shift_mask(dj.op.window, sh, 0));
        const double a = l2_power_norm(tj, 300).value;
        const double b = l2_power_norm(dj.op, 300).value;
        CHECK(std::abs(a - b) <= 0.01 * std::max(a, b));
    }
}

TEST_CASE("radon family") {
    const std::int64_t n = 1 << 12;
    GridFunction sigma = odd_step_sigma(n);
    double mean = 0.0;
    for (auto v : sigma.values()) mean += v.real();
    CHECK(std::abs(mean) < 1e-12);

    // Octave suprema of |sigma^| against the frequency, fit on log-log axes.
    GridSpec big(1, 16 * n, 16.0);
    std::vector<cplx> buf(big.cells());
    GridFunction s_big(big);
    for (std::size_t i = 0; i < sigma.cells(); ++i) {
        const auto x = sigma.position(i)[0];
        const auto c = static_cast<std::size_t>(std::llround((x + 16.0) / big.spacing()));
        buf[c] = sigma.at(i) * big.spacing();
    }
    fft::forward(buf, fft::Shape{1, big.n, 1});
    std::vector<double> lx, ly;
    for (int o = 3; o <= 9; ++o) {
        double sup = 0.0;
        for (std::int64_t k = 1; k < big.n / 2; ++k) {
            const double xi = frequency(big, k);
            if (xi >= std::ldexp(1.0, o) && xi < std::ldexp(1.0, o + 1))
                sup = std::max(sup, std::abs(buf[static_cast<std::size_t>(k)]));
        }
        lx.push_back(std::log(std::ldexp(1.0, o)));
        ly.push_back(std::log(sup));
    }
    CHECK(std::abs(-ls_slope(lx, ly) - 1.0) <= 0.15);

    GridSpec g(1, 1024, 8.0);
    std::map<int, double> zero, flip;
    for (int j = -2; j <= 1; ++j) zero[j] = 0.0, flip[j] = j % 2 == 0 ? -1.0 : 1.0;
    OperatorFamily z = radon_family(odd_step_sigma(128), g, -2, 1, zero);
    std::mt19937_64 rng(2);
    CHECK(sum_apply(z, random_compact(g, rng, 300, 700)).is_zero());
    OperatorFamily plain = radon_family(odd_step_sigma(128), g, -2, 1);
    OperatorFamily flipped = radon_family(odd_step_sigma(128), g, -2, 1, flip);
    AscentOptions asc(3, 15);
    CHECK(single_scale_norm(flipped, 1.5, 2.0, asc).value ==
          doctest::Approx(single_scale_norm(plain, 1.5, 2.0, asc).value).epsilon(1e-12));

    GridFunction bad_mean = hat_sigma(128);
    CHECK_THROWS_AS(radon_family(bad_mean, g, -2, 1), Error);
}

TEST_CASE("symbol zoo") {
    auto br = symbol_zoo("bochner_riesz", {{"lambda", 0.5}, {"t", 1.0}});
    CHECK(std::abs(br({0.0, 0.0}) - cplx(1.0)) < 1e-15);
    auto mab = symbol_zoo("m_ab", {{"a", 0.5}, {"b", 1.0}});
    for (double r : {0.0, 0.3, 0.7, 1.0, -1.0}) CHECK(mab({r, 0.0}) == cplx(0.0));
    CHECK_THROWS_AS(symbol_zoo("no_such_symbol", {}), Error);
    CHECK_THROWS_AS(symbol_zoo("circular", {}, 1), Error);

    // In d = 1 the band piece is flat up to |x| ~ 2^n and decays beyond, so
    // |K_n(x)| (1 + |x|)(1 + 2^{-n}|x|) is bounded uniformly in n.
    GridSpec g(1, 1 << 16, 2048.0);
    GridFunction delta(g);
    delta.at(static_cast<std::size_t>(g.origin())) = 1.0 / g.spacing();
    std::vector<double> consts;
    for (int n = 4; n <= 7; ++n) {
        GridFunction K = apply_symbol(symbol_zoo("stein_piece", {{"alpha", 1.0}, {"n", double(n)}}), delta);
        double c = 0.0;
        for (std::size_t i = 0; i < K.cells(); ++i) {
            const double x = std::abs(K.position(i)[0]);
            if (x > std::ldexp(1.0, n + 3)) continue;
            c = std::max(c, std::abs(K.at(i)) * (1.0 + x) * (1.0 + std::ldexp(x, -n)));
        }
        consts.push_back(c);
    }
    CHECK(*std::max_element(consts.begin(), consts.end()) <= 1.2 * *std::min_element(consts.begin(), consts.end()));
}

TEST_CASE("apply symbol") {
    GridSpec g(1, 512, 8.0);
    std::mt19937_64 rng(4);
    GridFunction f = random_compact(g, rng, 0, 512);
    CHECK(max_diff(apply_symbol(symbol_zoo("identity", {}), f), f) < 1e-13);

    const double shift = 5 * g.spacing();
    GridFunction tf = apply_symbol(symbol_zoo("translation", {{"h0", shift}}), f);
    // m = e^{i xi h} gives x -> f(x + h).
    for (std::int64_t i = 0; i < g.n; ++i)
        CHECK(std::abs(tf.at(static_cast<std::size_t>(i)) - f.at(static_cast<std::size_t>((i + 5) % g.n))) < 1e-12);

    auto P = symbol_zoo("indicator", {{"R", 20.0}});
    GridFunction once = apply_symbol(P, f);
    CHECK(max_diff(apply_symbol(P, once), once) < 1e-12);
}

TEST_CASE("maximal over dilations") {
    GridSpec g(1, 2048, 16.0);
    GridFunction sigma = odd_step_sigma(256);
    std::mt19937_64 rng(6);
    GridFunction f = random_compact(g, rng, 800, 1200);

    GridFunction m1 = maximal_over_dilations(sigma, DilationSet({1.5}), f);
    GridFunction c = convolve(f, resample_dilated(sigma, 1.5, g));
    for (std::size_t i = 0; i < g.cells(); ++i) CHECK(std::abs(m1.at(i).real() - c.magnitude(i)) < 1e-14);

    DilationSet small({1.0, 1.5}), large({0.5, 1.0, 1.5, 3.0});
    GridFunction ms = maximal_over_dilations(sigma, small, f), ml = maximal_over_dilations(sigma, large, f);
    int bad = 0;
    for (std::size_t i = 0; i < g.cells(); ++i) bad += ms.at(i).real() > ml.at(i).real() + 1e-14;
    CHECK(bad == 0);

    // Octave j of E against the unit-octave piece E_j on the dilated grid.
    DilationSet E({0.5, 0.75, 1.0, 1.25, 2.0, 3.0, 3.5});
    for (int j : {-1, 0, 1}) {
        std::vector<double> part;
        for (double t : E.t)
            if (t >= std::ldexp(1.0, j) && t < std::ldexp(1.0, j + 1)) part.push_back(t);
        GridFunction direct = maximal_over_dilations(sigma, DilationSet(part), f);
        std::vector<double> unit = E.piece(j);
        unit.erase(std::remove_if(unit.begin(), unit.end(), [](double t) { return t >= 2.0; }), unit.end());
        GridFunction dil = maximal_over_dilations(sigma, DilationSet(unit), f.dilated(-j));
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < g.cells(); ++i) {
            worst = std::max(worst, std::abs(direct.at(i).real() - dil.at(i).real()));
            scale = std::max(scale, direct.at(i).real());
        }
        CHECK(worst <= 1e-12 * std::max(1.0, scale));
    }
}
