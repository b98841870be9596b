#include "sdlab/core.hpp"

#include <cmath>

namespace sdlab {

Exponent::Exponent(double p) : p_(p) {
    if (!(p > 1.0)) throw Error("exponent must exceed 1, got " + std::to_string(p));
}

double Exponent::dual() const {
    if (is_infinite()) return 1.0;
    return p_ / (p_ - 1.0);
}

bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

int ilog2_exact(double x) {
    int e = 0;
    double m = std::frexp(x, &e);
    if (!(x > 0.0) || m != 0.5) throw Error("value is not a power of two: " + std::to_string(x));
    return e - 1;
}

GridSpec::GridSpec(int d, std::int64_t points, double L) : dim(d), n(points), half_width(L) {
    if (d != 1 && d != 2) throw Error("grid dimension must be 1 or 2");
    if (!is_power_of_two(points) || points < 2) throw Error("samples per axis must be a power of two");
    ilog2_exact(L);  // dyadic cubes must align with cells
}

double GridSpec::cell_measure() const {
    double h = spacing();
    return dim == 1 ? h : h * h;
}

std::size_t GridSpec::cells() const {
    auto m = static_cast<std::size_t>(n);
    return dim == 1 ? m : m * m;
}

int GridSpec::spacing_log2() const { return ilog2_exact(spacing()); }

GridSpec GridSpec::dilated(int j) const { return GridSpec(dim, n, std::ldexp(half_width, j)); }

}  // namespace sdlab
