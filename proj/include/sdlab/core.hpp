#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace sdlab {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// All recoverable failures in the library are reported through this type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Lebesgue exponent p in (1, inf]; the dual exponent satisfies 1/p + 1/p' = 1.
class Exponent {
public:
    explicit Exponent(double p);
    static Exponent infinity() { return Exponent(kInf); }

    double value() const { return p_; }
    double dual() const;
    double reciprocal() const { return is_infinite() ? 0.0 : 1.0 / p_; }
    bool is_infinite() const { return p_ == kInf; }

private:
    double p_;
};

// Uniform grid on [-L, L)^d with n points per axis. Sample i sits at the left
// corner -L + i*h of the cell [x_i, x_i + h); cube membership is decided by
// the cell center x_i + h/2.
struct GridSpec {
    int dim = 1;
    std::int64_t n = 0;
    double half_width = 1.0;

    GridSpec() = default;
    GridSpec(int d, std::int64_t points, double L);

    double spacing() const { return 2.0 * half_width / static_cast<double>(n); }
    double cell_measure() const;
    std::size_t cells() const;
    double coord(std::int64_t i) const { return -half_width + static_cast<double>(i) * spacing(); }
    double center(std::int64_t i) const { return coord(i) + 0.5 * spacing(); }
    // Index of the sample at offset zero (x = 0).
    std::int64_t origin() const { return n / 2; }
    // log2 of the spacing; the spacing is always a power of two.
    int spacing_log2() const;

    GridSpec dilated(int j) const;
    bool operator==(const GridSpec& o) const {
        return dim == o.dim && n == o.n && half_width == o.half_width;
    }
};

bool is_power_of_two(std::int64_t n);
int ilog2_exact(double x);  // throws unless x is an exact power of two

}  // namespace sdlab
