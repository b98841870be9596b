#include "sdlab/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace sdlab::io {

static_assert(std::endian::native == std::endian::little, "container format assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'S', 'D', 'L', 'G'};

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error("grid container truncated");
    return v;
}

}  // namespace

void write_binary(std::ostream& os, const GridFunction& f) {
    os.write(kMagic, 4);
    put<std::int32_t>(os, f.grid().dim);
    put<std::int64_t>(os, f.grid().n);
    put<double>(os, f.grid().half_width);
    put<std::int32_t>(os, f.value_dim());
    for (auto z : f.values()) {
        put<double>(os, z.real());
        put<double>(os, z.imag());
    }
}

GridFunction read_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) throw Error("not a grid container");
    auto dim = get<std::int32_t>(is);
    auto n = get<std::int64_t>(is);
    auto L = get<double>(is);
    auto M = get<std::int32_t>(is);
    GridFunction f(GridSpec(dim, n, L), M);
    for (auto& z : f.values()) {
        double re = get<double>(is);
        double im = get<double>(is);
        z = cplx(re, im);
    }
    return f;
}

void save(const std::string& path, const GridFunction& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_binary(os, f);
}

GridFunction load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path);
    return read_binary(is);
}

void write_csv(std::ostream& os, const GridFunction& f) {
    const int d = f.grid().dim;
    os << (d == 2 ? "i0,i1,x0,x1" : "i0,x0");
    for (int m = 0; m < f.value_dim(); ++m) os << ",re_" << m << ",im_" << m;
    os << "\n" << std::setprecision(17);
    const auto n = static_cast<std::size_t>(f.grid().n);
    for (std::size_t c = 0; c < f.cells(); ++c) {
        auto x = f.position(c);
        if (d == 2)
            os << c % n << "," << c / n << "," << x[0] << "," << x[1];
        else
            os << c << "," << x[0];
        for (int m = 0; m < f.value_dim(); ++m) os << "," << f.at(c, m).real() << "," << f.at(c, m).imag();
        os << "\n";
    }
}

}  // namespace sdlab::io
