#include "sdlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace sdlab {

double Cube::diam() const { return side * std::sqrt(static_cast<double>(dim)); }

double Cube::measure() const { return dim == 1 ? side : side * side; }

Cube Cube::tripled() const { return scaled_about_center(3.0); }

Cube Cube::scaled_about_center(double factor) const {
    Cube c = *this;
    c.side = side * factor;
    for (int a = 0; a < dim; ++a) c.lo[a] = center(a) - 0.5 * c.side;
    return c;
}

bool Cube::contains(const Cube& o, double tol) const {
    double eps = tol * std::max(side, o.side);
    for (int a = 0; a < dim; ++a) {
        if (o.lo[a] < lo[a] - eps || o.hi(a) > hi(a) + eps) return false;
    }
    return true;
}

bool Cube::intersects(const Cube& o, double tol) const {
    double eps = tol * std::max(side, o.side);
    for (int a = 0; a < dim; ++a) {
        if (o.hi(a) <= lo[a] + eps || hi(a) <= o.lo[a] + eps) return false;
    }
    return true;
}

bool Cube::contains_point(const std::array<double, 2>& x) const {
    for (int a = 0; a < dim; ++a) {
        if (x[a] < lo[a] || x[a] >= hi(a)) return false;
    }
    return true;
}

std::int64_t CellBox::count() const {
    std::int64_t c = std::max<std::int64_t>(0, extent(0));
    if (dim == 2) c *= std::max<std::int64_t>(0, extent(1));
    return c;
}

CellBox CellBox::clipped(const GridSpec& g) const {
    CellBox b = *this;
    for (int a = 0; a < dim; ++a) {
        b.lo[a] = std::clamp<std::int64_t>(lo[a], 0, g.n);
        b.hi[a] = std::clamp<std::int64_t>(hi[a], 0, g.n);
    }
    return b;
}

CellBox CellBox::expanded(std::int64_t cells) const {
    CellBox b = *this;
    for (int a = 0; a < dim; ++a) {
        b.lo[a] -= cells;
        b.hi[a] += cells;
    }
    return b;
}

bool CellBox::contains(const CellBox& o) const {
    for (int a = 0; a < dim; ++a) {
        if (o.lo[a] < lo[a] || o.hi[a] > hi[a]) return false;
    }
    return true;
}

CellBox cells_of(const Cube& q, const GridSpec& g) {
    CellBox b;
    b.dim = q.dim;
    const double h = g.spacing();
    const double L = g.half_width;
    for (int a = 0; a < q.dim; ++a) {
        b.lo[a] = static_cast<std::int64_t>(std::ceil((q.lo[a] + L) / h - 0.5));
        b.hi[a] = static_cast<std::int64_t>(std::ceil((q.hi(a) + L) / h - 0.5));
    }
    if (q.dim == 1) {
        b.lo[1] = 0;
        b.hi[1] = 1;
    }
    return b;
}

CellBox whole_grid(const GridSpec& g) {
    CellBox b;
    b.dim = g.dim;
    b.lo = {0, 0};
    b.hi = {g.n, g.dim == 2 ? g.n : 1};
    return b;
}

std::vector<DyadicLattice> DyadicLattice::shifted_family(int d) {
    std::vector<DyadicLattice> out;
    if (d == 1) {
        for (int t = 0; t < 3; ++t) out.push_back(DyadicLattice{1, {t, 0}});
    } else {
        for (int t1 = 0; t1 < 3; ++t1)
            for (int t0 = 0; t0 < 3; ++t0) out.push_back(DyadicLattice{2, {t0, t1}});
    }
    return out;
}

int DyadicLattice::offset_thirds(int k, int axis) const {
    int t = shift[axis];
    int r = (k % 2 == 0) ? t : -t;
    return ((r % 3) + 3) % 3;
}

double DyadicCube::side() const { return std::ldexp(1.0, -k); }

Cube DyadicCube::geometry() const {
    Cube c;
    c.dim = lattice.dim;
    c.side = side();
    for (int a = 0; a < lattice.dim; ++a) {
        double r = lattice.offset_thirds(k, a) / 3.0;
        c.lo[a] = std::ldexp(static_cast<double>(z[a]) + r, -k);
    }
    return c;
}

DyadicCube containing_cube(const DyadicLattice& lat, int k, const std::array<double, 2>& x) {
    DyadicCube q;
    q.lattice = lat;
    q.k = k;
    for (int a = 0; a < lat.dim; ++a) {
        double r = lat.offset_thirds(k, a) / 3.0;
        q.z[a] = static_cast<std::int64_t>(std::floor(std::ldexp(x[a], k) - r));
    }
    return q;
}

DyadicCube DyadicCube::parent() const {
    Cube g = geometry();
    return containing_cube(lattice, k - 1, {g.center(0), g.center(1)});
}

std::vector<DyadicCube> DyadicCube::children() const {
    Cube g = geometry();
    std::vector<DyadicCube> out;
    const double q = 0.25 * g.side;
    if (lattice.dim == 1) {
        out.push_back(containing_cube(lattice, k + 1, {g.lo[0] + q, 0.0}));
        out.push_back(containing_cube(lattice, k + 1, {g.lo[0] + 3 * q, 0.0}));
    } else {
        for (int b = 0; b < 2; ++b)
            for (int a = 0; a < 2; ++a)
                out.push_back(containing_cube(lattice, k + 1, {g.lo[0] + (1 + 2 * a) * q, g.lo[1] + (1 + 2 * b) * q}));
    }
    return out;
}

bool DyadicCube::is_ancestor_of(const DyadicCube& o) const {
    if (!(lattice == o.lattice) || o.k < k) return false;
    DyadicCube c = o;
    while (c.k > k) c = c.parent();
    return c == *this;
}

bool DyadicCube::operator<(const DyadicCube& o) const {
    return std::tie(k, z[1], z[0]) < std::tie(o.k, o.z[1], o.z[0]);
}

std::string DyadicCube::describe() const {
    std::ostringstream os;
    os << "k=" << k << " z=(" << z[0];
    if (lattice.dim == 2) os << "," << z[1];
    os << ")";
    return os.str();
}

}  // namespace sdlab
