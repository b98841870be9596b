#include "sdlab/reference.hpp"

#include <algorithm>
#include <cmath>

namespace sdlab::reference {

std::vector<double> lattice_maximal(const GridFunction& f, double p, const std::vector<DyadicLattice>& lattices,
                                    int kc, int kf) {
    const GridSpec& g = f.grid();
    const double L = g.half_width;
    std::vector<double> out(f.cells(), 0.0);
    for (const auto& lat : lattices) {
        for (int k = kc; k <= kf; ++k) {
            std::array<std::int64_t, 2> zlo{0, 0}, zhi{0, 0};
            for (int a = 0; a < g.dim; ++a) {
                double r = lat.offset_thirds(k, a) / 3.0;
                zlo[a] = static_cast<std::int64_t>(std::floor(std::ldexp(-L, k) - r)) - 1;
                zhi[a] = static_cast<std::int64_t>(std::ceil(std::ldexp(L, k) - r)) + 1;
            }
            for (std::int64_t z1 = zlo[1]; z1 <= zhi[1]; ++z1) {
                for (std::int64_t z0 = zlo[0]; z0 <= zhi[0]; ++z0) {
                    DyadicCube q{lat, k, {z0, z1}};
                    Cube geo = q.geometry();
                    double sum = 0.0;
                    double count = 0.0;
                    std::vector<std::size_t> members;
                    // Count virtual cells by centers: centers sit at -L + (i + 1/2) h for all integers i.
                    const double h = g.spacing();
                    std::array<std::int64_t, 2> lo{0, 0}, hi{0, 1};
                    for (int a = 0; a < g.dim; ++a) {
                        lo[a] = static_cast<std::int64_t>(std::floor((geo.lo[a] + L) / h)) - 2;
                        hi[a] = static_cast<std::int64_t>(std::ceil((geo.hi(a) + L) / h)) + 2;
                    }
                    for (std::int64_t i1 = lo[1]; i1 < hi[1]; ++i1) {
                        for (std::int64_t i0 = lo[0]; i0 < hi[0]; ++i0) {
                            double c0 = -L + (static_cast<double>(i0) + 0.5) * h;
                            double c1 = -L + (static_cast<double>(i1) + 0.5) * h;
                            if (!geo.contains_point({c0, g.dim == 2 ? c1 : geo.lo[1]})) continue;
                            count += 1.0;
                            bool inside = i0 >= 0 && i0 < g.n && (g.dim == 1 || (i1 >= 0 && i1 < g.n));
                            if (!inside) continue;
                            std::size_t c = f.cell_index(i0, g.dim == 2 ? i1 : 0);
                            sum += std::pow(f.magnitude(c), p);
                            members.push_back(c);
                        }
                    }
                    if (members.empty() || count == 0.0) continue;
                    double avg = std::pow(sum / count, 1.0 / p);
                    for (auto c : members) out[c] = std::max(out[c], avg);
                }
            }
        }
    }
    return out;
}

GridFunction convolve_direct(const GridFunction& f, const GridFunction& k) {
    const GridSpec& g = f.grid();
    const int in = f.value_dim();
    const int od = convolution_out_dim(f, k);
    const bool componentwise = k.value_dim() == 1;
    GridFunction out(g, od);
    const auto n = g.n;
    const auto o = g.origin();
    const std::int64_t rows = g.dim == 2 ? n : 1;
    const double mu = g.cell_measure();
    for (std::int64_t i1 = 0; i1 < rows; ++i1) {
        for (std::int64_t i0 = 0; i0 < n; ++i0) {
            for (std::int64_t j1 = 0; j1 < rows; ++j1) {
                for (std::int64_t j0 = 0; j0 < n; ++j0) {
                    std::int64_t s0 = i0 - j0 + o;
                    std::int64_t s1 = g.dim == 2 ? i1 - j1 + o : 0;
                    if (s0 < 0 || s0 >= n || s1 < 0 || s1 >= rows) continue;
                    std::size_t kc = k.cell_index(s0, s1);
                    std::size_t fc = f.cell_index(j0, j1);
                    std::size_t oc = f.cell_index(i0, i1);
                    for (int m = 0; m < od; ++m) {
                        if (componentwise) {
                            out.at(oc, m) += f.at(fc, m) * k.at(kc, 0) * mu;
                        } else {
                            for (int ic = 0; ic < in; ++ic) out.at(oc, m) += f.at(fc, ic) * k.at(kc, m * in + ic) * mu;
                        }
                    }
                }
            }
        }
    }
    return out;
}

namespace {

double vec_norm(const std::vector<cplx>& a) {
    double s = 0.0;
    for (auto z : a) s += std::norm(z);
    return std::sqrt(s);
}

double vec_dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

double vr_norm_exhaustive(const std::vector<std::vector<cplx>>& seq, double r) {
    const std::size_t N = seq.size();
    if (N == 0) return 0.0;
    if (N > 20) throw Error("vr_norm_exhaustive: sequence too long");
    double best = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << N); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < N; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        double inc = 0.0;
        for (std::size_t v = 0; v + 1 < idx.size(); ++v) {
            double d = vec_dist(seq[idx[v + 1]], seq[idx[v]]);
            inc = r == kInf ? std::max(inc, d) : inc + std::pow(d, r);
        }
        double val = vec_norm(seq[idx[0]]) + (r == kInf ? inc : std::pow(inc, 1.0 / r));
        best = std::max(best, val);
    }
    return best;
}

std::vector<double> pointwise_variation(const std::vector<GridFunction>& seq, double r) {
    if (seq.empty()) return {};
    const std::size_t cells = seq.front().cells();
    const int m = seq.front().value_dim();
    std::vector<double> out(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        std::vector<std::vector<cplx>> s(seq.size(), std::vector<cplx>(static_cast<std::size_t>(m)));
        for (std::size_t j = 0; j < seq.size(); ++j)
            for (int k = 0; k < m; ++k) s[j][static_cast<std::size_t>(k)] = seq[j].at(c, k);
        out[c] = vr_norm_exhaustive(s, r);
    }
    return out;
}

}  // namespace sdlab::reference
