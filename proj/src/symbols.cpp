#include "sdlab/symbols.hpp"

#include <cmath>
#include <numbers>

#include "sdlab/fft.hpp"

namespace sdlab {

cplx MultiplierSymbol::operator()(const Xi& xi) const {
    if (is_matrix()) {
        auto M = matrix(xi);
        if (M.rows() != 1 || M.cols() != 1) throw Error("matrix symbol evaluated as scalar");
        return M(0, 0);
    }
    return scalar(xi);
}

Eigen::MatrixXcd MultiplierSymbol::eval_matrix(const Xi& xi) const {
    if (is_matrix()) return matrix(xi);
    Eigen::MatrixXcd M(1, 1);
    M(0, 0) = scalar(xi);
    return M;
}

double MultiplierSymbol::norm_at(const Xi& xi) const {
    if (!is_matrix()) return std::abs(scalar(xi));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix(xi));
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

double chi_infinity(double r) { return smooth_step(r - 1.0); }

double stein_beta(double s) { return smooth_step(2.0 * s - 1.0) - smooth_step(s - 1.0); }

namespace {

double radius(const Xi& xi, int dim) { return dim == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]); }

double param(const std::map<std::string, double>& p, const std::string& key, double dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}

double require(const std::map<std::string, double>& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw Error("symbol parameter missing: " + key);
    return it->second;
}

MultiplierSymbol radial(std::string name, int dim, std::function<cplx(double)> fn) {
    MultiplierSymbol m;
    m.name = std::move(name);
    m.dim = dim;
    m.scalar = [fn, dim](const Xi& xi) { return fn(radius(xi, dim)); };
    m.singular_distance = [](const Xi&) { return kInf; };
    return m;
}

}  // namespace

std::vector<std::string> symbol_names() {
    return {"identity", "constant", "translation", "indicator", "bochner_riesz", "m_ab",
            "power",    "wave",     "stein_piece", "circular",  "bump",          "linear"};
}

MultiplierSymbol symbol_zoo(const std::string& name, const std::map<std::string, double>& p, int dim) {
    if (dim != 1 && dim != 2) throw Error("symbols are defined for d = 1, 2");
    if (name == "identity") return radial(name, dim, [](double) { return cplx(1.0); });
    if (name == "constant") {
        cplx c(param(p, "c", 1.0), param(p, "c_im", 0.0));
        return radial(name, dim, [c](double) { return c; });
    }
    if (name == "translation") {
        double h0 = param(p, "h0", 0.0), h1 = param(p, "h1", 0.0);
        MultiplierSymbol m = radial(name, dim, nullptr);
        m.scalar = [h0, h1](const Xi& xi) { return std::exp(cplx(0.0, xi[0] * h0 + xi[1] * h1)); };
        return m;
    }
    if (name == "indicator") {
        double R = require(p, "R");
        MultiplierSymbol m = radial(name, dim, [R](double r) { return cplx(r <= R ? 1.0 : 0.0); });
        m.singular_set = "|xi| = R";
        m.singular_distance = [R, dim](const Xi& xi) { return std::abs(radius(xi, dim) - R); };
        return m;
    }
    if (name == "bochner_riesz") {
        double lam = require(p, "lambda"), t = param(p, "t", 1.0);
        if (lam < 0.0) throw Error("bochner_riesz: lambda must be >= 0");
        MultiplierSymbol m = radial(name, dim, [lam, t](double r) {
            double s = 1.0 - (r * r) / (t * t);
            return cplx(s > 0.0 ? std::pow(s, lam) : 0.0);
        });
        m.singular_set = "|xi| = t";
        m.singular_distance = [t, dim](const Xi& xi) { return std::abs(radius(xi, dim) - t); };
        return m;
    }
    if (name == "m_ab") {
        double a = require(p, "a"), b = require(p, "b");
        if (!(a > 0.0) || a == 1.0) throw Error("m_ab: need a > 0, a != 1");
        return radial(name, dim, [a, b](double r) {
            double c = chi_infinity(r);
            if (c == 0.0) return cplx(0.0);
            return c * std::pow(r, -b) * std::exp(cplx(0.0, std::pow(r, a)));
        });
    }
    if (name == "power") {
        double b = require(p, "b");
        return radial(name, dim, [b](double r) {
            double c = chi_infinity(r);
            return cplx(c == 0.0 ? 0.0 : c * std::pow(r, -b));
        });
    }
    if (name == "wave") {
        double beta = require(p, "beta");
        return radial(name, dim, [beta](double r) { return cplx(std::cos(r) / std::pow(1.0 + r * r, beta / 2.0)); });
    }
    if (name == "stein_piece") {
        double alpha = require(p, "alpha");
        int n = static_cast<int>(require(p, "n"));
        if (n < 0) throw Error("stein_piece: n must be >= 0");
        MultiplierSymbol m = radial(name, dim, [alpha, n](double r) {
            double s = 1.0 - r;
            if (s <= 0.0) return cplx(0.0);
            double b = stein_beta(std::ldexp(s, n));
            if (b == 0.0) return cplx(0.0);
            return cplx(std::pow(2.0, n * (alpha - 1.0)) * r * r * std::pow(1.0 - r * r, alpha - 1.0) * b);
        });
        return m;
    }
    if (name == "circular") {
        if (dim != 2) throw Error("circular means are defined for d = 2");
        // Arc-length measure on the unit circle minus a Gaussian of equal mass.
        return radial(name, dim, [](double r) { return cplx(std::cyl_bessel_j(0.0, r) - std::exp(-r * r)); });
    }
    if (name == "bump") {
        double c = param(p, "center", 1.0), w = param(p, "width", 0.5);
        return radial(name, dim, [c, w](double r) {
            double u = (r - c) / w;
            return cplx(std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0);
        });
    }
    if (name == "linear") {
        double c0 = param(p, "c0", 1.0), c1 = param(p, "c1", 0.0);
        MultiplierSymbol m = radial(name, dim, nullptr);
        m.scalar = [c0, c1](const Xi& xi) { return cplx(c0 * xi[0] + c1 * xi[1]); };
        return m;
    }
    throw Error("unknown symbol: " + name);
}

double frequency(const GridSpec& g, std::int64_t k) {
    return 2.0 * std::numbers::pi * static_cast<double>(fft::signed_bin(k, g.n)) / (2.0 * g.half_width);
}

double nyquist(const GridSpec& g) { return std::numbers::pi / g.spacing(); }

std::vector<cplx> symbol_samples(const MultiplierSymbol& m, const GridSpec& g) {
    std::vector<cplx> out(g.cells());
    const std::int64_t rows = g.dim == 2 ? g.n : 1;
    for (std::int64_t k1 = 0; k1 < rows; ++k1) {
        double x1 = g.dim == 2 ? frequency(g, k1) : 0.0;
        for (std::int64_t k0 = 0; k0 < g.n; ++k0)
            out[static_cast<std::size_t>(k0 + g.n * k1)] = m({frequency(g, k0), x1});
    }
    return out;
}

namespace {

fft::Shape shape_of(const GridSpec& g) { return fft::Shape{g.dim, g.n, g.dim == 2 ? g.n : 1}; }

std::vector<cplx> component_hat(const GridFunction& f, int c) {
    std::vector<cplx> v(f.cells());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.at(i, c);
    fft::forward(v, shape_of(f.grid()));
    return v;
}

}  // namespace

GridFunction apply_samples(const std::vector<cplx>& m, const GridFunction& f) {
    const GridSpec& g = f.grid();
    if (m.size() != g.cells()) throw Error("apply_samples: size mismatch");
    GridFunction out(g, f.value_dim());
    for (int c = 0; c < f.value_dim(); ++c) {
        auto v = component_hat(f, c);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= m[i];
        fft::inverse(v, shape_of(g));
        for (std::size_t i = 0; i < v.size(); ++i) out.at(i, c) = v[i];
    }
    return out;
}

GridFunction apply_symbol(const MultiplierSymbol& m, const GridFunction& f) {
    const GridSpec& g = f.grid();
    if (g.dim != m.dim) throw Error("apply_symbol: dimension mismatch");
    if (!m.is_matrix()) return apply_samples(symbol_samples(m, g), f);
    if (f.value_dim() != m.in_dim) throw Error("apply_symbol: value dimension mismatch");
    std::vector<std::vector<cplx>> hat;
    for (int c = 0; c < f.value_dim(); ++c) hat.push_back(component_hat(f, c));
    std::vector<std::vector<cplx>> res(static_cast<std::size_t>(m.out_dim), std::vector<cplx>(g.cells()));
    const std::int64_t rows = g.dim == 2 ? g.n : 1;
    Eigen::VectorXcd v(m.in_dim);
    for (std::int64_t k1 = 0; k1 < rows; ++k1) {
        for (std::int64_t k0 = 0; k0 < g.n; ++k0) {
            auto i = static_cast<std::size_t>(k0 + g.n * k1);
            for (int c = 0; c < m.in_dim; ++c) v(c) = hat[static_cast<std::size_t>(c)][i];
            Eigen::VectorXcd w = m.matrix({frequency(g, k0), g.dim == 2 ? frequency(g, k1) : 0.0}) * v;
            for (int c = 0; c < m.out_dim; ++c) res[static_cast<std::size_t>(c)][i] = w(c);
        }
    }
    GridFunction out(g, m.out_dim);
    for (int c = 0; c < m.out_dim; ++c) {
        auto& r = res[static_cast<std::size_t>(c)];
        fft::inverse(r, shape_of(g));
        for (std::size_t i = 0; i < r.size(); ++i) out.at(i, c) = r[i];
    }
    return out;
}

MultiplierSymbol product(const MultiplierSymbol& a, const MultiplierSymbol& b) {
    MultiplierSymbol m = a;
    m.name = a.name + "*" + b.name;
    m.scalar = [a, b](const Xi& xi) { return a(xi) * b(xi); };
    m.singular_distance = [a, b](const Xi& xi) { return std::min(a.singular_distance(xi), b.singular_distance(xi)); };
    return m;
}

MultiplierSymbol sum(const MultiplierSymbol& a, const MultiplierSymbol& b) {
    MultiplierSymbol m = product(a, b);
    m.name = a.name + "+" + b.name;
    m.scalar = [a, b](const Xi& xi) { return a(xi) + b(xi); };
    return m;
}

MultiplierSymbol dilate_symbol(const MultiplierSymbol& m, double t) {
    MultiplierSymbol d = m;
    d.scalar = [m, t](const Xi& xi) { return m({t * xi[0], t * xi[1]}); };
    d.singular_distance = [m, t](const Xi& xi) { return m.singular_distance({t * xi[0], t * xi[1]}) / t; };
    return d;
}

}  // namespace sdlab
