#include "sdlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace sdlab::svg {

namespace {

constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); }
    double py(double y) const { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); }
};

void header(std::ostream& os, const Axes& ax, const Frame& f, bool logy) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(ax.title)
       << "</text>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kW - kLeft - kRight << "\" height=\""
       << kH - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        os << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << kH - kBottom + 16
           << "\" text-anchor=\"middle\" font-size=\"11\">" << label_num(xv) << "</text>\n";
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(f.py(yv) + 4)
           << "\" text-anchor=\"end\" font-size=\"11\">" << label_num(logy ? std::pow(10.0, yv) : yv)
           << "</text>\n";
    }
    os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\" font-size=\"12\">"
       << escape(ax.xlabel) << "</text>\n";
    os << "<text x=\"16\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
       << kH / 2 << ")\">" << escape(ax.ylabel) << "</text>\n";
}

void widen(double& lo, double& hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
}

}  // namespace

void line_plot(std::ostream& os, const Axes& ax, const std::vector<Series>& series) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto yval = [&](double y) { return ax.logy ? std::log10(std::max(y, 1e-300)) : y; };
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (ax.logy && s.y[i] <= 0.0)) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, yval(s.y[i]));
            y1 = std::max(y1, yval(s.y[i]));
        }
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    widen(x0, x1);
    widen(y0, y1);
    Frame f{x0, x1, y0, y1};
    header(os, ax, f, ax.logy);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* col = kPalette[k % 7];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (ax.logy && s.y[i] <= 0.0)) continue;
            os << num(f.px(s.x[i])) << "," << num(f.py(yval(s.y[i]))) << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << kW - kRight - 8 << "\" y=\"" << kTop + 16 + 14 * static_cast<double>(k)
           << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << col << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
}

void scatter_plot(std::ostream& os, const Axes& ax, const std::vector<Marker>& pts, double xmin, double xmax,
                  double ymin, double ymax) {
    Frame f{xmin, xmax, ymin, ymax};
    header(os, ax, f, false);
    for (const auto& p : pts)
        os << "<circle cx=\"" << num(f.px(p.x)) << "\" cy=\"" << num(f.py(p.y)) << "\" r=\"6\" fill=\"" << p.color
           << "\"/>\n";
    os << "</svg>\n";
}

}  // namespace sdlab::svg
