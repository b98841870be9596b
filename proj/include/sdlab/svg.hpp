#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdlab::svg {

struct Series {
    std::string label;
    std::vector<double> x, y;
};

struct Marker {
    double x = 0.0, y = 0.0;
    std::string color = "black";
};

struct Axes {
    std::string title, xlabel, ylabel;
    bool logy = false;
};

void line_plot(std::ostream& os, const Axes& ax, const std::vector<Series>& series);
// Fixed data window [xmin, xmax] x [ymin, ymax].
void scatter_plot(std::ostream& os, const Axes& ax, const std::vector<Marker>& pts, double xmin, double xmax,
                  double ymin, double ymax);

}  // namespace sdlab::svg
