#pragma once

// Static SVG rendering of line plots and heatmaps on a fixed 640x480 canvas.

#include <string>
#include <utility>
#include <vector>

namespace tavis::cli::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool points = false;  // scatter instead of polyline
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<double> vertical_lines;
};

struct Heatmap {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;       // column coordinates
    std::vector<double> y;       // row coordinates
    std::vector<double> values;  // row-major, values[j * x.size() + i]
    std::vector<std::pair<double, double>> markers;
};

std::string render(const LinePlot& plot);
std::string render(const Heatmap& map);

}  // namespace tavis::cli::svg
