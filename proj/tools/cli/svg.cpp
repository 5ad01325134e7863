#include "cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cli/output.hpp"

namespace tavis::cli::svg {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!(lo <= hi)) lo = 0, hi = 1;
        if (hi == lo) lo -= 0.5, hi += 0.5;
    }
};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) { return format_number(std::round(v * 100.0) / 100.0); }

struct Frame {
    Range xr, yr;
    double px(double x) const { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kHeight - kTop - kBottom); }
};

void header(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
       << "</text>\n";
}

void axes(std::ostringstream& os, const Frame& f, const std::string& xl, const std::string& yl) {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    os << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = f.xr.lo + (f.xr.hi - f.xr.lo) * k / 5.0;
        const double yv = f.yr.lo + (f.yr.hi - f.yr.lo) * k / 5.0;
        os << "<line x1=\"" << num(f.px(xv)) << "\" y1=\"" << y0 << "\" x2=\"" << num(f.px(xv)) << "\" y2=\"" << y0 + 5
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">"
           << format_number(std::round(xv * 1000.0) / 1000.0) << "</text>\n";
        os << "<line x1=\"" << x0 - 5 << "\" y1=\"" << num(f.py(yv)) << "\" x2=\"" << x0 << "\" y2=\"" << num(f.py(yv))
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << x0 - 8 << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">"
           << format_number(std::round(yv * 1000.0) / 1000.0) << "</text>\n";
    }
    os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">" << escape(xl)
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << (y0 + y1) / 2 << ")\">" << escape(yl) << "</text>\n";
}

// Viridis-like ramp sampled at five stops.
std::string color_ramp(double u) {
    static const double stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    u = std::clamp(u, 0.0, 1.0) * 4.0;
    const int k = std::min(static_cast<int>(u), 3);
    const double w = u - k;
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[k][c] * (1 - w) + stops[k + 1][c] * w));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

}  // namespace

std::string render(const LinePlot& plot) {
    Frame f;
    for (const auto& s : plot.series) {
        for (double v : s.x) f.xr.include(v);
        for (double v : s.y) f.yr.include(v);
    }
    f.xr.finish();
    f.yr.finish();

    std::ostringstream os;
    header(os, plot.title);
    axes(os, f, plot.x_label, plot.y_label);
    for (double xv : plot.vertical_lines) {
        if (xv < f.xr.lo || xv > f.xr.hi) continue;
        os << "<line x1=\"" << num(f.px(xv)) << "\" y1=\"" << kTop << "\" x2=\"" << num(f.px(xv)) << "\" y2=\""
           << kHeight - kBottom << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    }
    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        if (s.points) {
            for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                os << "<circle cx=\"" << num(f.px(s.x[i])) << "\" cy=\"" << num(f.py(s.y[i]))
                   << "\" r=\"2\" fill=\"" << color << "\"/>\n";
            }
        } else {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.3\" points=\"";
            for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                os << num(f.px(s.x[i])) << ',' << num(f.py(s.y[i])) << ' ';
            }
            os << "\"/>\n";
        }
        os << "<text x=\"" << kWidth - kRight - 8 << "\" y=\"" << kTop + 16 + 15 * k
           << "\" text-anchor=\"end\" fill=\"" << color << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string render(const Heatmap& map) {
    Frame f;
    for (double v : map.x) f.xr.include(v);
    for (double v : map.y) f.yr.include(v);
    f.xr.finish();
    f.yr.finish();
    double vmax = 0.0;
    for (double v : map.values)
        if (std::isfinite(v)) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;

    std::ostringstream os;
    header(os, map.title);
    const std::size_t nx = map.x.size(), ny = map.y.size();
    const double cw = (kWidth - kLeft - kRight) / static_cast<double>(std::max<std::size_t>(nx, 1));
    const double ch = (kHeight - kTop - kBottom) / static_cast<double>(std::max<std::size_t>(ny, 1));
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double v = map.values[j * nx + i];
            if (!(v > 1e-3 * vmax)) continue;  // background stays white
            os << "<rect x=\"" << num(kLeft + i * cw) << "\" y=\"" << num(kHeight - kBottom - (j + 1) * ch)
               << "\" width=\"" << num(cw + 0.3) << "\" height=\"" << num(ch + 0.3) << "\" fill=\""
               << color_ramp(v / vmax) << "\"/>\n";
        }
    }
    axes(os, f, map.x_label, map.y_label);
    for (const auto& [mx, my] : map.markers) {
        const double cx = f.px(mx), cy = f.py(my);
        os << "<polygon points=\"" << num(cx) << ',' << num(cy - 6) << ' ' << num(cx + 6) << ',' << num(cy) << ' '
           << num(cx) << ',' << num(cy + 6) << ' ' << num(cx - 6) << ',' << num(cy)
           << "\" fill=\"white\" stroke=\"black\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace tavis::cli::svg
