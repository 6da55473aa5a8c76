#include "rknn/svg.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace rknn {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78"};
constexpr int kPaletteSize = 12;

struct Mapper {
    double x0, x1, y0, y1;  // data range
    double width, height, margin;

    double px(double x) const {
        return margin + (x - x0) / (x1 - x0 > 0 ? x1 - x0 : 1.0) * (width - 2 * margin);
    }
    double py(double y) const {
        return height - margin - (y - y0) / (y1 - y0 > 0 ? y1 - y0 : 1.0) * (height - 2 * margin);
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

void write_scatter_svg(const Eigen::MatrixXd& points, std::span<const int> labels,
                       std::span<const int> highlight, const std::string& title,
                       const std::string& path) {
    if (points.cols() != 2) throw std::invalid_argument("write_scatter_svg: need 2-D points");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);

    Mapper map{points.col(0).minCoeff(), points.col(0).maxCoeff(),
               points.col(1).minCoeff(), points.col(1).maxCoeff(), 720.0, 720.0, 40.0};
    std::unordered_set<int> marked(highlight.begin(), highlight.end());

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << map.width << "\" height=\""
        << map.height << "\" viewBox=\"0 0 " << map.width << ' ' << map.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << map.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"16\">" << title << "</text>\n";
    for (int i = 0; i < points.rows(); ++i) {
        const int label = i < static_cast<int>(labels.size()) ? labels[static_cast<std::size_t>(i)] : 0;
        const char* color = kPalette[((label % kPaletteSize) + kPaletteSize) % kPaletteSize];
        const double cx = map.px(points(i, 0)), cy = map.py(points(i, 1));
        if (marked.count(i)) {
            out << "<path d=\"M" << fmt(cx - 3) << ' ' << fmt(cy - 3) << " L" << fmt(cx + 3) << ' '
                << fmt(cy + 3) << " M" << fmt(cx - 3) << ' ' << fmt(cy + 3) << " L" << fmt(cx + 3)
                << ' ' << fmt(cy - 3) << "\" stroke=\"" << color << "\" stroke-width=\"1.2\"/>\n";
        } else {
            out << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"2.2\" fill=\"" << color
                << "\" fill-opacity=\"0.8\"/>\n";
        }
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("I/O error while writing " + path);
}

void write_line_chart_svg(const std::vector<ChartSeries>& series, const std::string& x_label,
                          const std::string& y_label, const std::string& title,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                x0 = x1 = s.x[i];
                y0 = y1 = s.y[i];
                first = false;
            }
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (y0 == y1) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    Mapper map{x0, x1, y0, y1, 720.0, 480.0, 60.0};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << map.width << "\" height=\""
        << map.height << "\" viewBox=\"0 0 " << map.width << ' ' << map.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << map.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"16\">" << title << "</text>\n";

    // Axes.
    out << "<line x1=\"" << map.margin << "\" y1=\"" << map.height - map.margin << "\" x2=\""
        << map.width - map.margin << "\" y2=\"" << map.height - map.margin
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << map.margin << "\" y1=\"" << map.margin << "\" x2=\"" << map.margin
        << "\" y2=\"" << map.height - map.margin << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << map.width / 2 << "\" y=\"" << map.height - 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << map.height / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
        << map.height / 2 << ")\">" << y_label << "</text>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double xv = x0 + (x1 - x0) * tick / 4.0, yv = y0 + (y1 - y0) * tick / 4.0;
        out << "<text x=\"" << fmt(map.px(xv)) << "\" y=\"" << map.height - map.margin + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(xv)
            << "</text>\n";
        out << "<text x=\"" << map.margin - 8 << "\" y=\"" << fmt(map.py(yv) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(yv)
            << "</text>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            out << fmt(map.px(series[s].x[i])) << ',' << fmt(map.py(series[s].y[i])) << ' ';
        out << "\"/>\n";
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            out << "<circle cx=\"" << fmt(map.px(series[s].x[i])) << "\" cy=\""
                << fmt(map.py(series[s].y[i])) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << map.width - map.margin + 4 << "\" y=\"" << map.margin + 16.0 * s
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">" << series[s].name
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("I/O error while writing " + path);
}

}  // namespace rknn
