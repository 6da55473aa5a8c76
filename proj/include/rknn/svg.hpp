#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace rknn {

/// Static scatter plot of a 2-D point set colored by label; point ids
/// listed in `highlight` (isolated vertices) are drawn as crosses.
void write_scatter_svg(const Eigen::MatrixXd& points, std::span<const int> labels,
                       std::span<const int> highlight, const std::string& title,
                       const std::string& path);

struct ChartSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Simple line chart with markers, one polyline per series.
void write_line_chart_svg(const std::vector<ChartSeries>& series, const std::string& x_label,
                          const std::string& y_label, const std::string& title,
                          const std::string& path);

}  // namespace rknn
