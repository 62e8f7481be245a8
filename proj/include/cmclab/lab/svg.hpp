#pragma once

#include <string>
#include <vector>

namespace cmclab::lab {

struct PlotSeries
{
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool polyline = true;
};

struct Plot
{
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    bool log_y = false;
    int width = 640;
    int height = 420;
};

/// Standalone SVG 1.1 document: frame, min/max tick labels, one colour per
/// series, points and an optional polyline.
std::string render_svg(const Plot& plot);

} // namespace cmclab::lab
