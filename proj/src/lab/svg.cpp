#include <cmclab/lab/report.hpp>
#include <cmclab/lab/svg.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace cmclab::lab {

namespace {

std::string escape(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

std::string px(double v)
{
    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(2);
    o << v;
    return o.str();
}

constexpr std::array<const char*, 6> kColours{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

} // namespace

std::string render_svg(const Plot& plot)
{
    const double left = 70, right = 20, top = 40, bottom = 50;
    const double w = plot.width - left - right;
    const double h = plot.height - top - bottom;

    auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(ty(s.y[i]))) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 <= 0) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 <= 0) y0 -= 0.5, y1 += 0.5;
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * w; };
    auto sy = [&](double y) { return top + h - (ty(y) - y0) / (y1 - y0) * h; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << plot.width << "\" height=\""
      << plot.height << "\" viewBox=\"0 0 " << plot.width << ' ' << plot.height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << plot.width << "\" height=\"" << plot.height << "\" fill=\"white\"/>\n"
      << "<text x=\"" << px(left + w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"15\">" << escape(plot.title) << "</text>\n"
      << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\"" << px(w) << "\" height=\"" << px(h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

    const auto tick = [&](double v, bool log) { return format_number(log ? std::pow(10.0, v) : v); };
    o << "<g font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<text x=\"" << px(left) << "\" y=\"" << px(top + h + 16) << "\" text-anchor=\"start\">" << tick(x0, false)
      << "</text>\n"
      << "<text x=\"" << px(left + w) << "\" y=\"" << px(top + h + 16) << "\" text-anchor=\"end\">" << tick(x1, false)
      << "</text>\n"
      << "<text x=\"" << px(left - 6) << "\" y=\"" << px(top + h) << "\" text-anchor=\"end\">" << tick(y0, plot.log_y)
      << "</text>\n"
      << "<text x=\"" << px(left - 6) << "\" y=\"" << px(top + 10) << "\" text-anchor=\"end\">" << tick(y1, plot.log_y)
      << "</text>\n"
      << "<text x=\"" << px(left + w / 2) << "\" y=\"" << px(top + h + 36) << "\" text-anchor=\"middle\">"
      << escape(plot.x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << px(top + h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << px(top + h / 2) << ")\">" << escape(plot.y_label) << "</text>\n"
      << "</g>\n";

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* colour = kColours[k % kColours.size()];
        std::string points;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(ty(s.y[i]))) continue;
            points += (points.empty() ? "" : " ") + px(sx(s.x[i])) + "," + px(sy(s.y[i]));
            o << "<circle cx=\"" << px(sx(s.x[i])) << "\" cy=\"" << px(sy(s.y[i])) << "\" r=\"3\" fill=\"" << colour
              << "\"/>\n";
        }
        if (s.polyline && !points.empty()) {
            o << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"" << colour << "\"/>\n";
        }
        o << "<text x=\"" << px(left + w - 8) << "\" y=\"" << px(top + 16 + 14 * static_cast<double>(k))
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << colour << "\">"
          << escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

} // namespace cmclab::lab
