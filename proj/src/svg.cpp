#include "crawlsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace crawlsim {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

struct Axis {
    double lo, hi;
    std::vector<double> ticks;
};

Axis make_axis(double lo, double hi) {
    if (hi - lo <= 0.0) {
        const double pad = std::max(0.05 * std::abs(lo), 0.05);
        lo -= pad;
        hi += pad;
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    Axis axis{lo, hi, {}};
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * step; t += step)
        axis.ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return axis;
}

}  // namespace

std::string line_chart_svg(const std::vector<Series>& series, const PlotStyle& style) {
    if (series.empty()) throw std::invalid_argument("line_chart_svg: no series");
    for (const auto& s : series)
        if (s.x.empty() || s.x.size() != s.y.size())
            throw std::invalid_argument("line_chart_svg: empty or inconsistent series");

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            xmin = std::min(xmin, s.x[j]);
            xmax = std::max(xmax, s.x[j]);
            ymin = std::min(ymin, s.y[j]);
            ymax = std::max(ymax, s.y[j]);
        }
    if (!std::isfinite(xmin) || !std::isfinite(ymin) || !std::isfinite(xmax) ||
        !std::isfinite(ymax))
        throw std::invalid_argument("line_chart_svg: non-finite data");

    const Axis xaxis = make_axis(xmin, xmax);
    const Axis yaxis = make_axis(ymin, ymax);

    const double left = 64, right = 16, top = 36, bottom = 44;
    const double pw = style.width - left - right;
    const double ph = style.height - top - bottom;
    auto px = [&](double x) { return left + pw * (x - xaxis.lo) / (xaxis.hi - xaxis.lo); };
    auto py = [&](double y) { return top + ph * (yaxis.hi - y) / (yaxis.hi - yaxis.lo); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(style.width) +
           "\" height=\"" + std::to_string(style.height) + "\" viewBox=\"0 0 " +
           std::to_string(style.width) + " " + std::to_string(style.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!style.title.empty())
        out += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"15\">" +
               escape(style.title) + "</text>\n";

    // grid and ticks
    for (double t : xaxis.ticks) {
        out += "<line x1=\"" + fmt(px(t)) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(px(t)) +
               "\" y2=\"" + fmt(top + ph) + "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + fmt(px(t)) + "\" y=\"" + fmt(top + ph + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(t) +
               "</text>\n";
    }
    for (double t : yaxis.ticks) {
        out += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(py(t)) + "\" x2=\"" +
               fmt(left + pw) + "\" y2=\"" + fmt(py(t)) +
               "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(py(t) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(t) +
               "</text>\n";
    }
    out += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) +
           "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"#404040\"/>\n";
    out += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(style.height - 8.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape(style.x_label) + "</text>\n";
    if (!style.y_label.empty())
        out += "<text x=\"14\" y=\"" + fmt(top + ph / 2) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
               "transform=\"rotate(-90 14 " +
               fmt(top + ph / 2) + ")\">" + escape(style.y_label) + "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& sr = series[s];
        const std::size_t stride =
            std::max<std::size_t>(1, (sr.x.size() + style.max_points - 1) / style.max_points);
        std::string path;
        bool first = true;
        for (std::size_t j = 0; j < sr.x.size(); j += stride) {
            path += first ? "M" : " L";
            path += fmt(px(sr.x[j])) + " " + fmt(py(sr.y[j]));
            first = false;
        }
        if ((sr.x.size() - 1) % stride != 0)
            path += " L" + fmt(px(sr.x.back())) + " " + fmt(py(sr.y.back()));
        out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" +
               kPalette[s % std::size(kPalette)] + "\" stroke-width=\"1.5\"/>\n";
    }

    // legend
    double ly = top + 14;
    for (std::size_t s = 0; s < series.size(); ++s) {
        if (series[s].label.empty()) continue;
        const double lx = left + pw - 150;
        out += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" + fmt(lx + 22) +
               "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + kPalette[s % std::size(kPalette)] +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + fmt(lx + 28) + "\" y=\"" + fmt(ly) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(series[s].label) +
               "</text>\n";
        ly += 16;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace crawlsim
