#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "itc/experiments.hpp"

namespace itc {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 460.0;
constexpr double kLeft = 78.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 58.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22"};

struct PlotSpec {
    std::string quantity;
    std::string x_label;
    std::string y_label;
    std::string title;
    bool x_is_j = false;      // otherwise x is N
    bool series_by_nk = false;  // otherwise one series per k
};

PlotSpec spec_for(Experiment kind) {
    switch (kind) {
        case Experiment::kSpectrum: return {"E_row1", "N", "ground energy (row 1)", "Ground energy per sector", false, false};
        case Experiment::kDeltaE: return {"delta_e", "N", "energy shift (%)", "Row-2 energy shift", false, false};
        case Experiment::kConcProfile:
            return {"C_analytic", "j", "concurrence C(1, j)", "Concurrence with the first atom", true, true};
        case Experiment::kConcFirstLast:
            return {"C_analytic", "N", "concurrence C(1, N)", "First-last concurrence", false, false};
    }
    throw std::invalid_argument("unknown plot kind");
}

std::string fmt(double v, int decimals = 2) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s == "-0.00" || s == "-0") s = s.substr(1);
    return s;
}

std::string tick_label(double v, double step) {
    char buf[48];
    if (step >= 1.0 && std::abs(v - std::round(v)) < 1e-9) {
        std::snprintf(buf, sizeof buf, "%.0f", v);
    } else {
        const int digits = std::clamp(static_cast<int>(std::ceil(-std::log10(step))), 0, 10);
        std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    }
    std::string s = buf;
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s = s.substr(1);
    return s;
}

double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string emit_plot(std::string_view csv, Experiment kind) {
    const PlotSpec spec = spec_for(kind);
    std::istringstream in{std::string(csv)};
    std::string line;
    bool header = false;
    // series key -> points, ordered
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<double, double>>> series;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line != "n_atoms,k,i,j,quantity,value,method") {
                throw std::invalid_argument("CSV header does not match the result schema");
            }
            header = true;
            continue;
        }
        const auto f = split(line);
        if (f.size() != 7) throw std::invalid_argument("CSV row has " + std::to_string(f.size()) + " fields");
        if (f[4] != spec.quantity || f[5].empty()) continue;
        const std::size_t n = std::stoul(f[0]);
        const std::size_t k = std::stoul(f[1]);
        if (spec.x_is_j && f[3].empty()) throw std::invalid_argument("concurrence profile row without j");
        const double x = spec.x_is_j ? std::stod(f[3]) : static_cast<double>(n);
        const auto key = spec.series_by_nk ? std::make_pair(n, k) : std::make_pair(std::size_t{0}, k);
        series[key].emplace_back(x, std::stod(f[5]));
    }
    if (!header) throw std::invalid_argument("empty CSV: nothing to plot");
    if (series.empty()) throw std::invalid_argument("empty plot: no '" + spec.quantity + "' values in CSV");

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& [key, pts] : series) {
        std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [x, y] : pts) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax == xmin) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if (ymax == ymin) {
        const double pad = ymin == 0.0 ? 1.0 : 0.1 * std::abs(ymin);
        ymin -= pad;
        ymax += pad;
    }
    const double ystep = nice_step(ymax - ymin);
    ymin = std::floor(ymin / ystep) * ystep;
    ymax = std::ceil(ymax / ystep) * ystep;
    const double xstep = std::max(1.0, std::round(nice_step(xmax - xmin)));

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth, 0) << "\" height=\"" << fmt(kHeight, 0)
        << "\" viewBox=\"0 0 " << fmt(kWidth, 0) << ' ' << fmt(kHeight, 0) << "\" font-family=\"sans-serif\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << spec.title
        << "</text>\n";
    svg << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double y = ymin; y <= ymax + 0.5 * ystep; y += ystep) {
        const double py = sy(y);
        svg << "<line x1=\"" << fmt(kLeft - 4) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(kLeft) << "\" y2=\""
            << fmt(py) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(kLeft - 7) << "\" y=\"" << fmt(py + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
            << tick_label(y, ystep) << "</text>\n";
    }
    for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9; x += xstep) {
        const double px = sx(x);
        svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(kTop + ph) << "\" x2=\"" << fmt(px) << "\" y2=\""
            << fmt(kTop + ph + 4) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(kTop + ph + 18) << "\" text-anchor=\"middle\" font-size=\"11\">"
            << tick_label(x, xstep) << "</text>\n";
    }
    svg << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 14)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << spec.x_label << "</text>\n";
    svg << "<text transform=\"translate(18 " << fmt(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\" "
        << "font-size=\"13\">" << spec.y_label << "</text>\n";

    std::size_t idx = 0;
    for (const auto& [key, pts] : series) {
        const char* color = kPalette[idx % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t p = 0; p < pts.size(); ++p) {
            svg << (p ? " " : "") << fmt(sx(pts[p].first)) << ',' << fmt(sy(pts[p].second));
        }
        svg << "\"/>\n";
        for (const auto& [x, y] : pts) {
            svg << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y)) << "\" r=\"2.2\" fill=\"" << color
                << "\"/>\n";
        }
        const std::string label = spec.series_by_nk
                                      ? "N=" + std::to_string(key.first) + ", k=" + std::to_string(key.second)
                                      : "k=" + std::to_string(key.second);
        const double ly = kTop + 8 + 16.0 * static_cast<double>(idx);
        if (ly < kHeight - 10) {
            const double lx = kLeft + pw + 14;
            svg << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 18) << "\" y2=\""
                << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
            svg << "<text x=\"" << fmt(lx + 24) << "\" y=\"" << fmt(ly + 4) << "\" font-size=\"11\">" << label
                << "</text>\n";
        }
        ++idx;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace itc
