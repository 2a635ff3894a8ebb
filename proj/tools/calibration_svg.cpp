#include "calibration_svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "songsieve/error.hpp"

namespace songsieve::cli {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 60;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 20;
constexpr int kMarginBottom = 50;

struct Mapper {
    double x_lo, x_hi;
    double x(double logit) const {
        const double t = (logit - x_lo) / (x_hi - x_lo);
        return kMarginLeft + t * (kWidth - kMarginLeft - kMarginRight);
    }
    double y(double p) const {
        return kMarginTop + (1.0 - p) * (kHeight - kMarginTop - kMarginBottom);
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

void write_calibration_svg(const std::string& path, const std::vector<CalibrationSample>& samples,
                           const LogisticModel& model, const BootstrapBand& band,
                           const std::vector<double>& p_targets) {
    if (band.logit_grid.empty()) throw error(errc::empty_input, "empty bootstrap band");
    Mapper map{band.logit_grid.front(), band.logit_grid.back()};
    if (map.x_hi <= map.x_lo) map.x_hi = map.x_lo + 1.0;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::io_failure, "cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // shaded band polygon: upper curve left-to-right, lower curve back
    out << "<path fill=\"#aac8e8\" fill-opacity=\"0.5\" stroke=\"none\" d=\"M";
    for (std::size_t i = 0; i < band.logit_grid.size(); ++i)
        out << fmt(map.x(band.logit_grid[i])) << "," << fmt(map.y(band.upper[i])) << " ";
    for (std::size_t i = band.logit_grid.size(); i-- > 0;)
        out << fmt(map.x(band.logit_grid[i])) << "," << fmt(map.y(band.lower[i])) << " ";
    out << "Z\"/>\n";

    // sample scatter at 0/1 with slight transparency
    for (const CalibrationSample& s : samples) {
        const double x = std::clamp(s.logit, map.x_lo, map.x_hi);
        out << "<circle cx=\"" << fmt(map.x(x)) << "\" cy=\"" << fmt(map.y(s.correct ? 1.0 : 0.0))
            << "\" r=\"2.5\" fill=\"black\" fill-opacity=\"0.25\"/>\n";
    }

    // fitted curve
    out << "<polyline fill=\"none\" stroke=\"#1469b5\" stroke-width=\"2\" points=\"";
    for (double logit : band.logit_grid)
        out << fmt(map.x(logit)) << "," << fmt(map.y(model.predict(logit))) << " ";
    out << "\"/>\n";

    // threshold crossings
    for (double p : p_targets) {
        if (model.slope <= 0.0) break;
        const auto [logit_star, confidence_star] = threshold_for_probability(model, p);
        if (logit_star < map.x_lo || logit_star > map.x_hi) continue;
        out << "<line x1=\"" << fmt(map.x(map.x_lo)) << "\" y1=\"" << fmt(map.y(p)) << "\" x2=\""
            << fmt(map.x(logit_star)) << "\" y2=\"" << fmt(map.y(p))
            << "\" stroke=\"#f9662c\" stroke-width=\"1.5\" stroke-dasharray=\"5,3\"/>\n";
        out << "<line x1=\"" << fmt(map.x(logit_star)) << "\" y1=\"" << fmt(map.y(p)) << "\" x2=\""
            << fmt(map.x(logit_star)) << "\" y2=\"" << fmt(map.y(0.0))
            << "\" stroke=\"#f9662c\" stroke-width=\"1.5\" stroke-dasharray=\"5,3\"/>\n";
        out << "<text x=\"" << fmt(map.x(logit_star) + 4) << "\" y=\"" << fmt(map.y(0.0) - 6)
            << "\" font-size=\"12\" fill=\"#f9662c\">p=" << fmt(p) << " logit=" << fmt(logit_star)
            << " conf=" << fmt(confidence_star) << "</text>\n";
    }

    // axes
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(map.y(0.0)) << "\" x2=\""
        << kWidth - kMarginRight << "\" y2=\"" << fmt(map.y(0.0))
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(map.y(0.0)) << "\" x2=\""
        << kMarginLeft << "\" y2=\"" << fmt(map.y(1.0)) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        out << "<text x=\"" << kMarginLeft - 38 << "\" y=\"" << fmt(map.y(p) + 4)
            << "\" font-size=\"12\">" << fmt(p) << "</text>\n";
    }
    out << "<text x=\"" << kWidth / 2 - 30 << "\" y=\"" << kHeight - 12
        << "\" font-size=\"13\">logit score</text>\n";
    out << "<text x=\"12\" y=\"" << kHeight / 2
        << "\" font-size=\"13\" transform=\"rotate(-90 16," << kHeight / 2
        << ")\">P(correct)</text>\n";
    out << "</svg>\n";
}

}  // namespace songsieve::cli
