#ifndef PEARCEY_TOOLS_SVG_PLOT_HPP
#define PEARCEY_TOOLS_SVG_PLOT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace pearcey_cli {

// Minimal single-file SVG line plot: fixed canvas, axes box, tick labels,
// one polyline per series. Enough for convergence and density curves.
class SvgPlot {
public:
    SvgPlot(std::string title, bool logx = false, bool logy = false)
        : title_(std::move(title)), logx_(logx), logy_(logy) {}

    void add_series(std::string name, std::vector<double> xs, std::vector<double> ys) {
        series_.push_back({std::move(name), std::move(xs), std::move(ys)});
    }

    bool write(const std::string& path) const {
        if (series_.empty()) return false;
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (const auto& s : series_)
            for (std::size_t i = 0; i < s.xs.size(); ++i) {
                double x = tx(s.xs[i]), y = ty(s.ys[i]);
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        if (!(xmax > xmin)) xmax = xmin + 1.0;
        if (!(ymax > ymin)) ymax = ymin + 1.0;
        double xpad = 0.05 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
        xmin -= xpad;
        xmax += xpad;
        ymin -= ypad;
        ymax += ypad;

        const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
        auto px = [&](double x) { return L + (tx(x) - xmin) / (xmax - xmin) * (W - L - R); };
        auto py = [&](double y) { return H - B - (ty(y) - ymin) / (ymax - ymin) * (H - T - B); };

        std::ofstream out(path);
        if (!out) return false;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
            << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
            << title_ << "</text>\n"
            << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R
            << "\" height=\"" << H - T - B
            << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

        const char* colors[] = {"#1f6fb2", "#c23b22", "#3a8f3a", "#8458b3", "#c08a00"};
        for (std::size_t s = 0; s < series_.size(); ++s) {
            out << "<polyline fill=\"none\" stroke=\"" << colors[s % 5]
                << "\" stroke-width=\"1.6\" points=\"";
            for (std::size_t i = 0; i < series_[s].xs.size(); ++i)
                out << px(series_[s].xs[i]) << "," << py(series_[s].ys[i]) << " ";
            out << "\"/>\n";
            out << "<text x=\"" << W - R - 8 << "\" y=\"" << T + 18 + 16 * s
                << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[s % 5] << "\">"
                << series_[s].name << "</text>\n";
        }

        char buf[64];
        for (int k = 0; k <= 4; ++k) {
            double fx = xmin + (xmax - xmin) * k / 4.0;
            double fy = ymin + (ymax - ymin) * k / 4.0;
            double sx = L + (W - L - R) * k / 4.0;
            double sy = H - B - (H - T - B) * k / 4.0;
            std::snprintf(buf, sizeof buf, "%.3g", inv_tx(fx));
            out << "<text x=\"" << sx << "\" y=\"" << H - B + 18
                << "\" text-anchor=\"middle\" font-size=\"11\">" << buf << "</text>\n";
            std::snprintf(buf, sizeof buf, "%.3g", inv_ty(fy));
            out << "<text x=\"" << L - 6 << "\" y=\"" << sy + 4
                << "\" text-anchor=\"end\" font-size=\"11\">" << buf << "</text>\n";
        }
        out << "</svg>\n";
        return static_cast<bool>(out);
    }

private:
    struct Series {
        std::string name;
        std::vector<double> xs, ys;
    };
    std::string title_;
    bool logx_, logy_;
    std::vector<Series> series_;

    double tx(double x) const { return logx_ ? std::log10(x) : x; }
    double ty(double y) const { return logy_ ? std::log10(y) : y; }
    double inv_tx(double x) const { return logx_ ? std::pow(10.0, x) : x; }
    double inv_ty(double y) const { return logy_ ? std::pow(10.0, y) : y; }
};

} // namespace pearcey_cli

#endif
