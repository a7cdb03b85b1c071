// svgplot.hpp — minimal static SVG plots (line, scatter, histogram) for the
// figure analogues produced by the CLI. Data consumers read the CSVs; these
// files are a convenience layer.

#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace tcc::svg {

struct Series {
    std::vector<double> x, y;
    std::string color = "#1f77b4";
    bool scatter = false;
    double marker = 2.0;
    std::string dash;  // e.g. "4,3" for dashed reference curves
    std::string label;
};

class Plot {
  public:
    Plot(std::string title, std::string xlabel, std::string ylabel, bool logx = false,
         bool logy = false)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)),
          logx_(logx), logy_(logy) {}

    void add(Series s) { series_.push_back(std::move(s)); }

    std::string render(int width = 720, int height = 480) const {
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (const auto& s : series_)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                const double x = tx(s.x[i]), y = ty(s.y[i]);
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        if (!(xmax > xmin)) {
            xmin -= 0.5;
            xmax += 0.5;
        }
        if (!(ymax > ymin)) {
            ymin -= 0.5;
            ymax += 0.5;
        }
        const double ml = 70, mr = 20, mt = 40, mb = 50;
        const double pw = width - ml - mr, ph = height - mt - mb;
        auto px = [&](double x) { return ml + (tx(x) - xmin) / (xmax - xmin) * pw; };
        auto py = [&](double y) { return mt + ph - (ty(y) - ymin) / (ymax - ymin) * ph; };

        std::ostringstream os;
        os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
           << height << "'>\n";
        os << "<rect width='100%' height='100%' fill='white'/>\n";
        os << "<rect x='" << ml << "' y='" << mt << "' width='" << pw << "' height='" << ph
           << "' fill='none' stroke='black'/>\n";
        os << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='15'>"
           << title_ << "</text>\n";
        os << "<text x='" << width / 2 << "' y='" << height - 12
           << "' text-anchor='middle' font-size='13'>" << xlabel_ << "</text>\n";
        os << "<text x='16' y='" << height / 2 << "' text-anchor='middle' font-size='13' "
           << "transform='rotate(-90 16 " << height / 2 << ")'>" << ylabel_ << "</text>\n";

        // axis ticks: 5 per axis in transformed units
        for (int k = 0; k <= 4; ++k) {
            const double fx = xmin + (xmax - xmin) * k / 4.0;
            const double fy = ymin + (ymax - ymin) * k / 4.0;
            os << "<text x='" << ml + pw * k / 4.0 << "' y='" << mt + ph + 16
               << "' text-anchor='middle' font-size='11'>" << tick_label(fx, logx_)
               << "</text>\n";
            os << "<text x='" << ml - 6 << "' y='" << mt + ph - ph * k / 4.0 + 4
               << "' text-anchor='end' font-size='11'>" << tick_label(fy, logy_)
               << "</text>\n";
        }

        double legend_y = mt + 14;
        for (const auto& s : series_) {
            if (s.scatter) {
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    if (!finite_point(s.x[i], s.y[i])) continue;
                    os << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i]) << "' r='"
                       << s.marker << "' fill='" << s.color << "' fill-opacity='0.7'/>\n";
                }
            } else {
                os << "<polyline fill='none' stroke='" << s.color << "'";
                if (!s.dash.empty()) os << " stroke-dasharray='" << s.dash << "'";
                os << " stroke-width='1.5' points='";
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    if (!finite_point(s.x[i], s.y[i])) continue;
                    os << px(s.x[i]) << "," << py(s.y[i]) << " ";
                }
                os << "'/>\n";
            }
            if (!s.label.empty()) {
                os << "<text x='" << ml + pw - 6 << "' y='" << legend_y
                   << "' text-anchor='end' font-size='12' fill='" << s.color << "'>"
                   << s.label << "</text>\n";
                legend_y += 16;
            }
        }
        os << "</svg>\n";
        return os.str();
    }

  private:
    double tx(double x) const { return logx_ ? std::log10(std::max(x, 1e-300)) : x; }
    double ty(double y) const { return logy_ ? std::log10(std::max(y, 1e-300)) : y; }
    bool finite_point(double x, double y) const {
        return std::isfinite(tx(x)) && std::isfinite(ty(y));
    }
    static std::string tick_label(double v, bool log) {
        std::ostringstream os;
        os.precision(3);
        if (log)
            os << "1e" << v;
        else
            os << v;
        return os.str();
    }

    std::string title_, xlabel_, ylabel_;
    bool logx_, logy_;
    std::vector<Series> series_;
};

}  // namespace tcc::svg
