#include "stiffnet/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "stiffnet/errors.hpp"

namespace stiffnet {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {
std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    return out;
}
}  // namespace

void write_loss_csv(const std::string& path, std::span<const double> history) {
    std::ofstream out = open_out(path);
    out << "iteration,loss\n";
    for (std::size_t i = 0; i < history.size(); ++i)
        out << i << "," << format_full(history[i]) << "\n";
}

void write_solution_csv(const std::string& path, std::span<const double> times,
                        std::span<const double> yhat, std::span<const double> truth, int n) {
    std::ofstream out = open_out(path);
    out << "t";
    for (int i = 1; i <= n; ++i) out << ",yhat_" << i;
    if (!truth.empty())
        for (int i = 1; i <= n; ++i) out << ",ytruth_" << i;
    out << "\n";
    for (std::size_t r = 0; r < times.size(); ++r) {
        out << format_full(times[r]);
        for (int i = 0; i < n; ++i)
            out << "," << format_full(yhat[r * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)]);
        if (!truth.empty())
            for (int i = 0; i < n; ++i)
                out << ","
                    << format_full(truth[r * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)]);
        out << "\n";
    }
}

void write_reference_csv(const std::string& path, const ReferenceTrajectory& traj) {
    std::ofstream out = open_out(path);
    out << "t";
    for (int i = 1; i <= traj.n; ++i) out << ",y_" << i;
    out << "\n";
    for (std::size_t r = 0; r < traj.times.size(); ++r) {
        out << format_full(traj.times[r]);
        for (int i = 0; i < traj.n; ++i)
            out << "," << format_full(traj.states[r * static_cast<std::size_t>(traj.n) +
                                                  static_cast<std::size_t>(i)]);
        out << "\n";
    }
}

void write_svg_chart(const std::string& path, const std::string& title,
                     std::span<const double> x, std::span<const double> series, int columns,
                     bool log_y) {
    const std::size_t rows = x.size();
    if (rows < 2 || columns < 1 || series.size() != rows * static_cast<std::size_t>(columns))
        throw shape_error("svg chart input sizes disagree");

    auto ymap = [log_y](double v) {
        return log_y ? std::log10(std::max(v, 1e-300)) : v;
    };

    double xmin = x.front(), xmax = x.back();
    double ymin = ymap(series[0]), ymax = ymin;
    for (double v : series) {
        ymin = std::min(ymin, ymap(v));
        ymax = std::max(ymax, ymap(v));
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    const double w = 800, h = 420, m = 50;
    auto px = [&](double v) { return m + (v - xmin) / (xmax - xmin) * (w - 2 * m); };
    auto py = [&](double v) { return h - m - (ymap(v) - ymin) / (ymax - ymin) * (h - 2 * m); };

    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"14\">"
        << title << (log_y ? " (log10 y)" : "") << "</text>\n";
    out << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << w - 2 * m << "\" height=\""
        << h - 2 * m << "\" fill=\"none\" stroke=\"#333\"/>\n";

    char num[32];
    std::snprintf(num, sizeof num, "%.4g", xmin);
    out << "<text x=\"" << m << "\" y=\"" << h - m + 18 << "\" font-family=\"monospace\" font-size=\"11\">"
        << num << "</text>\n";
    std::snprintf(num, sizeof num, "%.4g", xmax);
    out << "<text x=\"" << w - m << "\" y=\"" << h - m + 18
        << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" << num << "</text>\n";
    std::snprintf(num, sizeof num, "%.4g", ymin);
    out << "<text x=\"" << m - 4 << "\" y=\"" << h - m
        << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" << num << "</text>\n";
    std::snprintf(num, sizeof num, "%.4g", ymax);
    out << "<text x=\"" << m - 4 << "\" y=\"" << m + 4
        << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" << num << "</text>\n";

    for (int c = 0; c < columns; ++c) {
        out << "<polyline fill=\"none\" stroke=\"" << kColors[c % 8] << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t r = 0; r < rows; ++r) {
            const double v = series[r * static_cast<std::size_t>(columns) + static_cast<std::size_t>(c)];
            out << px(x[r]) << "," << py(v) << " ";
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace stiffnet
