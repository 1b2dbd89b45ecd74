// grid_io.hpp
// Scan grid serialization: long-form CSV and a dependency-free SVG heatmap.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qutrit_sle/errors.hpp"
#include "qutrit_sle/hhl_pipeline.hpp"

namespace qutrit_sle {

namespace detail {

// max_digits10 so a re-read reproduces the exact double
inline std::string exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace detail

/// Header `<axis0>,<axis1>,fidelity`, then one row per point, axis 0 outer.
inline void write_grid_csv(std::ostream& out, const ScanGrid& grid) {
    out << to_string(grid.axes[0]) << ',' << to_string(grid.axes[1]) << ",fidelity\n";
    for (std::size_t i = 0; i < grid.values[0].size(); ++i)
        for (std::size_t j = 0; j < grid.values[1].size(); ++j)
            out << detail::exact(grid.values[0][i]) << ',' << detail::exact(grid.values[1][j]) << ','
                << detail::exact(grid.fidelity[i][j]) << '\n';
}

struct CsvGrid {
    std::string axis0;
    std::string axis1;
    std::vector<double> values0;
    std::vector<double> values1;
    std::vector<std::vector<double>> fidelity;
};

inline CsvGrid read_grid_csv(std::istream& in) {
    CsvGrid g;
    std::string line;
    if (!std::getline(in, line)) throw invalid_input("grid csv: empty input");
    {
        std::istringstream hs(line);
        std::string third;
        if (!std::getline(hs, g.axis0, ',') || !std::getline(hs, g.axis1, ',') ||
            !std::getline(hs, third) || third != "fidelity") {
            throw invalid_input("grid csv: bad header '" + line + "'");
        }
    }
    std::vector<std::array<double, 3>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::array<double, 3> v{};
        std::istringstream ls(line);
        std::string cell;
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(ls, cell, ',')) {
                throw invalid_input("grid csv: line " + std::to_string(line_no) + " has too few fields");
            }
            try {
                std::size_t used = 0;
                v[static_cast<std::size_t>(k)] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw invalid_input("grid csv: line " + std::to_string(line_no) + ": bad number '" +
                                    cell + "'");
            }
        }
        rows.push_back(v);
    }

    for (const auto& r : rows) {
        if (g.values0.empty() || g.values0.back() != r[0]) g.values0.push_back(r[0]);
        if (g.values0.size() == 1) g.values1.push_back(r[1]);
    }
    const std::size_t cols = g.values1.size();
    if (cols == 0 || rows.size() != g.values0.size() * cols) {
        throw invalid_input("grid csv: rows do not form a rectangular grid");
    }
    g.fidelity.assign(g.values0.size(), std::vector<double>(cols));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::size_t i = k / cols, j = k % cols;
        if (rows[k][0] != g.values0[i] || rows[k][1] != g.values1[j]) {
            throw invalid_input("grid csv: row " + std::to_string(k + 2) + " is out of grid order");
        }
        g.fidelity[i][j] = rows[k][2];
    }
    return g;
}

inline constexpr int svg_raster = 512;

/// 512x512 grayscale raster (0 black, 1 white), axis 0 horizontal, axis 1
/// vertical increasing upward, best point circled in red.
inline void write_grid_svg(std::ostream& out, const ScanGrid& grid) {
    constexpr int left = 72, top = 40, right = 24, bottom = 64;
    const int width = left + svg_raster + right;
    const int height = top + svg_raster + bottom;
    const std::size_t nx = grid.values[0].size();
    const std::size_t ny = grid.values[1].size();
    const double cw = static_cast<double>(svg_raster) / static_cast<double>(nx);
    const double ch = static_cast<double>(svg_raster) / static_cast<double>(ny);

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n"
        << "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double f = std::clamp(grid.fidelity[i][j], 0.0, 1.0);
            const int level = static_cast<int>(std::lround(255.0 * f));
            const double x = left + cw * static_cast<double>(i);
            const double y = top + ch * static_cast<double>(ny - 1 - j);
            out << "<rect x=\"" << detail::fixed(x, 3) << "\" y=\"" << detail::fixed(y, 3)
                << "\" width=\"" << detail::fixed(cw, 3) << "\" height=\"" << detail::fixed(ch, 3)
                << "\" fill=\"rgb(" << level << ',' << level << ',' << level << ")\"/>\n";
        }
    }
    out << "</g>\n";

    const auto* xa = to_string(grid.axes[0]);
    const auto* ya = to_string(grid.axes[1]);
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << svg_raster << "\" height=\""
        << svg_raster << "\" fill=\"none\" stroke=\"black\"/>\n"
        << "<g font-family=\"sans-serif\" font-size=\"14\" fill=\"black\">\n"
        << "<text x=\"" << left + svg_raster / 2 << "\" y=\"" << top - 14
        << "\" text-anchor=\"middle\">fidelity</text>\n"
        << "<text x=\"" << left + svg_raster / 2 << "\" y=\"" << top + svg_raster + 44
        << "\" text-anchor=\"middle\">" << xa << "</text>\n"
        << "<text x=\"" << left - 48 << "\" y=\"" << top + svg_raster / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << left - 48 << ' '
        << top + svg_raster / 2 << ")\">" << ya << "</text>\n"
        << "<text x=\"" << left << "\" y=\"" << top + svg_raster + 20 << "\" text-anchor=\"start\">"
        << detail::fixed(grid.values[0].front(), 3) << "</text>\n"
        << "<text x=\"" << left + svg_raster << "\" y=\"" << top + svg_raster + 20
        << "\" text-anchor=\"end\">" << detail::fixed(grid.values[0].back(), 3) << "</text>\n"
        << "<text x=\"" << left - 6 << "\" y=\"" << top + svg_raster << "\" text-anchor=\"end\">"
        << detail::fixed(grid.values[1].front(), 3) << "</text>\n"
        << "<text x=\"" << left - 6 << "\" y=\"" << top + 12 << "\" text-anchor=\"end\">"
        << detail::fixed(grid.values[1].back(), 3) << "</text>\n"
        << "</g>\n";

    const double bx = left + cw * (static_cast<double>(grid.best_row) + 0.5);
    const double by = top + ch * (static_cast<double>(ny - 1 - grid.best_col) + 0.5);
    out << "<circle cx=\"" << detail::fixed(bx, 3) << "\" cy=\"" << detail::fixed(by, 3)
        << "\" r=\"6\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n"
        << "</svg>\n";
}

}  // namespace qutrit_sle
