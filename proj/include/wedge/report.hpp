#pragma once

#include "wedge/fem2d.hpp"

#include <array>
#include <string>
#include <vector>

// Deterministic file emission: CSV with fixed 12-significant-digit floats,
// self-contained SVG line plots (every plot gets a sidecar CSV with exactly
// the plotted data), and the nodal eigenvector export.

namespace wedge::report {

// %.12g with canonical inf/nan spellings; identical bytes for identical input
std::string fmt_g12(double v);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const Csv& csv);

struct Series {
    std::string name;
    std::vector<std::array<double, 2>> pts;
    std::string color = "#1f77b4";
};

struct RefLine {
    std::string name;
    double y = 0.0;
    std::string color = "#888888";
};

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<Series>& series,
                    const std::vector<RefLine>& ref_lines);

// ASCII table, one mesh node per line in mesh order:
// x1 x2 re_v im_v abs_v  (eliminated Dirichlet nodes carry zeros)
void write_eigenvector_table(const std::string& path, const fem2d::Mesh2D& mesh,
                             const fem2d::AssembledSystem& sys,
                             const fem2d::EigenPair& pair);

} // namespace wedge::report
