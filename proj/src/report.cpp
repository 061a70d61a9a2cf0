#include "wedge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace wedge::report {

std::string fmt_g12(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

struct Extent {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();

    void add(double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
};

} // namespace

void write_csv(const std::string& path, const Csv& csv) {
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < csv.header.size(); ++i)
        out << (i ? "," : "") << csv.header[i];
    out << "\n";
    for (const auto& row : csv.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<Series>& series,
                    const std::vector<RefLine>& ref_lines) {
    constexpr double W = 960, H = 600;
    constexpr double ml = 80, mr = 24, mt = 48, mb = 56;

    Extent ext;
    for (const auto& s : series)
        for (const auto& p : s.pts)
            if (std::isfinite(p[0]) && std::isfinite(p[1])) ext.add(p[0], p[1]);
    for (const auto& r : ref_lines)
        if (std::isfinite(r.y)) ext.add(ext.xmin, r.y);
    if (!(ext.xmax > ext.xmin)) { ext.xmin -= 0.5; ext.xmax += 0.5; }
    if (!(ext.ymax > ext.ymin)) { ext.ymin -= 0.5; ext.ymax += 0.5; }
    const double padx = 0.04 * (ext.xmax - ext.xmin);
    const double pady = 0.06 * (ext.ymax - ext.ymin);
    ext.xmin -= padx; ext.xmax += padx;
    ext.ymin -= pady; ext.ymax += pady;

    auto px = [&](double x) {
        return ml + (x - ext.xmin) / (ext.xmax - ext.xmin) * (W - ml - mr);
    };
    auto py = [&](double y) {
        return H - mb - (y - ext.ymin) / (ext.ymax - ext.ymin) * (H - mt - mb);
    };

    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
        << fmt_g12(W) << " " << fmt_g12(H) << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"" << fmt_g12(W) << "\" height=\"" << fmt_g12(H)
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << fmt_g12(W / 2) << "\" y=\"24\" text-anchor=\"middle\" "
           "font-size=\"16\">" << title << "</text>\n";

    // axes box and ticks
    out << "<rect x=\"" << fmt_g12(ml) << "\" y=\"" << fmt_g12(mt) << "\" width=\""
        << fmt_g12(W - ml - mr) << "\" height=\"" << fmt_g12(H - mt - mb)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    constexpr int nticks = 6;
    for (int i = 0; i <= nticks; ++i) {
        const double fx = ext.xmin + (ext.xmax - ext.xmin) * i / nticks;
        const double fy = ext.ymin + (ext.ymax - ext.ymin) * i / nticks;
        out << "<line x1=\"" << fmt_g12(px(fx)) << "\" y1=\"" << fmt_g12(H - mb)
            << "\" x2=\"" << fmt_g12(px(fx)) << "\" y2=\"" << fmt_g12(H - mb + 5)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt_g12(px(fx)) << "\" y=\"" << fmt_g12(H - mb + 20)
            << "\" text-anchor=\"middle\" font-size=\"11\">";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", fx);
        out << buf << "</text>\n";
        out << "<line x1=\"" << fmt_g12(ml - 5) << "\" y1=\"" << fmt_g12(py(fy))
            << "\" x2=\"" << fmt_g12(ml) << "\" y2=\"" << fmt_g12(py(fy))
            << "\" stroke=\"black\"/>\n";
        std::snprintf(buf, sizeof buf, "%.4g", fy);
        out << "<text x=\"" << fmt_g12(ml - 8) << "\" y=\"" << fmt_g12(py(fy) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << buf << "</text>\n";
    }
    out << "<text x=\"" << fmt_g12(ml + (W - ml - mr) / 2) << "\" y=\""
        << fmt_g12(H - 12) << "\" text-anchor=\"middle\" font-size=\"13\">"
        << xlabel << "</text>\n";
    out << "<text x=\"18\" y=\"" << fmt_g12(mt + (H - mt - mb) / 2)
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << fmt_g12(mt + (H - mt - mb) / 2) << ")\">" << ylabel << "</text>\n";

    for (const auto& r : ref_lines) {
        if (!std::isfinite(r.y)) continue;
        out << "<line x1=\"" << fmt_g12(ml) << "\" y1=\"" << fmt_g12(py(r.y))
            << "\" x2=\"" << fmt_g12(W - mr) << "\" y2=\"" << fmt_g12(py(r.y))
            << "\" stroke=\"" << r.color << "\" stroke-dasharray=\"6 4\"/>\n";
        out << "<text x=\"" << fmt_g12(W - mr - 6) << "\" y=\""
            << fmt_g12(py(r.y) - 4) << "\" text-anchor=\"end\" font-size=\"11\" fill=\""
            << r.color << "\">" << r.name << "</text>\n";
    }

    int legend_i = 0;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : s.pts)
            if (std::isfinite(p[0]) && std::isfinite(p[1]))
                out << fmt_g12(px(p[0])) << "," << fmt_g12(py(p[1])) << " ";
        out << "\"/>\n";
        const double lx = ml + 12 + 150.0 * legend_i;
        out << "<line x1=\"" << fmt_g12(lx) << "\" y1=\"" << fmt_g12(mt + 14)
            << "\" x2=\"" << fmt_g12(lx + 22) << "\" y2=\"" << fmt_g12(mt + 14)
            << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fmt_g12(lx + 26) << "\" y=\"" << fmt_g12(mt + 18)
            << "\" font-size=\"12\">" << s.name << "</text>\n";
        ++legend_i;
    }
    out << "</svg>\n";
}

void write_eigenvector_table(const std::string& path, const fem2d::Mesh2D& mesh,
                             const fem2d::AssembledSystem& sys,
                             const fem2d::EigenPair& pair) {
    std::ofstream out = open_out(path);
    out << "x1 x2 re_v im_v abs_v\n";
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const int dof = sys.vertex_dof[i];
        const fem2d::cplx v = dof >= 0 ? pair.vector[dof] : fem2d::cplx(0, 0);
        out << fmt_g12(mesh.nodes[i][0]) << " " << fmt_g12(mesh.nodes[i][1]) << " "
            << fmt_g12(v.real()) << " " << fmt_g12(v.imag()) << " "
            << fmt_g12(std::abs(v)) << "\n";
    }
}

} // namespace wedge::report
