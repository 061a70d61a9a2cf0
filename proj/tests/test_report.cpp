#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wedge/fem2d.hpp"
#include "wedge/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wedge;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path tmpdir() {
    auto d = fs::temp_directory_path() / "wedge_report_test";
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("fmt_g12: 12 significant digits, canonical special values") {
    CHECK(report::fmt_g12(1.0) == "1");
    CHECK(report::fmt_g12(0.5901061249) == "0.5901061249");
    CHECK(report::fmt_g12(1.0 / 3.0) == "0.333333333333");
    CHECK(report::fmt_g12(-2.5e-17) == "-2.5e-17");
    CHECK(report::fmt_g12(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(report::fmt_g12(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(report::fmt_g12(std::nan("")) == "nan");
}

TEST_CASE("csv writer emits identical bytes on identical input") {
    report::Csv csv;
    csv.header = {"a", "b"};
    csv.rows = {{report::fmt_g12(0.1), report::fmt_g12(-3.0)},
                {report::fmt_g12(2e-9), report::fmt_g12(1e9)}};
    const auto d = tmpdir();
    report::write_csv((d / "x1.csv").string(), csv);
    report::write_csv((d / "x2.csv").string(), csv);
    const std::string s1 = slurp(d / "x1.csv");
    CHECK(s1 == slurp(d / "x2.csv"));
    CHECK(s1 == "a,b\n0.1,-3\n2e-09,1000000000\n");
}

TEST_CASE("svg plot: well-formed, deterministic, legend and reference lines") {
    report::Series s;
    s.name = "curve";
    s.pts = {{0.0, 1.0}, {0.5, 0.8}, {1.0, 0.9}};
    const auto d = tmpdir();
    report::write_svg_plot((d / "p1.svg").string(), "t", "x", "y", {s},
                           {{"ref", 0.85, "#888888"}});
    report::write_svg_plot((d / "p2.svg").string(), "t", "x", "y", {s},
                           {{"ref", 0.85, "#888888"}});
    const std::string svg = slurp(d / "p1.svg");
    CHECK(svg == slurp(d / "p2.svg"));
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("curve") != std::string::npos);
    CHECK(svg.find("ref") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("eigenvector table: one mesh node per line, zeros on Dirichlet") {
    const auto mesh = fem2d::build_rhombus_mesh(1.2, 2.0, 2);
    geom::MagneticField f;
    f.b1 = 0.0;
    f.b2 = 1.0;
    f.b3 = 0.0;
    const auto sys = fem2d::assemble(mesh, f, 0.0, 1);
    const auto pairs = fem2d::lowest_eigenpairs(sys.A, sys.M, 1, 1e-10);
    const auto d = tmpdir();
    report::write_eigenvector_table((d / "eig.dat").string(), mesh, sys, pairs[0]);
    const std::string text = slurp(d / "eig.dat");
    CHECK(text.rfind("x1 x2 re_v im_v abs_v\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == mesh.nodes.size() + 1);
    // b3 = 0: imaginary column exactly zero
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    double x1, x2, re, im, ab;
    while (in >> x1 >> x2 >> re >> im >> ab) CHECK(im == 0.0);
}
