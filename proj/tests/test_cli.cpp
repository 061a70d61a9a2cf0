// End-to-end checks of the wedge-spectra binary: exit codes, file emission,
// byte-determinism of reruns.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

int run(const std::string& args) {
    const std::string cmd = std::string(WEDGE_CLI_PATH) + " " + args;
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main() {
    const fs::path dir = fs::temp_directory_path() / "wedge_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string tiny =
        " --L 6 --n 16 --order 1 --halfplane-L 6 --halfplane-n 24 --tol 1e-7";

    // no subcommand / unknown flag: usage error
    check(run("> /dev/null 2>&1") == 2, "missing subcommand exits 2");
    check(run("band --no-such-flag > /dev/null 2>&1") == 2, "unknown flag exits 2");

    // empty tau grid: usage error
    check(run("band --tau-min 1 --tau-max 0" + tiny + " --out " +
              (dir / "e").string() + " > /dev/null 2>&1") == 2,
          "empty tau grid exits 2");

    // band run, twice, byte-identical outputs
    const auto d1 = dir / "b1";
    const auto d2 = dir / "b2";
    const std::string bandargs =
        "band --tau-min -0.4 --tau-max 0.6 --tau-step 0.5 --alpha 1.8849555921538759" +
        tiny;
    check(run(bandargs + " --out " + d1.string() + " > /dev/null 2>&1") == 0,
          "band run exits 0");
    check(run(bandargs + " --out " + d2.string() + " > /dev/null 2>&1") == 0,
          "band rerun exits 0");
    check(fs::exists(d1 / "band.csv"), "band.csv exists");
    check(fs::exists(d1 / "band.svg"), "band.svg exists");
    check(fs::exists(d1 / "band_lines.csv"), "band_lines.csv sidecar exists");
    check(slurp(d1 / "band.csv") == slurp(d2 / "band.csv"),
          "band.csv byte-identical across reruns");
    check(slurp(d1 / "band.svg") == slurp(d2 / "band.svg"),
          "band.svg byte-identical across reruns");
    {
        std::string head;
        std::istringstream in(slurp(d1 / "band.csv"));
        std::getline(in, head);
        check(head == "tau,s_value,L,n,order,residual", "band.csv schema");
    }

    // solver failure: exit 3 (unattainable tolerance)
    check(run("band --tau-min 0 --tau-max 0 --tau-step 1 --alpha 1.6 --L 6 --n 8"
              " --order 1 --tol 1e-30 --out " + (dir / "f").string() +
              " > /dev/null 2>&1") == 3,
          "non-convergence exits 3");

    // eigenfunctions: table with zero imaginary column for b3 = 0
    const auto d3 = dir / "eig";
    check(run("eigenfunctions --tau-list 0 --alpha 1.8849555921538759" + tiny +
              " --out " + d3.string() + " > /dev/null 2>&1") == 0,
          "eigenfunctions run exits 0");
    check(fs::exists(d3 / "eig_tau_0.dat"), "eigenvector table exists");
    check(fs::exists(d3 / "localization.csv"), "localization diagnostic exists");
    {
        std::istringstream in(slurp(d3 / "eig_tau_0.dat"));
        std::string header;
        std::getline(in, header);
        check(header == "x1 x2 re_v im_v abs_v", "table header");
        double x1, x2, re, im, ab;
        bool all_zero_im = true;
        while (in >> x1 >> x2 >> re >> im >> ab)
            if (im != 0.0) all_zero_im = false;
        check(all_zero_im, "b3 = 0 export has a zero imaginary column");
    }

    // config file + flag override
    const auto cfgpath = dir / "cfg.json";
    std::ofstream(cfgpath) << "{\"alpha\": 1.8849555921538759, \"L\": 6, \"n\": 16,"
                              "\"order\": 1, \"halfplane_L\": 6, \"halfplane_n\": 24,"
                              "\"tol\": 1e-7, \"tau_min\": -0.4, \"tau_max\": 0.6,"
                              "\"tau_step\": 0.5, \"out\": \"" +
                              (dir / "c1").string() + "\"}";
    check(run("band --config " + cfgpath.string() + " > /dev/null 2>&1") == 0,
          "config file run exits 0");
    check(slurp(dir / "c1" / "band.csv") == slurp(d1 / "band.csv"),
          "config file reproduces the flag run byte-for-byte");

    // compare: JSON on stdout
    const auto cmpout = dir / "cmp.json";
    const std::string window = " --tau-min 0.8 --tau-max 1.6 --tau-step 0.4";
    check(run("compare --alpha 0.9424777960769379" + window + tiny + " > " +
              cmpout.string() + " 2>/dev/null") == 0,
          "compare run exits 0");
    double cmp_E = 0.0;
    {
        const std::string j = slurp(cmpout);
        check(j.find("\"E\":") != std::string::npos, "compare JSON has E");
        check(j.find("\"s_ess_inf\": \"inf\"") != std::string::npos,
              "outgoing class reports s_ess_inf = inf");
        check(j.find("\"strict\":") != std::string::npos, "compare JSON has strict");
        const auto pos = j.find("\"E\":");
        cmp_E = std::strtod(j.c_str() + pos + 5, nullptr);
    }

    // single-alpha sweep agrees with compare
    const auto dsw = dir / "sw";
    check(run("sweep-alpha --alpha-list 0.9424777960769379" + window + tiny +
              " --out " + dsw.string() + " > /dev/null 2>&1") == 0,
          "single-alpha sweep exits 0");
    check(fs::exists(dsw / "sweep.csv") && fs::exists(dsw / "sweep.svg") &&
              fs::exists(dsw / "sweep_lines.csv") && fs::exists(dsw / "bounds.csv"),
          "sweep emits csv, svg, sidecar, bounds");
    {
        std::istringstream in(slurp(dsw / "sweep.csv"));
        std::string header, row;
        std::getline(in, header);
        check(header == "alpha,E,E_star,s_ess_inf,klass,strict,bound_small_angle",
              "sweep.csv schema");
        std::getline(in, row);
        // second column is E
        const auto c1 = row.find(',');
        const double sweep_E = std::strtod(row.c_str() + c1 + 1, nullptr);
        check(std::abs(sweep_E - cmp_E) < 1e-10, "sweep row E matches compare E");
    }

    // localization diagnostic: centroid sits near the zero line of V^tau
    {
        std::istringstream in(slurp(d3 / "localization.csv"));
        std::string header, row;
        std::getline(in, header);
        std::getline(in, row);
        double cols[6];
        std::size_t pos = 0;
        for (double& c : cols) {
            const auto nxt = row.find(',', pos);
            c = std::strtod(row.substr(pos, nxt - pos).c_str(), nullptr);
            pos = nxt + 1;
        }
        check(cols[4] < 1.0, "eigenfunction centroid near the zero line");
    }

    if (failures == 0) std::puts("test_cli: all checks passed");
    return failures == 0 ? 0 : 1;
}
