// wedge-spectra: ground energies of the magnetic Laplacian on infinite
// wedges via the fibered reduction to 2D sector operators.
//
// Subcommands: constants, band, eigenfunctions, sweep-alpha, compare,
// sigma-table. Exit codes: 0 success, 2 config error, 3 solver failure.

#include "wedge/band.hpp"
#include "wedge/bounds.hpp"
#include "wedge/fem2d.hpp"
#include "wedge/geometry.hpp"
#include "wedge/report.hpp"
#include "wedge/spec1d.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace wedge;
using report::fmt_g12;

namespace {

constexpr double kPi = std::numbers::pi;

struct RunConfig {
    std::string field_spec;            // "x,y,z"
    double gamma = kPi / 2;
    double theta = kPi / 4;
    bool spherical_given = false;
    double alpha = 4 * kPi / 5;
    std::vector<double> alpha_list;
    double tau_min = -3.0, tau_max = 4.0, tau_step = 0.1;
    std::vector<double> tau_list;      // eigenfunction export points
    double L = 20.0;
    int n = 160;
    int order = 2;
    double tol = 1e-8;
    double halfplane_L = 16.0;
    int halfplane_n = 128;
    int theta_count = 10;
    std::string out = ".";
    std::string format = "csv";
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

void load_config_file(const std::string& path, RunConfig& rc) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (j.contains("field")) {
        const auto& f = j["field"];
        if (!f.is_array() || f.size() != 3)
            throw ConfigError("config: field must be [b1, b2, b3]");
        rc.field_spec = fmt_g12(f[0].get<double>()) + "," +
                        fmt_g12(f[1].get<double>()) + "," +
                        fmt_g12(f[2].get<double>());
    }
    if (j.contains("gamma")) { rc.gamma = j["gamma"]; rc.spherical_given = true; }
    if (j.contains("theta")) { rc.theta = j["theta"]; rc.spherical_given = true; }
    if (j.contains("alpha")) rc.alpha = j["alpha"];
    if (j.contains("alpha_list")) rc.alpha_list = j["alpha_list"].get<std::vector<double>>();
    if (j.contains("tau_min")) rc.tau_min = j["tau_min"];
    if (j.contains("tau_max")) rc.tau_max = j["tau_max"];
    if (j.contains("tau_step")) rc.tau_step = j["tau_step"];
    if (j.contains("tau_list")) rc.tau_list = j["tau_list"].get<std::vector<double>>();
    if (j.contains("L")) rc.L = j["L"];
    if (j.contains("n")) rc.n = j["n"];
    if (j.contains("order")) rc.order = j["order"];
    if (j.contains("tol")) rc.tol = j["tol"];
    if (j.contains("halfplane_L")) rc.halfplane_L = j["halfplane_L"];
    if (j.contains("halfplane_n")) rc.halfplane_n = j["halfplane_n"];
    if (j.contains("theta_count")) rc.theta_count = j["theta_count"];
    if (j.contains("out")) rc.out = j["out"];
    if (j.contains("format")) rc.format = j["format"];
}

geom::MagneticField resolve_field(const RunConfig& rc) {
    if (!rc.field_spec.empty()) {
        if (rc.spherical_given)
            throw ConfigError("give either --field or --gamma/--theta, not both");
        const auto v = parse_list(rc.field_spec);
        if (v.size() != 3) throw ConfigError("--field expects three components x,y,z");
        auto [f, flips] = geom::canonicalize(v[0], v[1], v[2]);
        if (flips.s1 < 0 || flips.s2 < 0 || flips.s3 < 0)
            std::fprintf(stderr,
                         "field canonicalized by sign flips (%d,%d,%d); "
                         "energies are invariant\n",
                         flips.s1, flips.s2, flips.s3);
        return f;
    }
    return geom::from_spherical(rc.gamma, rc.theta);
}

band::SolveConfig solve_config(const RunConfig& rc) {
    band::SolveConfig cfg;
    cfg.L = rc.L;
    cfg.n = rc.n;
    cfg.order = rc.order;
    cfg.tol = rc.tol;
    cfg.halfplane_L = rc.halfplane_L;
    cfg.halfplane_n = rc.halfplane_n;
    cfg.tau_min = rc.tau_min;
    cfg.tau_max = rc.tau_max;
    cfg.tau_step = rc.tau_step;
    if (cfg.n < 1 || (cfg.order != 1 && cfg.order != 2) || !(cfg.L > 0) ||
        !(cfg.tol > 0) || cfg.halfplane_n < 1 || !(cfg.halfplane_L > 0))
        throw ConfigError("invalid mesh/solver parameters");
    return cfg;
}

fs::path out_path(const RunConfig& rc, const std::string& name) {
    fs::create_directories(rc.out);
    return fs::path(rc.out) / name;
}

std::string json_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt_g12(v);
}

void add_common_options(CLI::App* cmd, RunConfig& rc, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file (flags override)");
    cmd->add_option("--field", rc.field_spec, "field components x,y,z (canonicalized)");
    cmd->add_option("--gamma", rc.gamma, "field polar angle to the edge [0, pi/2]")
        ->each([&rc](const std::string&) { rc.spherical_given = true; });
    cmd->add_option("--theta", rc.theta, "in-plane field angle [0, pi/2]")
        ->each([&rc](const std::string&) { rc.spherical_given = true; });
    cmd->add_option("--alpha", rc.alpha, "wedge opening angle (radians)");
    cmd->add_option("--alpha-list", [&rc](const std::vector<std::string>& v) {
            rc.alpha_list = parse_list(v.back());
            return true;
        }, "comma-separated opening angles");
    cmd->add_option("--tau-min", rc.tau_min, "scan window lower end");
    cmd->add_option("--tau-max", rc.tau_max, "scan window upper end");
    cmd->add_option("--tau-step", rc.tau_step, "scan step");
    cmd->add_option("--tau-list", [&rc](const std::vector<std::string>& v) {
            rc.tau_list = parse_list(v.back());
            return true;
        }, "comma-separated tau values (eigenfunction export)");
    cmd->add_option("--L", rc.L, "sector truncation length");
    cmd->add_option("--n", rc.n, "cells per side");
    cmd->add_option("--order", rc.order, "element order (1 or 2)");
    cmd->add_option("--tol", rc.tol, "eigensolver residual tolerance");
    cmd->add_option("--halfplane-L", rc.halfplane_L, "half-plane truncation for sigma");
    cmd->add_option("--halfplane-n", rc.halfplane_n, "half-plane cells for sigma");
    cmd->add_option("--theta-count", rc.theta_count, "points in the sigma table");
    cmd->add_option("--out", rc.out, "output directory");
    cmd->add_option("--format", rc.format, "csv|json|svg (extra emission format)");
}

// ---------------------------------------------------------------- constants

int cmd_constants(const RunConfig& rc) {
    const auto t0 = spec1d::theta0(1e-7);
    const auto x0 = spec1d::xi0(1e-7);
    const double cap = std::sqrt(4.0 - kPi);
    const bool chain_ok = t0.value < x0.value && x0.value <= cap &&
                          std::abs(t0.arg * t0.arg - t0.value) <= 1e-5;
    if (rc.format == "json") {
        json j;
        j["Theta0"] = t0.value;
        j["xi0"] = t0.arg;
        j["Xi0"] = x0.value;
        j["tau0"] = x0.arg;
        j["sqrt_4_minus_pi"] = cap;
        j["chain_ok"] = chain_ok;
        j["solver"] = {{"grid_n", 2001},
                       {"grid_refinement", "two nested grids + Richardson"},
                       {"minimizer_tol", 1e-7}};
        const std::string text = j.dump(2) + "\n";
        if (rc.out != ".") {
            std::ofstream(out_path(rc, "constants.json"), std::ios::binary) << text;
        }
        std::cout << text;
    } else {
        std::cout << "Theta0        = " << fmt_g12(t0.value) << "\n"
                  << "xi0           = " << fmt_g12(t0.arg) << "\n"
                  << "Xi0           = " << fmt_g12(x0.value) << "\n"
                  << "tau0          = " << fmt_g12(x0.arg) << "\n"
                  << "sqrt(4-pi)    = " << fmt_g12(cap) << "\n"
                  << "chain Theta0 < Xi0 <= sqrt(4-pi): "
                  << (chain_ok ? "ok" : "VIOLATED") << "\n"
                  << "|xi0^2-Theta0| = " << fmt_g12(std::abs(t0.arg * t0.arg - t0.value))
                  << "\n"
                  << "solver: P1 elements, n=2001 nodes/grid, Richardson refined, "
                     "minimizer tol 1e-7\n";
    }
    return chain_ok ? 0 : 3;
}

// --------------------------------------------------------------------- band

int cmd_band(const RunConfig& rc) {
    const auto field = resolve_field(rc);
    const auto cfg = solve_config(rc);
    if (!(rc.tau_max >= rc.tau_min) || !(rc.tau_step > 0))
        throw ConfigError("empty tau grid");
    const auto geo = geom::face_angles(field, rc.alpha);
    const auto band =
        band::band_scan(field, rc.alpha, band::tau_grid(rc.tau_min, rc.tau_max, rc.tau_step), cfg);
    const double sig_p = band::sigma(geo.theta_plus, cfg);
    const double sig_m = band::sigma(geo.theta_minus, cfg);

    report::Csv csv;
    csv.header = {"tau", "s_value", "L", "n", "order", "residual"};
    for (std::size_t i = 0; i < band.taus.size(); ++i)
        csv.rows.push_back({fmt_g12(band.taus[i]), fmt_g12(band.values[i]),
                            fmt_g12(cfg.L), std::to_string(cfg.n),
                            std::to_string(cfg.order), fmt_g12(band.residuals[i])});
    report::write_csv(out_path(rc, "band.csv").string(), csv);

    report::Csv lines;
    lines.header = {"name", "value"};
    lines.rows.push_back({"sigma_theta_plus", fmt_g12(sig_p)});
    lines.rows.push_back({"sigma_theta_minus", fmt_g12(sig_m)});
    report::write_csv(out_path(rc, "band_lines.csv").string(), lines);

    report::Series s;
    s.name = "s(tau)";
    for (std::size_t i = 0; i < band.taus.size(); ++i)
        s.pts.push_back({band.taus[i], band.values[i]});
    report::write_svg_plot(out_path(rc, "band.svg").string(),
                           "band function, alpha=" + fmt_g12(rc.alpha), "tau",
                           "s", {s},
                           {{"sigma(theta+)", sig_p, "#d62728"},
                            {"sigma(theta-)", sig_m, "#2ca02c"}});

    std::cout << "argmin tau = " << fmt_g12(band.argmin_tau)
              << "\nE = " << fmt_g12(band.min_value)
              << "\nsigma(theta+) = " << fmt_g12(sig_p)
              << "\nsigma(theta-) = " << fmt_g12(sig_m) << "\n";
    return 0;
}

// ----------------------------------------------------------- eigenfunctions

int cmd_eigenfunctions(const RunConfig& rc) {
    const auto field = resolve_field(rc);
    const auto cfg = solve_config(rc);
    std::vector<double> taus = rc.tau_list;
    if (taus.empty())
        for (int k = -3; k <= 4; ++k) taus.push_back(k);

    const auto mesh = fem2d::build_rhombus_mesh(rc.alpha, cfg.L, cfg.n);
    report::Csv loc;
    loc.header = {"tau", "lambda", "centroid_x1", "centroid_x2",
                  "dist_to_upsilon", "residual"};
    const double bperp = std::hypot(field.b1, field.b2);
    for (double tau : taus) {
        const auto sys = fem2d::assemble(mesh, field, tau, cfg.order);
        const auto pair = fem2d::lowest_eigenpairs(sys.A, sys.M, 1, cfg.tol)[0];
        std::string name = "eig_tau_" + fmt_g12(tau) + ".dat";
        report::write_eigenvector_table(out_path(rc, name).string(), mesh, sys, pair);
        double w = 0, cx = 0, cy = 0;
        for (std::size_t i = 0; i < pair.vector.size(); ++i) {
            const double m = std::norm(pair.vector[i]);
            w += m;
            cx += m * sys.dof_pos[i][0];
            cy += m * sys.dof_pos[i][1];
        }
        cx /= w;
        cy /= w;
        const double dist =
            bperp > 0 ? std::abs(cx * field.b2 - cy * field.b1 - tau) / bperp
                      : std::abs(tau);
        loc.rows.push_back({fmt_g12(tau), fmt_g12(pair.value), fmt_g12(cx),
                            fmt_g12(cy), fmt_g12(dist), fmt_g12(pair.residual)});
    }
    report::write_csv(out_path(rc, "localization.csv").string(), loc);
    return 0;
}

// -------------------------------------------------------------- sweep-alpha

int cmd_sweep_alpha(const RunConfig& rc) {
    const auto field = resolve_field(rc);
    const auto cfg = solve_config(rc);
    std::vector<double> alphas = rc.alpha_list;
    if (alphas.empty())
        for (int k = 1; k <= 8; ++k) alphas.push_back(0.1 * k * kPi);
    for (double a : alphas)
        if (!(a > 0.02 * kPi && a < 0.98 * kPi))
            throw ConfigError("sweep alphas must lie in (0.02 pi, 0.98 pi)");

    const auto& consts = spec1d::constants();
    report::Csv csv;
    csv.header = {"alpha", "E", "E_star", "s_ess_inf", "klass", "strict",
                  "bound_small_angle"};
    report::Csv bnd;
    bnd.header = {"alpha", "bound_z", "bound_gauss", "sigma_lower", "E_fem",
                  "strict_certified"};
    report::Series sE{"E", {}, "#1f77b4"}, sStar{"E*", {}, "#d62728"};
    int failures = 0;
    for (double alpha : alphas) {
        try {
            const auto rep = band::ground_energy(field, alpha, cfg);
            if (rep.E > rep.E_star + rep.margin)
                std::fprintf(stderr, "anomalous row at alpha=%s: E > E* + margin\n",
                             fmt_g12(alpha).c_str());
            const double sab = field.b2 > 0
                ? bounds::small_angle_upper_bound(field, alpha)
                : std::numeric_limits<double>::quiet_NaN();
            csv.rows.push_back({fmt_g12(alpha), fmt_g12(rep.E), fmt_g12(rep.E_star),
                                fmt_g12(rep.s_ess_inf),
                                geom::field_class_name(rep.klass),
                                rep.strict ? "1" : "0", fmt_g12(sab)});
            sE.pts.push_back({alpha / kPi, rep.E});
            sStar.pts.push_back({alpha / kPi, rep.E_star});
            if (field.b2 > 0) {
                const auto zb =
                    bounds::quasimode_energy(field, alpha, consts.tau0, spec1d::z_tau0());
                const auto [gb, rho] = bounds::gaussian_upper_bound(field, alpha);
                (void)rho;
                const auto geo = geom::face_angles(field, alpha);
                const double sl = bounds::sigma_lower_bound(geo.theta0);
                bnd.rows.push_back({fmt_g12(alpha), fmt_g12(zb.bound), fmt_g12(gb),
                                    fmt_g12(sl), fmt_g12(rep.E),
                                    gb < sl ? "1" : "0"});
            }
        } catch (const fem2d::SolverError& e) {
            ++failures;
            std::fprintf(stderr, "alpha=%s failed: %s\n", fmt_g12(alpha).c_str(),
                         e.what());
        } catch (const band::ScanError& e) {
            ++failures;
            std::fprintf(stderr, "alpha=%s failed: %s\n", fmt_g12(alpha).c_str(),
                         e.what());
        }
    }
    report::write_csv(out_path(rc, "sweep.csv").string(), csv);
    report::write_csv(out_path(rc, "bounds.csv").string(), bnd);
    report::Csv lines;
    lines.header = {"name", "value"};
    lines.rows.push_back({"b2_Xi0", fmt_g12(field.b2 * consts.Xi0)});
    lines.rows.push_back({"Theta0", fmt_g12(consts.theta0)});
    report::write_csv(out_path(rc, "sweep_lines.csv").string(), lines);
    report::write_svg_plot(out_path(rc, "sweep.svg").string(),
                           "ground energy vs alpha/pi", "alpha/pi", "E",
                           {sE, sStar},
                           {{"b2 Xi0", field.b2 * consts.Xi0, "#9467bd"},
                            {"Theta0", consts.theta0, "#8c564b"}});
    return failures == 0 ? 0 : 3;
}

// ------------------------------------------------------------------ compare

int cmd_compare(const RunConfig& rc) {
    const auto field = resolve_field(rc);
    const auto cfg = solve_config(rc);
    const auto rep = band::ground_energy(field, rc.alpha, cfg);

    json j;
    j["field"] = {field.b1, field.b2, field.b3};
    j["gamma"] = field.gamma;
    j["theta"] = field.theta;
    j["alpha"] = rc.alpha;
    j["class"] = geom::field_class_name(rep.klass);
    j["E"] = rep.E;
    j["tau_c"] = rep.tau_c;
    j["E_star"] = rep.E_star;
    if (std::isinf(rep.s_ess_inf))
        j["s_ess_inf"] = json_number(rep.s_ess_inf);
    else
        j["s_ess_inf"] = rep.s_ess_inf;
    j["s_inf_minus"] = rep.s_inf_minus;
    j["s_inf_plus"] = rep.s_inf_plus;
    j["theta_plus"] = rep.theta_plus;
    j["theta_minus"] = rep.theta_minus;
    j["strict"] = rep.strict;
    j["margin"] = rep.margin;
    if (field.b2 > 0) {
        const auto& consts = spec1d::constants();
        const auto zb = bounds::quasimode_energy(field, rc.alpha, consts.tau0,
                                                 spec1d::z_tau0());
        const auto [gb, rho] = bounds::gaussian_upper_bound(field, rc.alpha);
        const auto geo = geom::face_angles(field, rc.alpha);
        j["bounds"] = {{"quasimode_z", zb.bound},
                       {"gaussian", gb},
                       {"gaussian_rho", rho},
                       {"small_angle", bounds::small_angle_upper_bound(field, rc.alpha)},
                       {"sigma_lower", bounds::sigma_lower_bound(geo.theta0)}};
    }
    j["solver"] = {{"L", cfg.L}, {"n", cfg.n}, {"order", cfg.order}, {"tol", cfg.tol},
                   {"tau_window", {cfg.tau_min, cfg.tau_max, cfg.tau_step}}};
    const std::string text = j.dump(2) + "\n";
    if (rc.out != ".")
        std::ofstream(out_path(rc, "compare.json"), std::ios::binary) << text;
    std::cout << text;
    return 0;
}

// -------------------------------------------------------------- sigma-table

int cmd_sigma_table(const RunConfig& rc) {
    const auto cfg = solve_config(rc);
    if (rc.theta_count < 2) throw ConfigError("theta-count must be >= 2");
    report::Csv csv;
    csv.header = {"theta", "sigma", "sigma_lower", "branch"};
    report::Series s{"sigma", {}, "#1f77b4"}, lb{"lower bound", {}, "#ff7f0e"};
    for (int k = 0; k < rc.theta_count; ++k) {
        const double theta = (kPi / 2) * k / (rc.theta_count - 1);
        const double v = band::sigma(theta, cfg);
        const char* branch = theta < 0.05 ? "analytic0"
                            : theta > kPi / 2 - 1e-12 ? "analytic90" : "fem";
        csv.rows.push_back({fmt_g12(theta), fmt_g12(v),
                            fmt_g12(bounds::sigma_lower_bound(theta)), branch});
        s.pts.push_back({theta, v});
        lb.pts.push_back({theta, bounds::sigma_lower_bound(theta)});
    }
    report::write_csv(out_path(rc, "sigma.csv").string(), csv);
    report::write_svg_plot(out_path(rc, "sigma.svg").string(),
                           "half-space ground energy", "theta", "sigma",
                           {s, lb}, {});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"magnetic Laplacian on infinite wedges: band functions, "
                 "ground energies and quasimode bounds"};
    app.require_subcommand(1);

    RunConfig rc;
    std::string config_path;

    auto* c_const = app.add_subcommand("constants", "1D reference constants");
    auto* c_band = app.add_subcommand("band", "band function scan (CSV + SVG)");
    auto* c_eig = app.add_subcommand("eigenfunctions", "nodal eigenvector export");
    auto* c_sweep = app.add_subcommand("sweep-alpha", "ground energy vs opening");
    auto* c_cmp = app.add_subcommand("compare", "full energy report (JSON)");
    auto* c_sig = app.add_subcommand("sigma-table", "half-space curve table");
    for (auto* c : {c_const, c_band, c_eig, c_sweep, c_cmp, c_sig})
        add_common_options(c, rc, config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty()) {
            RunConfig from_file;
            load_config_file(config_path, from_file);
            // flags override file values: re-parse on top of the file config
            rc = from_file;
            try {
                app.clear();
                app.parse(argc, argv);
            } catch (const CLI::ParseError&) {
                return 2;
            }
        }
        if (c_const->parsed()) return cmd_constants(rc);
        if (c_band->parsed()) return cmd_band(rc);
        if (c_eig->parsed()) return cmd_eigenfunctions(rc);
        if (c_sweep->parsed()) return cmd_sweep_alpha(rc);
        if (c_cmp->parsed()) return cmd_compare(rc);
        if (c_sig->parsed()) return cmd_sigma_table(rc);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const fem2d::SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 3;
    } catch (const band::ScanError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
