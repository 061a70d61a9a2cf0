#include "wedge/band.hpp"

#include "wedge/minimize.hpp"
#include "wedge/spec1d.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

namespace wedge::band {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

using CacheKey = std::tuple<double, double, double, double,   // b1 b2 b3 alpha
                            double,                           // tau
                            double, int, int, double>;        // L n order tol

std::mutex g_band_mutex;
std::map<CacheKey, std::pair<double, double>> g_band_cache;   // -> (value, residual)

std::mutex g_sigma_mutex;
std::map<std::tuple<double, double, int, int, double>, double> g_sigma_cache;

std::pair<double, double> band_value_residual(const geom::MagneticField& field,
                                              double alpha, double tau,
                                              const SolveConfig& cfg) {
    const CacheKey key{field.b1, field.b2, field.b3, alpha, tau,
                       cfg.L, cfg.n, cfg.order, cfg.tol};
    {
        std::lock_guard<std::mutex> lk(g_band_mutex);
        auto it = g_band_cache.find(key);
        if (it != g_band_cache.end()) return it->second;
    }
    const fem2d::Mesh2D mesh = fem2d::build_rhombus_mesh(alpha, cfg.L, cfg.n);
    const fem2d::AssembledSystem sys = fem2d::assemble(mesh, field, tau, cfg.order);
    const auto pairs = fem2d::lowest_eigenpairs(sys.A, sys.M, 1, cfg.tol);
    const std::pair<double, double> out{pairs[0].value, pairs[0].residual};
    std::lock_guard<std::mutex> lk(g_band_mutex);
    g_band_cache.emplace(key, out);
    return out;
}

} // namespace

int worker_count() {
    if (const char* env = std::getenv("WEDGE_SPECTRA_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

std::vector<double> tau_grid(double tau_min, double tau_max, double step) {
    if (!(step > 0.0) || !(tau_max >= tau_min))
        throw std::invalid_argument("tau_grid: empty or invalid grid");
    std::vector<double> taus;
    const int m = static_cast<int>(std::round((tau_max - tau_min) / step));
    for (int k = 0; k <= m; ++k) taus.push_back(tau_min + k * step);
    return taus;
}

double band_value(const geom::MagneticField& field, double alpha, double tau,
                  const SolveConfig& cfg) {
    return band_value_residual(field, alpha, tau, cfg).first;
}

BandFunction band_scan(const geom::MagneticField& field, double alpha,
                       const std::vector<double>& taus, const SolveConfig& cfg) {
    if (taus.empty())
        throw std::invalid_argument("band_scan: empty tau grid");
    std::vector<double> sorted = taus;
    std::sort(sorted.begin(), sorted.end());

    const int npts = static_cast<int>(sorted.size());
    std::vector<double> values(npts, 0.0), residuals(npts, 0.0);
    std::vector<char> ok(npts, 0);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::string err_msg;

    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= npts || failed.load()) return;
            try {
                auto [v, r] = band_value_residual(field, alpha, sorted[i], cfg);
                values[i] = v;
                residuals[i] = r;
                ok[i] = 1;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(err_mutex);
                if (!failed.exchange(true)) err_msg = e.what();
                return;
            }
        }
    };
    const int nw = std::min(worker_count(), npts);
    std::vector<std::thread> pool;
    for (int t = 0; t < nw - 1; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    BandFunction band;
    band.cfg = cfg;
    if (failed.load()) {
        for (int i = 0; i < npts; ++i) {
            if (!ok[i]) continue;
            band.taus.push_back(sorted[i]);
            band.values.push_back(values[i]);
            band.residuals.push_back(residuals[i]);
        }
        throw ScanError("band_scan: point failure: " + err_msg, std::move(band));
    }
    band.taus = std::move(sorted);
    band.values = std::move(values);
    band.residuals = std::move(residuals);

    int imin = 0;
    for (int i = 1; i < npts; ++i)
        if (band.values[i] < band.values[imin]) imin = i;
    band.argmin_tau = band.taus[imin];
    band.min_value = band.values[imin];

    if (npts >= 2) {
        const double lo = band.taus[std::max(0, imin - 1)];
        const double hi = band.taus[std::min(npts - 1, imin + 1)];
        if (hi > lo) {
            GoldenResult g = golden_min(
                [&](double t) { return band_value(field, alpha, t, cfg); },
                lo, hi, cfg.refine_tol);
            // unimodality safeguard: keep the better of coarse and refined
            if (g.value < band.min_value) {
                band.min_value = g.value;
                band.argmin_tau = g.arg;
            }
        }
    }
    return band;
}

double sigma(double theta, const SolveConfig& cfg) {
    if (!(theta >= 0.0 && theta <= kPi / 2.0))
        throw std::invalid_argument("sigma: theta must lie in [0, pi/2]");
    if (theta < 0.05) {
        if (theta > 0.0)
            std::fprintf(stderr,
                         "sigma: theta=%g below 0.05, using the theta=0 branch "
                         "(Theta0)\n", theta);
        return spec1d::constants().theta0;
    }
    if (theta > kPi / 2.0 - 1e-12) return 1.0;

    const std::tuple<double, double, int, int, double> key{
        theta, cfg.halfplane_L, cfg.halfplane_n, cfg.order, cfg.tol};
    {
        std::lock_guard<std::mutex> lk(g_sigma_mutex);
        auto it = g_sigma_cache.find(key);
        if (it != g_sigma_cache.end()) return it->second;
    }
    const fem2d::Mesh2D mesh = fem2d::build_halfplane_mesh(cfg.halfplane_L, cfg.halfplane_n);
    geom::MagneticField f;
    f.b1 = std::sin(theta);
    f.b2 = std::cos(theta);
    f.b3 = 0.0;
    f.gamma = kPi / 2.0;
    f.theta = theta;
    const fem2d::AssembledSystem sys = fem2d::assemble(mesh, f, 0.0, cfg.order);
    // sigma <= 1 analytically (the full-space level); the Dirichlet
    // truncation can push weakly bound states above it near theta = pi/2
    const double val =
        std::min(1.0, fem2d::lowest_eigenpairs(sys.A, sys.M, 1, cfg.tol)[0].value);
    std::lock_guard<std::mutex> lk(g_sigma_mutex);
    g_sigma_cache.emplace(key, val);
    return val;
}

double e_star(const geom::SectorGeometry& geo, const SolveConfig& cfg) {
    return std::min(1.0, sigma(geo.theta0, cfg));
}

double ess_spectrum_bottom(const geom::SectorGeometry& geo,
                           const geom::MagneticField& field, double tau) {
    switch (geo.klass) {
        case geom::FieldClass::Outgoing:
            return kInf;
        case geom::FieldClass::Ingoing:
            return 1.0;
        case geom::FieldClass::Tangent:
            break;
    }
    const double cg = std::cos(field.gamma), sg = std::sin(field.gamma);
    auto f = [&](double xi) {
        const double arg = xi * cg + tau * sg;
        const double quad = xi * sg - tau * cg;
        return spec1d::degennes_mu_refined(arg) + quad * quad;
    };
    // bracket both stationary candidates of the two terms
    const double xi0 = spec1d::constants().xi0;
    double c1 = 0.0, c2 = 0.0;
    if (cg > 1e-8) c1 = (xi0 - tau * sg) / cg;
    if (sg > 1e-8) c2 = tau * cg / sg;
    const double lo = std::min({c1, c2, 0.0}) - 3.0;
    const double hi = std::max({c1, c2, 0.0}) + 3.0;
    auto [x0, f0] = scan_min(f, lo, hi, 0.1);
    GoldenResult g = golden_min(f, x0 - 0.1, x0 + 0.1, 1e-6);
    return std::min(f0, g.value);
}

double s_infinity(const geom::SectorGeometry& geo,
                  const geom::MagneticField& field, const SolveConfig& cfg) {
    (void)field;
    if (geo.klass == geom::FieldClass::Tangent)
        return sigma(std::max(geo.theta_plus, geo.theta_minus), cfg);
    return e_star(geo, cfg);
}

EnergyReport ground_energy(const geom::MagneticField& field, double alpha,
                           const SolveConfig& cfg) {
    if (!(alpha > 0.0 && alpha < kPi))
        throw std::invalid_argument(
            "ground_energy: the FEM path needs alpha in (0, pi)");
    const geom::SectorGeometry geo = geom::face_angles(field, alpha);
    const BandFunction band =
        band_scan(field, alpha, tau_grid(cfg.tau_min, cfg.tau_max, cfg.tau_step), cfg);

    EnergyReport rep;
    rep.E = band.min_value;
    rep.tau_c = band.argmin_tau;
    rep.klass = geo.klass;
    rep.theta_plus = geo.theta_plus;
    rep.theta_minus = geo.theta_minus;
    rep.E_star = e_star(geo, cfg);
    switch (geo.klass) {
        case geom::FieldClass::Outgoing: rep.s_ess_inf = kInf; break;
        case geom::FieldClass::Ingoing: rep.s_ess_inf = 1.0; break;
        case geom::FieldClass::Tangent:
            rep.s_ess_inf = spec1d::constants().theta0;
            break;
    }
    if (geo.klass == geom::FieldClass::Tangent) {
        const double limit = sigma(std::max(geo.theta_plus, geo.theta_minus), cfg);
        rep.s_inf_minus = rep.s_inf_plus = limit;
    } else {
        // the zero line of V^tau drifts toward the lower face as tau -> +inf
        // (canonical b1 >= 0), toward the upper face as tau -> -inf
        rep.s_inf_minus = sigma(geo.theta_plus, cfg);
        rep.s_inf_plus = sigma(geo.theta_minus, cfg);
    }
    rep.margin = std::max(2.0 * cfg.tol, 5e-3);
    rep.strict = rep.E < rep.E_star - rep.margin;
    return rep;
}

GeneralizedEigenfunction extrude_generalized(const fem2d::EigenPair& pair,
                                             double tau_c) {
    GeneralizedEigenfunction g;
    g.tau_c = tau_c;
    g.energy = pair.value;
    g.phi_ref = "";
    return g;
}

} // namespace wedge::band
