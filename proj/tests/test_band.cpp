#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wedge/band.hpp"
#include "wedge/spec1d.hpp"

#include <cmath>
#include <numbers>

using namespace wedge;

namespace {
constexpr double kPi = std::numbers::pi;

band::SolveConfig coarse_cfg() {
    band::SolveConfig cfg;
    cfg.L = 10.0;
    cfg.n = 48;
    cfg.order = 2;
    cfg.tol = 1e-9;
    cfg.halfplane_L = 10.0;
    cfg.halfplane_n = 64;
    return cfg;
}

geom::MagneticField sec6_field() { return geom::from_spherical(kPi / 2, kPi / 4); }
} // namespace

TEST_CASE("axis field: band values satisfy s(tau) = s(0) + tau^2") {
    const auto f = geom::from_spherical(0.0, 0.0);
    auto cfg = coarse_cfg();
    cfg.n = 24;
    cfg.L = 6.0;
    const double alpha = 0.5 * kPi;
    const double s0 = band::band_value(f, alpha, 0.0, cfg);
    for (double tau : {0.7, -1.2}) {
        const double st = band::band_value(f, alpha, tau, cfg);
        CHECK(st - s0 == doctest::Approx(tau * tau).epsilon(1e-9));
    }
}

TEST_CASE("reflection: (b2, tau) -> (-b2, -tau) leaves the band unchanged") {
    auto cfg = coarse_cfg();
    cfg.n = 32;
    cfg.L = 8.0;
    geom::MagneticField f = sec6_field();
    geom::MagneticField g = f;
    g.b2 = -f.b2;
    const double alpha = 0.55 * kPi;
    for (double tau : {0.4, -0.9}) {
        const double s1 = band::band_value(f, alpha, tau, cfg);
        const double s2 = band::band_value(g, alpha, -tau, cfg);
        CHECK(std::abs(s1 - s2) < 1e-9);
    }
}

TEST_CASE("single-point scan degenerates to band_value") {
    auto cfg = coarse_cfg();
    cfg.n = 24;
    cfg.L = 6.0;
    const auto f = sec6_field();
    const double alpha = 0.6 * kPi;
    const auto band = band::band_scan(f, alpha, {0.5}, cfg);
    CHECK(band.taus.size() == 1);
    CHECK(band.min_value == band::band_value(f, alpha, 0.5, cfg));
    CHECK(band.argmin_tau == 0.5);
}

TEST_CASE("scan refinement: argmin stable under grid halving") {
    auto cfg = coarse_cfg();
    cfg.n = 32;
    cfg.L = 8.0;
    const auto f = sec6_field();
    const double alpha = 0.6 * kPi;
    const auto b1 = band::band_scan(f, alpha, band::tau_grid(0.0, 2.0, 0.4), cfg);
    const auto b2 = band::band_scan(f, alpha, band::tau_grid(0.0, 2.0, 0.2), cfg);
    CHECK(std::abs(b1.argmin_tau - b2.argmin_tau) < 0.05);
    CHECK(b1.min_value <= *std::min_element(b1.values.begin(), b1.values.end()) + 1e-12);
}

TEST_CASE("scan failure carries partial results") {
    auto cfg = coarse_cfg();
    cfg.n = 8;
    cfg.L = 6.0;
    cfg.tol = 0.0;   // unattainable residual forces a solver error
    const auto f = sec6_field();
    try {
        band::band_scan(f, 0.5 * kPi, band::tau_grid(0.0, 1.0, 0.5), cfg);
        CHECK(false);
    } catch (const band::ScanError& e) {
        CHECK(e.partial.taus.size() < 3);
    }
}

TEST_CASE("sigma: analytic branches and interior monotonicity") {
    auto cfg = coarse_cfg();
    const double theta0 = spec1d::constants().theta0;
    CHECK(band::sigma(0.0, cfg) == theta0);
    CHECK(band::sigma(0.03, cfg) == theta0);   // near-tangent branch
    CHECK(band::sigma(kPi / 2, cfg) == 1.0);
    const double s1 = band::sigma(0.3, cfg);
    const double s2 = band::sigma(0.8, cfg);
    CHECK(theta0 < s1);
    CHECK(s1 < s2);
    CHECK(s2 < 1.05);
    CHECK_THROWS_AS(band::sigma(-0.1, cfg), std::invalid_argument);
}

TEST_CASE("essential spectrum bottom per field class") {
    // tangent: gamma = pi/4, theta at the tangency angle
    const double alpha = 0.6 * kPi;
    const double tth = std::abs(kPi - alpha) / 2.0;
    const auto ft = geom::from_spherical(kPi / 4, tth);
    const auto gt = geom::face_angles(ft, alpha);
    REQUIRE(gt.klass == geom::FieldClass::Tangent);
    const auto& k = spec1d::constants();
    const double at_min = band::ess_spectrum_bottom(gt, ft, k.xi0 * std::sin(kPi / 4));
    CHECK(at_min == doctest::Approx(k.theta0).epsilon(1e-5));
    for (double tau : {-1.0, 0.0, 0.8, 2.5})
        CHECK(band::ess_spectrum_bottom(gt, ft, tau) >= k.theta0 - 1e-6);

    // ingoing -> 1, outgoing -> +infinity
    const auto f6 = sec6_field();
    const auto gi = geom::face_angles(f6, 0.8 * kPi);
    REQUIRE(gi.klass == geom::FieldClass::Ingoing);
    CHECK(band::ess_spectrum_bottom(gi, f6, 0.3) == 1.0);
    const auto go = geom::face_angles(f6, 0.3 * kPi);
    REQUIRE(go.klass == geom::FieldClass::Outgoing);
    CHECK(std::isinf(band::ess_spectrum_bottom(go, f6, 0.3)));
}

TEST_CASE("large-tau limit formula per class") {
    auto cfg = coarse_cfg();
    // field along the edge: both face angles vanish
    const auto fe = geom::from_spherical(0.0, 0.0);
    const auto ge = geom::face_angles(fe, 0.4 * kPi);
    CHECK(band::s_infinity(ge, fe, cfg) == spec1d::constants().theta0);
    // non-tangent: matches e_star
    const auto f6 = sec6_field();
    const auto gi = geom::face_angles(f6, 0.8 * kPi);
    CHECK(band::s_infinity(gi, f6, cfg) == band::e_star(gi, cfg));
    // theta0 = pi/2 gives E* = 1 (branch check on a synthetic geometry)
    geom::SectorGeometry gn;
    gn.alpha = 0.9 * kPi;
    gn.theta_plus = gn.theta_minus = gn.theta0 = kPi / 2;
    gn.klass = geom::FieldClass::Ingoing;
    CHECK(band::e_star(gn, cfg) == 1.0);
}

TEST_CASE("ground energy report on a small outgoing configuration") {
    auto cfg = coarse_cfg();
    cfg.n = 48;
    cfg.L = 10.0;
    cfg.tau_min = 0.6;
    cfg.tau_max = 1.8;
    cfg.tau_step = 0.2;
    const auto f = sec6_field();
    const auto rep = band::ground_energy(f, 0.3 * kPi, cfg);
    CHECK(rep.klass == geom::FieldClass::Outgoing);
    CHECK(std::isinf(rep.s_ess_inf));
    CHECK(rep.E <= rep.E_star + rep.margin);
    CHECK(rep.strict);   // far from tangency, the gap is wide here
    CHECK(rep.E > 0.5);
    CHECK(rep.E < 0.8);
    CHECK(rep.tau_c > cfg.tau_min);
    CHECK(rep.tau_c < cfg.tau_max);
    // predicted limits are the two face branches
    CHECK(rep.s_inf_minus == band::sigma(rep.theta_plus, cfg));
    CHECK(rep.s_inf_plus == band::sigma(rep.theta_minus, cfg));
}

TEST_CASE("extrude_generalized stores the fiber metadata") {
    fem2d::EigenPair p;
    p.value = 0.61;
    p.vector = {fem2d::cplx(1.0, 0.0)};
    p.residual = 1e-10;
    const auto g0 = band::extrude_generalized(p, 0.0);
    CHECK(g0.tau_c == 0.0);   // tau_c = 0: psi = Phi, constant in x3
    CHECK(g0.energy == 0.61);
    const auto g1 = band::extrude_generalized(p, 1.37);
    CHECK(g1.tau_c == 1.37);
    CHECK(g1.energy == p.value);
}

TEST_CASE("ground energy is numerically continuous in alpha") {
    auto cfg = coarse_cfg();
    cfg.n = 40;
    cfg.L = 8.0;
    cfg.tau_min = 0.4;
    cfg.tau_max = 1.4;
    cfg.tau_step = 0.2;
    const auto f = sec6_field();
    const double e1 = band::ground_energy(f, 0.45 * kPi, cfg).E;
    const double e2 = band::ground_energy(f, 0.45 * kPi + 0.01, cfg).E;
    CHECK(std::abs(e1 - e2) <= 0.05);
}

TEST_CASE("tau grid helper: k/10 for -30 <= k <= 40") {
    const auto taus = band::tau_grid(-3.0, 4.0, 0.1);
    REQUIRE(taus.size() == 71);
    CHECK(taus.front() == doctest::Approx(-3.0));
    CHECK(taus.back() == doctest::Approx(4.0));
    CHECK_THROWS_AS(band::tau_grid(1.0, 0.0, 0.1), std::invalid_argument);
}
