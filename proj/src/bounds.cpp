#include "wedge/bounds.hpp"

#include "wedge/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wedge::bounds {

namespace {
constexpr double kPi = std::numbers::pi;

void require_b2(const geom::MagneticField& field, const char* op) {
    if (!(field.b2 > 0.0))
        throw std::invalid_argument(std::string(op) +
            ": b2 must be positive (the small-angle limit operator degenerates)");
}
} // namespace

double sinc(double x) {
    return 1.0 - one_minus_sinc(x);
}

double one_minus_sinc(double x) {
    const double a = std::abs(x);
    if (a < 1e-4) {
        // 1 - sin(x)/x = x^2/6 - x^4/120 + x^6/5040 - ...
        const double x2 = x * x;
        return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return 1.0 - std::sin(x) / x;
}

QuasimodeBound quasimode_energy(const geom::MagneticField& field, double alpha,
                                double tau, const spec1d::Profile1D& profile) {
    require_b2(field, "quasimode_energy");
    if (profile.weight != spec1d::Weight::RadialR)
        throw std::invalid_argument("quasimode_energy: profile must use the r dr weight");

    const double q = spec1d::halfline_form_value(profile, tau);
    const double b1 = field.b1, b2 = field.b2, b3 = field.b3;

    QuasimodeBound b;
    b.alpha = alpha;
    b.tau_used = tau * std::sqrt(b2);
    b.term_q = b2 * q;
    b.term_b3 = alpha * alpha / 12.0 * profile.moment_r2 * b3 * b3 / b2;
    b.term_aniso = 0.5 * one_minus_sinc(alpha) * profile.moment_r2 * (b1 * b1 - b2 * b2) / b2;
    b.term_tau = 2.0 * tau * b2 * one_minus_sinc(alpha / 2.0) * profile.moment_sqrt_r;
    b.bound = b.term_q + b.term_b3 + b.term_aniso + b.term_tau;
    return b;
}

double small_angle_upper_bound(const geom::MagneticField& field, double alpha) {
    require_b2(field, "small_angle_upper_bound");
    if (!(alpha > 0.0 && alpha < kPi))
        throw std::invalid_argument("small_angle_upper_bound: alpha must lie in (0, pi)");
    const auto& k = spec1d::constants();
    const auto& z = spec1d::z_tau0();
    const double b1 = field.b1, b2 = field.b2, b3 = field.b3;
    const double C = (1.0 / 12.0) *
        ((b3 * b3 + std::abs(b1 * b1 - b2 * b2)) / b2 * z.moment_r2 +
         k.tau0 * b2 * z.moment_sqrt_r);
    return b2 * k.Xi0 + C * alpha * alpha;
}

spec1d::Profile1D gaussian_profile(double rho) {
    if (!(rho > 0.0))
        throw std::invalid_argument("gaussian_profile: rho must be positive");
    spec1d::Profile1D p;
    p.grid.t_max = std::max(12.0, 8.0 / std::sqrt(rho));
    p.grid.n = 2001;
    p.weight = spec1d::Weight::RadialR;
    p.values.resize(p.grid.n);
    const double h = p.grid.spacing();
    const double c = std::sqrt(2.0 * rho);
    for (int i = 0; i < p.grid.n; ++i) {
        const double r = i * h;
        p.values[i] = c * std::exp(-0.5 * rho * r * r);
    }
    const double nrm2 = spec1d::weighted_norm2_exact(p);
    const double s = 1.0 / std::sqrt(nrm2);
    for (auto& v : p.values) v *= s;
    p.norm = spec1d::weighted_norm2_exact(p);
    auto [m2, msq] = spec1d::moments(p);
    p.moment_r2 = m2;
    p.moment_sqrt_r = msq;
    return p;
}

std::pair<double, double> gaussian_upper_bound(const geom::MagneticField& field,
                                               double alpha) {
    require_b2(field, "gaussian_upper_bound");
    auto best_over_tau = [&](double rho) {
        const spec1d::Profile1D p = gaussian_profile(rho);
        auto f = [&](double t) { return quasimode_energy(field, alpha, t, p).bound; };
        auto [t0, f0] = scan_min(f, 0.0, 4.0, 0.1);
        GoldenResult g = golden_min(f, std::max(0.0, t0 - 0.1), t0 + 0.1, 1e-5);
        return std::min(f0, g.value);
    };
    // log-spaced coarse scan in rho, then golden section
    double best_rho = 1.0, best_val = best_over_tau(1.0);
    for (double lr = std::log(0.2); lr <= std::log(6.0) + 1e-12; lr += 0.1) {
        const double rho = std::exp(lr);
        const double v = best_over_tau(rho);
        if (v < best_val) { best_val = v; best_rho = rho; }
    }
    GoldenResult g = golden_min([&](double lr) { return best_over_tau(std::exp(lr)); },
                                std::log(best_rho) - 0.1, std::log(best_rho) + 0.1, 1e-4);
    if (g.value < best_val) {
        best_val = g.value;
        best_rho = std::exp(g.arg);
    }
    return {best_val, best_rho};
}

double sigma_lower_bound(double theta) {
    if (!(theta >= 0.0 && theta <= kPi / 2.0))
        throw std::invalid_argument("sigma_lower_bound: theta must lie in [0, pi/2]");
    const double t0 = spec1d::constants().theta0;
    const double c = std::cos(theta), s = std::sin(theta);
    return std::sqrt(t0 * t0 * c * c + s * s);
}

double strictness_threshold(const geom::MagneticField& field) {
    require_b2(field, "strictness_threshold");
    const double step = 0.01 * kPi;
    // descending scan: alpha* is the first sampled alpha (from below) whose
    // certified comparison fails; everything below it is certified strict
    double alpha_star = 0.0;
    for (int k = 1; k <= 99; ++k) {
        const double alpha = k * step;
        const geom::SectorGeometry geo = geom::face_angles(field, alpha);
        const double gb = gaussian_upper_bound(field, alpha).first;
        if (!(gb < sigma_lower_bound(geo.theta0))) return alpha;
        alpha_star = alpha + step;
    }
    return alpha_star;
}

} // namespace wedge::bounds
