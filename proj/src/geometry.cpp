#include "wedge/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wedge::geom {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTangentTol = 1e-10;

// components below rounding noise are treated as exact zeros; b3 = 0 selects
// the real assembly path downstream
double snap_zero(double x) { return std::abs(x) < 1e-15 ? 0.0 : x; }
} // namespace

const char* field_class_name(FieldClass k) {
    switch (k) {
        case FieldClass::Outgoing: return "outgoing";
        case FieldClass::Tangent: return "tangent";
        case FieldClass::Ingoing: return "ingoing";
    }
    return "?";
}

MagneticField from_spherical(double gamma, double theta) {
    if (!(gamma >= 0.0 && gamma <= kHalfPi))
        throw std::invalid_argument("from_spherical: gamma must lie in [0, pi/2]");
    if (!(theta >= 0.0 && theta <= kHalfPi))
        throw std::invalid_argument("from_spherical: theta must lie in [0, pi/2]");
    MagneticField f;
    f.gamma = gamma;
    f.theta = theta;
    f.b1 = snap_zero(std::sin(gamma) * std::sin(theta));
    f.b2 = snap_zero(std::sin(gamma) * std::cos(theta));
    f.b3 = snap_zero(std::cos(gamma));
    return f;
}

std::pair<MagneticField, SignFlips> canonicalize(double bx, double by, double bz) {
    const double norm = std::sqrt(bx * bx + by * by + bz * bz);
    if (!(norm > 0.0))
        throw std::invalid_argument("canonicalize: zero magnetic field");
    SignFlips flips;
    flips.s1 = bx < 0.0 ? -1 : 1;
    flips.s2 = by < 0.0 ? -1 : 1;
    flips.s3 = bz < 0.0 ? -1 : 1;
    MagneticField f;
    f.b1 = snap_zero(std::abs(bx) / norm);
    f.b2 = snap_zero(std::abs(by) / norm);
    f.b3 = snap_zero(std::abs(bz) / norm);
    f.gamma = std::acos(std::min(1.0, f.b3));
    const double sperp = std::hypot(f.b1, f.b2);
    f.theta = sperp > 0.0 ? std::atan2(f.b1, f.b2) : 0.0;
    return {f, flips};
}

double face_angle(double gamma, double theta, double alpha, int sign) {
    const double c = std::cos(theta + sign * alpha / 2.0);
    return std::asin(std::min(1.0, std::abs(std::sin(gamma) * c)));
}

SectorGeometry face_angles(const MagneticField& field, double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0 * kPi) || std::abs(alpha - kPi) < 1e-14)
        throw std::invalid_argument(
            "face_angles: alpha must lie in (0,2pi) away from pi; "
            "the half-plane case is handled by band::sigma");
    SectorGeometry g;
    g.alpha = alpha;
    g.theta_plus = face_angle(field.gamma, field.theta, alpha, +1);
    g.theta_minus = face_angle(field.gamma, field.theta, alpha, -1);
    g.theta0 = std::min(g.theta_plus, g.theta_minus);

    const double tangent_theta = std::abs(kPi - alpha) / 2.0;
    if (field.gamma <= kTangentTol ||
        std::abs(field.theta - tangent_theta) < kTangentTol) {
        g.klass = FieldClass::Tangent;
    } else if (alpha < kPi && field.theta < tangent_theta) {
        g.klass = FieldClass::Outgoing;
    } else {
        g.klass = FieldClass::Ingoing;
    }
    return g;
}

} // namespace wedge::geom
