#pragma once

#include <utility>

// Magnetic field and wedge geometry: spherical parametrization of B, sign
// canonicalization, face angles theta+/theta- and the outgoing / tangent /
// ingoing classification that selects the essential-spectrum formula.

namespace wedge::geom {

enum class FieldClass { Outgoing, Tangent, Ingoing };

const char* field_class_name(FieldClass k);

// Unit magnetic field B = (sin g sin t, sin g cos t, cos g) with
// g = angle to the wedge axis, t = angle of the in-plane part to the x2-axis.
struct MagneticField {
    double b1 = 0.0, b2 = 0.0, b3 = 1.0;
    double gamma = 0.0, theta = 0.0;
};

struct SignFlips {
    int s1 = 1, s2 = 1, s3 = 1;
};

struct SectorGeometry {
    double alpha = 0.0;
    double theta_plus = 0.0, theta_minus = 0.0;
    double theta0 = 0.0;           // min(theta_plus, theta_minus)
    FieldClass klass = FieldClass::Tangent;
};

// gamma, theta in [0, pi/2]; throws std::invalid_argument otherwise.
MagneticField from_spherical(double gamma, double theta);

// Normalize a raw vector, take componentwise absolute values and record the
// sign flips; energies downstream are invariant under the flips.
std::pair<MagneticField, SignFlips> canonicalize(double bx, double by, double bz);

// Unoriented angle between B(gamma, theta) and the face at +-alpha/2;
// sign = +1 selects the upper face, -1 the lower face.
double face_angle(double gamma, double theta, double alpha, int sign);

// alpha in (0,2pi)\{pi}; classification per the tangency rule
// theta = |pi - alpha|/2 (or gamma = 0) with tolerance 1e-10.
SectorGeometry face_angles(const MagneticField& field, double alpha);

} // namespace wedge::geom
