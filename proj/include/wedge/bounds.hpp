#pragma once

#include "wedge/geometry.hpp"
#include "wedge/spec1d.hpp"

#include <string>
#include <utility>

// Quasimode energy identity in polar coordinates and the derived upper bounds
// for the ground energy at small opening, plus the certified strictness
// threshold (bound-vs-bound comparison with the half-space lower bound).

namespace wedge::bounds {

struct QuasimodeBound {
    double alpha = 0.0;
    double tau_used = 0.0;       // Fourier parameter after rescaling: tau*sqrt(b2)
    double bound = 0.0;          // sum of the four terms below
    double term_q = 0.0;         // b2 * q_tau(u)
    double term_b3 = 0.0;        // (alpha^2/12) ||r u||^2 b3^2 / b2
    double term_aniso = 0.0;     // (1-sinc a)/2 ||r u||^2 (b1^2-b2^2) / b2
    double term_tau = 0.0;       // 2 tau b2 (1-sinc(a/2)) ||sqrt r u||^2
    std::string profile_id;
};

// sinc(x) = sin(x)/x with a series branch for small |x|.
double sinc(double x);
// 1 - sinc(x), cancellation-free for small |x|.
double one_minus_sinc(double x);

// Exact evaluation of the rescaled polar energy of the trial profile u:
// the energy of u^sc(r) = b2^{1/4}-scaled u at Fourier parameter tau*sqrt(b2).
// Requires b2 > 0 and a normalized RadialR profile.
QuasimodeBound quasimode_energy(const geom::MagneticField& field, double alpha,
                                double tau, const spec1d::Profile1D& profile);

// b2 Xi0 + C(B) alpha^2 with the explicit constant assembled from the
// z_{tau0} moments.
double small_angle_upper_bound(const geom::MagneticField& field, double alpha);

// Best Gaussian-profile bound: minimized over the width rho and tau.
// Returns (bound, rho_opt).
std::pair<double, double> gaussian_upper_bound(const geom::MagneticField& field,
                                               double alpha);

// sqrt(Theta0^2 cos^2 t + sin^2 t) with the computed Theta0.
double sigma_lower_bound(double theta);

// Largest alpha* such that for all sampled alpha < alpha* (step 0.01 pi) the
// Gaussian bound lies strictly below the sigma lower bound at theta0(alpha).
double strictness_threshold(const geom::MagneticField& field);

// Normalized Gaussian trial profile u_rho(r) = sqrt(2 rho) exp(-rho r^2 / 2)
// sampled on a grid, moments by quadrature.
spec1d::Profile1D gaussian_profile(double rho);

} // namespace wedge::bounds
