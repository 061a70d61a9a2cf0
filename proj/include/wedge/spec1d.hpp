#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

// The two auxiliary 1D eigenproblems:
//  - de Gennes operator -d^2/dt^2 + (t-tau)^2 on (0,inf), Neumann at 0;
//    first eigenvalue mu(tau), minimum Theta0 at xi0 = sqrt(Theta0).
//  - weighted half-line form q_tau(u) = int (|u'|^2 + (r-tau)^2 |u|^2) r dr;
//    first eigenvalue zeta(tau), minimum Xi0 at tau0, eigenfunctions z_tau.
// Discretization: P1 finite elements, exact (Gauss) weight integration,
// Sturm-sequence bisection on the tridiagonal pencil.

namespace wedge::spec1d {

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Grid1D {
    double t_max = 12.0;
    int n = 2001;
    double spacing() const { return t_max / (n - 1); }
};

// t_max = max(12, tau + 10), n = 2001
Grid1D default_grid(double tau);

enum class Weight { Lebesgue, RadialR };

struct Profile1D {
    Grid1D grid;
    std::vector<double> values;   // nodal values, last node = 0 (Dirichlet)
    Weight weight = Weight::RadialR;
    double moment_r2 = 0.0;       // ||r u||^2 in the weighted space
    double moment_sqrt_r = 0.0;   // ||sqrt(r) u||^2
    double norm = 0.0;            // ||u||^2, = 1 for returned eigenfunctions
};

struct MinimizerResult {
    double arg = 0.0;
    double value = 0.0;
    double bracket_lo = 0.0, bracket_hi = 0.0;
    double tol = 0.0;
};

// Lowest eigenvalue of the de Gennes operator truncated to (0, t_max) with
// Dirichlet at t_max. Requires t_max >= tau + 10.
double degennes_mu(double tau, const Grid1D& grid);

// Two nested grids + Richardson extrapolation (O(h^4)); memoized.
double degennes_mu_refined(double tau);

// (xi0, Theta0); coarse scan then golden section on the refined evaluator.
MinimizerResult theta0(double tol);

// Lowest eigenvalue zeta(tau) of the weighted half-line form plus the
// L2_r-normalized eigenfunction with moments filled.
std::pair<double, Profile1D> halfline_zeta(double tau, const Grid1D& grid);

double halfline_zeta_refined(double tau);

// (tau0, Xi0); scan tau in [0,4] step 0.05 then golden section.
MinimizerResult xi0(double tol);

// (||r u||^2, ||sqrt(r) u||^2) by trapezoidal quadrature; requires a
// normalized RadialR profile.
std::pair<double, double> moments(const Profile1D& p);

// q_tau(u) for a RadialR profile: exact element quadrature of the P1 form.
double halfline_form_value(const Profile1D& p, double tau);

// ||u||^2 in L2_r of the P1 interpolant, exact element quadrature.
double weighted_norm2_exact(const Profile1D& p);

struct Constants {
    double theta0 = 0.0;   // min mu
    double xi0 = 0.0;      // argmin mu
    double Xi0 = 0.0;      // min zeta
    double tau0 = 0.0;     // argmin zeta
};

// Computed once per process (tol 1e-7), thread-safe.
const Constants& constants();

// Cached eigenfunction z_{tau0} on a fine grid.
const Profile1D& z_tau0();

} // namespace wedge::spec1d
