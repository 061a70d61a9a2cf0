#pragma once

#include "wedge/fem2d.hpp"
#include "wedge/geometry.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

// Band functions s(B, S_alpha; tau) of the fibered wedge operator, the ground
// energy E(B, W_alpha) = inf_tau s, the half-space curve sigma(theta), the
// comparison energy E* = sigma(min(theta+, theta-)) and essential-spectrum
// bottoms per field class.

namespace wedge::band {

struct SolveConfig {
    double L = 20.0;           // sector truncation (diagonal sqrt(2) L)
    int n = 160;               // cells per side
    int order = 2;             // Q1 or Q2
    double tol = 1e-8;         // eigensolver residual tolerance
    double halfplane_L = 16.0; // half-plane truncation for sigma
    int halfplane_n = 128;
    double tau_min = -3.0;     // scan window for ground_energy
    double tau_max = 4.0;
    double tau_step = 0.1;
    double refine_tol = 1e-4;  // golden-section tolerance in tau
};

struct BandFunction {
    std::vector<double> taus;        // sorted
    std::vector<double> values;
    std::vector<double> residuals;
    double argmin_tau = 0.0;         // refined minimizer
    double min_value = 0.0;
    SolveConfig cfg;
};

// A scan failure carries the points finished so far.
struct ScanError : std::runtime_error {
    ScanError(const std::string& msg, BandFunction partial_)
        : std::runtime_error(msg), partial(std::move(partial_)) {}
    BandFunction partial;
};

struct EnergyReport {
    double E = 0.0;
    double E_star = 0.0;
    double s_ess_inf = 0.0;          // +infinity in the outgoing case
    double s_inf_minus = 0.0;        // predicted limit at tau -> -infinity
    double s_inf_plus = 0.0;         // predicted limit at tau -> +infinity
    geom::FieldClass klass = geom::FieldClass::Tangent;
    bool strict = false;             // E < E* - margin
    double margin = 0.0;
    double tau_c = 0.0;
    double theta_plus = 0.0, theta_minus = 0.0;
};

// Worker count for scans: WEDGE_SPECTRA_THREADS if set, else hardware.
int worker_count();

// s(B, S_alpha; tau) on R(alpha, L); cached by (field, alpha, tau, cfg).
double band_value(const geom::MagneticField& field, double alpha, double tau,
                  const SolveConfig& cfg);

// Parallel evaluation over the grid, then golden-section refinement around
// the discrete argmin (kept only if it improves on the coarse minimum).
BandFunction band_scan(const geom::MagneticField& field, double alpha,
                       const std::vector<double>& taus, const SolveConfig& cfg);

EnergyReport ground_energy(const geom::MagneticField& field, double alpha,
                           const SolveConfig& cfg);

// Half-space curve: sigma(0) = Theta0 and sigma(pi/2) = 1 analytically;
// otherwise the lowest eigenvalue of -Lap + (x1 cos t - x2 sin t)^2 on the
// half-plane with Neumann at x1 = 0. Near-tangent t < 0.05 falls back to the
// t = 0 branch (truncation cannot resolve the boundary-stretched states).
double sigma(double theta, const SolveConfig& cfg);

// E* = sigma(theta0) = min over the singular chains, capped by E(B,R^3) = 1.
double e_star(const geom::SectorGeometry& geo, const SolveConfig& cfg);

// Bottom of the essential spectrum of the fiber at tau:
// outgoing -> +infinity (compact resolvent); ingoing -> 1; tangent ->
// inf_xi mu(xi cos g + tau sin g) + (xi sin g - tau cos g)^2.
double ess_spectrum_bottom(const geom::SectorGeometry& geo,
                           const geom::MagneticField& field, double tau);

// Large-|tau| limit formula: tangent -> sigma(max(theta+, theta-)),
// otherwise E*.
double s_infinity(const geom::SectorGeometry& geo,
                  const geom::MagneticField& field, const SolveConfig& cfg);

// Descriptor of the generalized eigenfunction
// psi(x) = exp(i tau_c x3) Phi(x1, x2); no 3D sampling.
struct GeneralizedEigenfunction {
    double tau_c = 0.0;
    double energy = 0.0;
    std::string phi_ref;   // where the exported Phi lives, if anywhere
};

GeneralizedEigenfunction extrude_generalized(const fem2d::EigenPair& pair,
                                             double tau_c);

// uniform grid helper; the reference runs use tau = k/10, -30 <= k <= 40
std::vector<double> tau_grid(double tau_min, double tau_max, double step);

} // namespace wedge::band
