#pragma once

#include "wedge/geometry.hpp"

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

// Finite elements on truncated sectors and half-planes: structured quad
// meshes, Galerkin assembly of H(A_par, S_alpha) + V^tau (complex Hermitian,
// real when b3 = 0) and a shift-invert Lanczos eigensolver.

namespace wedge::fem2d {

using cplx = std::complex<double>;

enum class BoundaryTag { NeumannUpper, NeumannLower, DirichletArtificial };

struct BoundaryEdge {
    int a = 0, b = 0;
    BoundaryTag tag = BoundaryTag::DirichletArtificial;
};

struct Mesh2D {
    std::vector<std::array<double, 2>> nodes;
    std::vector<std::array<int, 4>> quads;   // counterclockwise corner ids
    std::vector<BoundaryEdge> boundary_edges;
    double alpha = 0.0;
    double L = 0.0;
};

// Rhombus R(alpha, L): image of an n-by-n grid on (0,L)^2 under rotation by
// -pi/4 then scaling X2 = x2 tan(alpha/2). Wedge faces Neumann, far edges
// Dirichlet; the diagonal on the x1-axis has length sqrt(2) L.
Mesh2D build_rhombus_mesh(double alpha, double L, int n);

// Rectangle (0,L) x (-L,L), n-by-2n square cells; x1 = 0 Neumann, others
// Dirichlet.
Mesh2D build_halfplane_mesh(double L, int n);

// Axis-aligned rectangle, used by the half-plane builder and by tests
// (all_dirichlet = true gives the pure Dirichlet box).
Mesh2D build_rect_mesh(double x0, double x1, double y0, double y1,
                       int nx, int ny, bool all_dirichlet);

struct SparseHermitian {
    int dim = 0;
    std::vector<int> row_ptr, col_idx;   // CSR, full (mirrored) storage
    std::vector<cplx> values;
    bool is_real = false;                // imaginary parts exactly zero

    // Hermitian by construction: assembled from the upper triangle, mirrored.
    static SparseHermitian from_upper_triplets(
        int dim, std::vector<std::array<int, 2>>& idx, std::vector<cplx>& val,
        bool real);

    void matvec(const cplx* x, cplx* y) const;
    std::vector<double> real_values() const;
    double hermitian_defect() const;     // max |A - A*|, 0 by construction
};

struct AssembledSystem {
    SparseHermitian A, M;
    std::vector<int> vertex_dof;                 // mesh node -> dof id or -1
    std::vector<std::array<double, 2>> dof_pos;  // dof -> position
    int order = 1;
};

// Galerkin matrices for Q(u) = int |(-i grad - A_par) u|^2 + V^tau |u|^2 with
// A_par = (0, b3 x1), V^tau = (x1 b2 - x2 b1 - tau)^2; Q1 or Q2 elements with
// 2x2 / 3x3 Gauss quadrature; Dirichlet rows and columns eliminated.
AssembledSystem assemble(const Mesh2D& mesh, const geom::MagneticField& field,
                         double tau, int order);

struct EigenPair {
    double value = 0.0;
    std::vector<cplx> vector;   // M-normalized, over retained dofs
    double residual = 0.0;      // ||A v - lambda M v|| / ||M v||
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg, double best = -1.0)
        : std::runtime_error(msg), best_residual(best) {}
    double best_residual;
};

// k smallest eigenpairs of A v = lambda M v by shift-invert Lanczos with full
// reorthogonalization; sparse LDLT factorization of (A - sigma M), sigma =
// -0.5 initially (the operators are nonnegative, any negative shift is safe).
std::vector<EigenPair> lowest_eigenpairs(const SparseHermitian& A,
                                         const SparseHermitian& M,
                                         int k, double tol);

// Least-squares slope of the log radial envelope of |v| over
// r in [0.2, 0.6] * diam; +infinity means fully decayed (envelope below
// floating-point noise).
double decay_rate(const EigenPair& pair, const AssembledSystem& sys);

} // namespace wedge::fem2d
