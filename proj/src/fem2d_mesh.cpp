#include "wedge/fem2d.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wedge::fem2d {

namespace {
constexpr double kPi = std::numbers::pi;

int node_id(int i, int j, int ny) { return i * (ny + 1) + j; }
} // namespace

Mesh2D build_rhombus_mesh(double alpha, double L, int n) {
    if (!(alpha < kPi))
        throw std::invalid_argument("build_rhombus_mesh: alpha must be < pi (map degenerates)");
    if (!(alpha >= 0.02 * kPi))
        throw std::invalid_argument(
            "build_rhombus_mesh: alpha < 0.02*pi is ill-conditioned; "
            "use the bounds module for small openings");
    if (!(L > 0.0)) throw std::invalid_argument("build_rhombus_mesh: L must be > 0");
    if (n < 1) throw std::invalid_argument("build_rhombus_mesh: need n >= 1 cells");

    const double c = 1.0 / std::sqrt(2.0);
    const double t = std::tan(alpha / 2.0);
    const double h = L / n;

    Mesh2D mesh;
    mesh.alpha = alpha;
    mesh.L = L;
    mesh.nodes.reserve((n + 1) * (n + 1));
    for (int i = 0; i <= n; ++i) {       // u index
        for (int j = 0; j <= n; ++j) {   // v index
            const double u = i * h, v = j * h;
            mesh.nodes.push_back({c * (u + v), c * t * (v - u)});
        }
    }
    mesh.quads.reserve(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            mesh.quads.push_back({node_id(i, j, n), node_id(i + 1, j, n),
                                  node_id(i + 1, j + 1, n), node_id(i, j + 1, n)});

    for (int j = 0; j < n; ++j) {
        // u = 0: upper wedge face (x2 >= 0); v = 0: lower face
        mesh.boundary_edges.push_back({node_id(0, j, n), node_id(0, j + 1, n),
                                       BoundaryTag::NeumannUpper});
        mesh.boundary_edges.push_back({node_id(j, 0, n), node_id(j + 1, 0, n),
                                       BoundaryTag::NeumannLower});
        mesh.boundary_edges.push_back({node_id(n, j, n), node_id(n, j + 1, n),
                                       BoundaryTag::DirichletArtificial});
        mesh.boundary_edges.push_back({node_id(j, n, n), node_id(j + 1, n, n),
                                       BoundaryTag::DirichletArtificial});
    }
    return mesh;
}

Mesh2D build_rect_mesh(double x0, double x1, double y0, double y1,
                       int nx, int ny, bool all_dirichlet) {
    if (!(x1 > x0 && y1 > y0))
        throw std::invalid_argument("build_rect_mesh: empty rectangle");
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("build_rect_mesh: need at least one cell per side");
    const double hx = (x1 - x0) / nx;
    const double hy = (y1 - y0) / ny;
    const bool centered = (y0 == -y1) && (ny % 2 == 0);

    Mesh2D mesh;
    mesh.L = x1 - x0;
    mesh.nodes.reserve((nx + 1) * (ny + 1));
    for (int i = 0; i <= nx; ++i) {
        for (int j = 0; j <= ny; ++j) {
            // centered generation keeps the node set exactly symmetric in x2
            const double y = centered ? (j - ny / 2) * hy : y0 + j * hy;
            mesh.nodes.push_back({x0 + i * hx, y});
        }
    }
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            mesh.quads.push_back({node_id(i, j, ny), node_id(i + 1, j, ny),
                                  node_id(i + 1, j + 1, ny), node_id(i, j + 1, ny)});

    auto tag_left = [&](int j) {
        if (all_dirichlet) return BoundaryTag::DirichletArtificial;
        const double ymid = 0.5 * (mesh.nodes[node_id(0, j, ny)][1] +
                                   mesh.nodes[node_id(0, j + 1, ny)][1]);
        return ymid >= 0.0 ? BoundaryTag::NeumannUpper : BoundaryTag::NeumannLower;
    };
    for (int j = 0; j < ny; ++j) {
        mesh.boundary_edges.push_back({node_id(0, j, ny), node_id(0, j + 1, ny), tag_left(j)});
        mesh.boundary_edges.push_back({node_id(nx, j, ny), node_id(nx, j + 1, ny),
                                       BoundaryTag::DirichletArtificial});
    }
    for (int i = 0; i < nx; ++i) {
        mesh.boundary_edges.push_back({node_id(i, 0, ny), node_id(i + 1, 0, ny),
                                       BoundaryTag::DirichletArtificial});
        mesh.boundary_edges.push_back({node_id(i, ny, ny), node_id(i + 1, ny, ny),
                                       BoundaryTag::DirichletArtificial});
    }
    return mesh;
}

Mesh2D build_halfplane_mesh(double L, int n) {
    if (!(L > 0.0)) throw std::invalid_argument("build_halfplane_mesh: L must be > 0");
    if (n < 1) throw std::invalid_argument("build_halfplane_mesh: need n >= 1 cells");
    return build_rect_mesh(0.0, L, -L, L, n, 2 * n, false);
}

} // namespace wedge::fem2d
