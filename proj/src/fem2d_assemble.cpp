#include "wedge/fem2d.hpp"
#include "wedge/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace wedge::fem2d {

namespace {

struct GaussRule {
    std::vector<double> x, w;   // 1D points / weights on [-1,1]
};

GaussRule gauss_rule(int npts) {
    GaussRule r;
    if (npts == 2) {
        const double a = 1.0 / std::sqrt(3.0);
        r.x = {-a, a};
        r.w = {1.0, 1.0};
    } else {
        const double a = std::sqrt(3.0 / 5.0);
        r.x = {-a, 0.0, a};
        r.w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    }
    return r;
}

// 1D quadratic Lagrange basis on {-1, 0, 1}
inline void lag2(double x, double* l, double* dl) {
    l[0] = 0.5 * x * (x - 1.0);
    l[1] = 1.0 - x * x;
    l[2] = 0.5 * x * (x + 1.0);
    dl[0] = x - 0.5;
    dl[1] = -2.0 * x;
    dl[2] = x + 0.5;
}

// local (ia, ib) axis indices of the 9 Q2 nodes: corners, edge midpoints, center
constexpr int kQ2Axis[9][2] = {{0, 0}, {2, 0}, {2, 2}, {0, 2},
                               {1, 0}, {2, 1}, {1, 2}, {0, 1}, {1, 1}};

struct ShapeTable {
    int nloc = 4;
    // per quadrature point: N[nloc], dN[nloc][2] (reference derivatives)
    std::vector<std::array<double, 9>> N;
    std::vector<std::array<std::array<double, 2>, 9>> dN;
    std::vector<double> w;                       // tensor weights
    std::vector<std::array<double, 2>> ref_pt;   // (xi, eta)
};

ShapeTable make_shapes(int order) {
    const GaussRule g = gauss_rule(order == 1 ? 2 : 3);
    ShapeTable tab;
    tab.nloc = order == 1 ? 4 : 9;
    for (std::size_t a = 0; a < g.x.size(); ++a) {
        for (std::size_t b = 0; b < g.x.size(); ++b) {
            const double xi = g.x[a], eta = g.x[b];
            std::array<double, 9> N{};
            std::array<std::array<double, 2>, 9> dN{};
            if (order == 1) {
                const double xm = 1.0 - xi, xp = 1.0 + xi;
                const double em = 1.0 - eta, ep = 1.0 + eta;
                N = {0.25 * xm * em, 0.25 * xp * em, 0.25 * xp * ep, 0.25 * xm * ep,
                     0, 0, 0, 0, 0};
                dN[0] = {{-0.25 * em, -0.25 * xm}};
                dN[1] = {{0.25 * em, -0.25 * xp}};
                dN[2] = {{0.25 * ep, 0.25 * xp}};
                dN[3] = {{-0.25 * ep, 0.25 * xm}};
            } else {
                double lx[3], dlx[3], le[3], dle[3];
                lag2(xi, lx, dlx);
                lag2(eta, le, dle);
                for (int k = 0; k < 9; ++k) {
                    const int ia = kQ2Axis[k][0], ib = kQ2Axis[k][1];
                    N[k] = lx[ia] * le[ib];
                    dN[k] = {{dlx[ia] * le[ib], lx[ia] * dle[ib]}};
                }
            }
            tab.N.push_back(N);
            tab.dN.push_back(dN);
            tab.w.push_back(g.w[a] * g.w[b]);
            tab.ref_pt.push_back({xi, eta});
        }
    }
    return tab;
}

struct EdgeKey {
    int a, b;
    bool operator==(const EdgeKey& o) const { return a == o.a && b == o.b; }
};
struct EdgeHash {
    std::size_t operator()(const EdgeKey& k) const {
        return std::hash<std::uint64_t>()((std::uint64_t(k.a) << 32) | std::uint64_t(k.b));
    }
};

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

void validate_boundary(const Mesh2D& mesh) {
    std::unordered_map<EdgeKey, int, EdgeHash> uses;
    for (const auto& q : mesh.quads)
        for (int e = 0; e < 4; ++e)
            ++uses[edge_key(q[e], q[(e + 1) % 4])];
    std::unordered_map<EdgeKey, int, EdgeHash> tagged;
    for (const auto& be : mesh.boundary_edges)
        ++tagged[edge_key(be.a, be.b)];
    for (const auto& [k, cnt] : uses) {
        if (cnt == 1) {
            auto it = tagged.find(k);
            if (it == tagged.end())
                throw std::invalid_argument("assemble: untagged boundary edge");
            if (it->second != 1)
                throw std::invalid_argument("assemble: boundary edge tagged more than once");
        } else if (tagged.count(k)) {
            throw std::invalid_argument("assemble: interior edge carries a boundary tag");
        }
    }
    if (tagged.size() != static_cast<std::size_t>(
            std::count_if(uses.begin(), uses.end(),
                          [](const auto& p) { return p.second == 1; })))
        throw std::invalid_argument("assemble: boundary tag list does not match the mesh");
}

} // namespace

SparseHermitian SparseHermitian::from_upper_triplets(
    int dim, std::vector<std::array<int, 2>>& idx, std::vector<cplx>& val,
    bool real) {
    // mirror the strict upper entries
    const std::size_t upper = idx.size();
    for (std::size_t k = 0; k < upper; ++k) {
        if (idx[k][0] != idx[k][1]) {
            idx.push_back({idx[k][1], idx[k][0]});
            val.push_back(std::conj(val[k]));
        } else {
            val[k] = cplx(val[k].real(), 0.0);   // exact real diagonal
        }
    }
    // counting sort by row, then per-row sort by column with accumulation
    SparseHermitian m;
    m.dim = dim;
    m.is_real = real;
    std::vector<int> count(dim + 1, 0);
    for (const auto& ij : idx) ++count[ij[0] + 1];
    for (int r = 0; r < dim; ++r) count[r + 1] += count[r];
    std::vector<int> pos = count;
    std::vector<int> col(idx.size());
    std::vector<cplx> v(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const int p = pos[idx[k][0]]++;
        col[p] = idx[k][1];
        v[p] = val[k];
    }
    m.row_ptr.assign(dim + 1, 0);
    std::vector<int> order;
    for (int r = 0; r < dim; ++r) {
        const int lo = count[r], hi = count[r + 1];
        order.resize(hi - lo);
        for (int k = 0; k < hi - lo; ++k) order[k] = lo + k;
        std::sort(order.begin(), order.end(),
                  [&](int x, int y) { return col[x] < col[y]; });
        int prev_col = -1;
        for (int k : order) {
            if (col[k] == prev_col) {
                m.values.back() += v[k];
            } else {
                m.col_idx.push_back(col[k]);
                m.values.push_back(v[k]);
                prev_col = col[k];
            }
        }
        m.row_ptr[r + 1] = static_cast<int>(m.col_idx.size());
    }
    return m;
}

void SparseHermitian::matvec(const cplx* x, cplx* y) const {
    kernels::spmv(row_ptr.data(), col_idx.data(), values.data(), x, y, dim);
}

std::vector<double> SparseHermitian::real_values() const {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i].real();
    return out;
}

double SparseHermitian::hermitian_defect() const {
    double worst = 0.0;
    for (int r = 0; r < dim; ++r) {
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            const int c = col_idx[k];
            // find (c, r)
            cplx mirror{0.0, 0.0};
            for (int k2 = row_ptr[c]; k2 < row_ptr[c + 1]; ++k2)
                if (col_idx[k2] == r) { mirror = values[k2]; break; }
            worst = std::max(worst, std::abs(values[k] - std::conj(mirror)));
        }
    }
    return worst;
}

AssembledSystem assemble(const Mesh2D& mesh, const geom::MagneticField& field,
                         double tau, int order) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("assemble: order must be 1 or 2");
    validate_boundary(mesh);

    const int nv = static_cast<int>(mesh.nodes.size());
    const int nq = static_cast<int>(mesh.quads.size());
    const bool real_path = (field.b3 == 0.0);

    // global dof ids before elimination: vertices, then (Q2) edges + centers
    std::unordered_map<EdgeKey, int, EdgeHash> edge_dof;
    int ndof_full = nv;
    std::vector<std::array<int, 9>> elem_dofs(nq);
    for (int e = 0; e < nq; ++e) {
        const auto& q = mesh.quads[e];
        for (int c = 0; c < 4; ++c) elem_dofs[e][c] = q[c];
        if (order == 2) {
            for (int s = 0; s < 4; ++s) {
                const EdgeKey k = edge_key(q[s], q[(s + 1) % 4]);
                auto it = edge_dof.find(k);
                if (it == edge_dof.end())
                    it = edge_dof.emplace(k, nv + static_cast<int>(edge_dof.size())).first;
                elem_dofs[e][4 + s] = it->second;
            }
        }
    }
    if (order == 2) {
        const int nedge = static_cast<int>(edge_dof.size());
        for (int e = 0; e < nq; ++e) elem_dofs[e][8] = nv + nedge + e;
        ndof_full = nv + nedge + nq;
    }

    // Dirichlet elimination
    std::vector<char> dirichlet(ndof_full, 0);
    for (const auto& be : mesh.boundary_edges) {
        if (be.tag != BoundaryTag::DirichletArtificial) continue;
        dirichlet[be.a] = dirichlet[be.b] = 1;
        if (order == 2) dirichlet[edge_dof.at(edge_key(be.a, be.b))] = 1;
    }
    std::vector<int> dof_map(ndof_full, -1);
    int ndof = 0;
    for (int i = 0; i < ndof_full; ++i)
        if (!dirichlet[i]) dof_map[i] = ndof++;

    AssembledSystem sys;
    sys.order = order;
    sys.vertex_dof.assign(nv, -1);
    for (int i = 0; i < nv; ++i) sys.vertex_dof[i] = dof_map[i];
    sys.dof_pos.assign(ndof, {0.0, 0.0});
    for (int i = 0; i < nv; ++i)
        if (dof_map[i] >= 0) sys.dof_pos[dof_map[i]] = mesh.nodes[i];
    if (order == 2) {
        for (const auto& [k, id] : edge_dof) {
            if (dof_map[id] < 0) continue;
            sys.dof_pos[dof_map[id]] = {
                0.5 * (mesh.nodes[k.a][0] + mesh.nodes[k.b][0]),
                0.5 * (mesh.nodes[k.a][1] + mesh.nodes[k.b][1])};
        }
        for (int e = 0; e < nq; ++e) {
            const int id = nv + static_cast<int>(edge_dof.size()) + e;
            if (dof_map[id] < 0) continue;
            const auto& q = mesh.quads[e];
            std::array<double, 2> c{0.0, 0.0};
            for (int s = 0; s < 4; ++s) {
                c[0] += 0.25 * mesh.nodes[q[s]][0];
                c[1] += 0.25 * mesh.nodes[q[s]][1];
            }
            sys.dof_pos[dof_map[id]] = c;
        }
    }

    const ShapeTable tab = make_shapes(order);
    const int nloc = tab.nloc;

    std::vector<std::array<int, 2>> a_idx, m_idx;
    std::vector<cplx> a_val, m_val;
    a_idx.reserve(std::size_t(nq) * nloc * nloc / 2);
    a_val.reserve(a_idx.capacity());
    m_idx.reserve(a_idx.capacity());
    m_val.reserve(a_idx.capacity());

    std::vector<std::array<double, 2>> grad(nloc);
    for (int e = 0; e < nq; ++e) {
        const auto& q = mesh.quads[e];
        const std::array<double, 2> X[4] = {mesh.nodes[q[0]], mesh.nodes[q[1]],
                                            mesh.nodes[q[2]], mesh.nodes[q[3]]};
        double Aloc_re[9][9] = {};
        double Aloc_im[9][9] = {};
        double Mloc[9][9] = {};
        for (std::size_t qp = 0; qp < tab.w.size(); ++qp) {
            const double xi = tab.ref_pt[qp][0], eta = tab.ref_pt[qp][1];
            // bilinear geometry map from the 4 corners
            const double dg[4][2] = {{-0.25 * (1 - eta), -0.25 * (1 - xi)},
                                     {0.25 * (1 - eta), -0.25 * (1 + xi)},
                                     {0.25 * (1 + eta), 0.25 * (1 + xi)},
                                     {-0.25 * (1 + eta), 0.25 * (1 - xi)}};
            const double Ng[4] = {0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
                                  0.25 * (1 + xi) * (1 + eta), 0.25 * (1 - xi) * (1 + eta)};
            double J[2][2] = {{0, 0}, {0, 0}};
            double x1 = 0.0, x2 = 0.0;
            for (int c = 0; c < 4; ++c) {
                J[0][0] += X[c][0] * dg[c][0];
                J[0][1] += X[c][0] * dg[c][1];
                J[1][0] += X[c][1] * dg[c][0];
                J[1][1] += X[c][1] * dg[c][1];
                x1 += X[c][0] * Ng[c];
                x2 += X[c][1] * Ng[c];
            }
            const double detJ = J[0][0] * J[1][1] - J[0][1] * J[1][0];
            if (!(detJ > 0.0))
                throw std::invalid_argument("assemble: inverted element (detJ <= 0)");
            const double inv[2][2] = {{J[1][1] / detJ, -J[0][1] / detJ},
                                      {-J[1][0] / detJ, J[0][0] / detJ}};
            for (int k = 0; k < nloc; ++k) {
                grad[k][0] = tab.dN[qp][k][0] * inv[0][0] + tab.dN[qp][k][1] * inv[1][0];
                grad[k][1] = tab.dN[qp][k][0] * inv[0][1] + tab.dN[qp][k][1] * inv[1][1];
            }
            const double a2 = field.b3 * x1;
            const double vpot = (x1 * field.b2 - x2 * field.b1 - tau);
            const double V = vpot * vpot;
            if (!std::isfinite(V))
                throw std::runtime_error("assemble: non-finite quadrature value");
            const double wq = tab.w[qp] * detJ;
            const double c0 = wq * (V + a2 * a2);
            for (int i = 0; i < nloc; ++i) {
                for (int j = i; j < nloc; ++j) {
                    const double gg = grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1];
                    const double nn = tab.N[qp][i] * tab.N[qp][j];
                    Aloc_re[i][j] += wq * gg + c0 * nn;
                    Mloc[i][j] += wq * nn;
                }
                if (!real_path) {
                    // i A2 (d2 phi_col * phi_row - phi_col * d2 phi_row)
                    for (int j = 0; j < nloc; ++j)
                        Aloc_im[i][j] += wq * a2 *
                            (tab.N[qp][i] * grad[j][1] - tab.N[qp][j] * grad[i][1]);
                }
            }
        }
        for (int i = 0; i < nloc; ++i) {
            const int gi = dof_map[elem_dofs[e][i]];
            if (gi < 0) continue;
            for (int j = i; j < nloc; ++j) {
                const int gj = dof_map[elem_dofs[e][j]];
                if (gj < 0) continue;
                const double re = Aloc_re[i][j];
                const double im = real_path ? 0.0 : Aloc_im[i][j];
                // push into the upper triangle of the global matrix
                if (gi <= gj) {
                    a_idx.push_back({gi, gj});
                    a_val.push_back(cplx(re, im));
                    m_idx.push_back({gi, gj});
                    m_val.push_back(cplx(Mloc[i][j], 0.0));
                } else {
                    a_idx.push_back({gj, gi});
                    a_val.push_back(cplx(re, -im));
                    m_idx.push_back({gj, gi});
                    m_val.push_back(cplx(Mloc[i][j], 0.0));
                }
            }
        }
    }

    sys.A = SparseHermitian::from_upper_triplets(ndof, a_idx, a_val, real_path);
    sys.M = SparseHermitian::from_upper_triplets(ndof, m_idx, m_val, true);
    return sys;
}

} // namespace wedge::fem2d
