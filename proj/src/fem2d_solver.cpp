#include "wedge/fem2d.hpp"
#include "wedge/kernels.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace wedge::fem2d {

namespace {

template <class Scalar>
struct Csr {
    int dim = 0;
    const int* row_ptr = nullptr;
    const int* col_idx = nullptr;
    std::vector<Scalar> vals;

    void matvec(const Scalar* x, Scalar* y) const {
        kernels::spmv(row_ptr, col_idx, vals.data(), x, y, dim);
    }
};

template <class Scalar>
Csr<Scalar> make_csr(const SparseHermitian& m);

template <>
Csr<double> make_csr<double>(const SparseHermitian& m) {
    Csr<double> c;
    c.dim = m.dim;
    c.row_ptr = m.row_ptr.data();
    c.col_idx = m.col_idx.data();
    c.vals = m.real_values();
    return c;
}

template <>
Csr<cplx> make_csr<cplx>(const SparseHermitian& m) {
    Csr<cplx> c;
    c.dim = m.dim;
    c.row_ptr = m.row_ptr.data();
    c.col_idx = m.col_idx.data();
    c.vals = m.values;
    return c;
}

template <class Scalar>
Eigen::SparseMatrix<Scalar> shifted_matrix(const Csr<Scalar>& A,
                                           const Csr<Scalar>& M, double sigma) {
    using Trip = Eigen::Triplet<Scalar>;
    std::vector<Trip> trips;
    trips.reserve(A.vals.size() + M.vals.size());
    for (int r = 0; r < A.dim; ++r)
        for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
            trips.emplace_back(r, A.col_idx[k], A.vals[k]);
    for (int r = 0; r < M.dim; ++r)
        for (int k = M.row_ptr[r]; k < M.row_ptr[r + 1]; ++k)
            trips.emplace_back(r, M.col_idx[k], Scalar(-sigma) * M.vals[k]);
    Eigen::SparseMatrix<Scalar> C(A.dim, A.dim);
    C.setFromTriplets(trips.begin(), trips.end());
    return C;
}

inline double re_of(double x) { return x; }
inline double re_of(cplx x) { return x.real(); }
inline double conj_of(double x) { return x; }
inline cplx conj_of(cplx x) { return std::conj(x); }

template <class Scalar>
Scalar vdot(const std::vector<Scalar>& x, const std::vector<Scalar>& y);

template <>
double vdot(const std::vector<double>& x, const std::vector<double>& y) {
    return kernels::dot(x.data(), y.data(), x.size());
}
template <>
cplx vdot(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    return kernels::dotc(x.data(), y.data(), x.size());
}

template <class Scalar>
void fill_start_vector(std::vector<Scalar>& v);

template <>
void fill_start_vector(std::vector<double>& v) {
    std::mt19937 rng(42u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& x : v) x = dist(rng);
}
template <>
void fill_start_vector(std::vector<cplx>& v) {
    std::mt19937 rng(42u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& x : v) {
        const double re = dist(rng);
        const double im = dist(rng);
        x = cplx(re, im);
    }
}

template <class Scalar>
std::vector<EigenPair> lanczos(const SparseHermitian& Ah,
                               const SparseHermitian& Mh, int k, double tol) {
    const int n = Ah.dim;
    const Csr<Scalar> A = make_csr<Scalar>(Ah);
    const Csr<Scalar> M = make_csr<Scalar>(Mh);

    double sigma = -0.5;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<Scalar>> ldlt;
    int attempt = 0;
    for (;; ++attempt) {
        ldlt.compute(shifted_matrix(A, M, sigma));
        if (ldlt.info() == Eigen::Success) break;
        if (attempt >= 3)
            throw SolverError("lowest_eigenpairs: LDLT factorization failed");
        sigma *= 4.0;   // move further below the spectrum and retry
    }

    const int m_max = std::max(60, 8 * k + 40);
    std::vector<std::vector<Scalar>> V;
    std::vector<double> alpha, beta;   // Lanczos tridiagonal
    std::vector<Scalar> w(n), z(n), y(n);

    V.emplace_back(n);
    fill_start_vector(V[0]);
    M.matvec(V[0].data(), z.data());
    {
        const double nv = std::sqrt(re_of(vdot(V[0], z)));
        kernels::scal(Scalar(1.0 / nv), V[0].data(), n);
    }

    std::vector<EigenPair> best;
    double best_res = std::numeric_limits<double>::infinity();

    Eigen::VectorXd ritz_vals;
    Eigen::MatrixXd ritz_vecs;

    for (int j = 0; j < m_max; ++j) {
        // w = (A - sigma M)^{-1} M v_j
        M.matvec(V[j].data(), z.data());
        Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> zmap(z.data(), n);
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sol = ldlt.solve(zmap);
        std::copy(sol.data(), sol.data() + n, w.begin());

        const double aj = re_of(vdot(z, w));
        alpha.push_back(aj);
        kernels::axpy(Scalar(-aj), V[j].data(), w.data(), n);
        if (j > 0) kernels::axpy(Scalar(-beta[j - 1]), V[j - 1].data(), w.data(), n);

        // full reorthogonalization in the M inner product, two passes
        for (int pass = 0; pass < 2; ++pass) {
            M.matvec(w.data(), y.data());
            for (int i = 0; i <= j; ++i) {
                const Scalar c = vdot(V[i], y);
                kernels::axpy(-c, V[i].data(), w.data(), n);
            }
        }
        M.matvec(w.data(), y.data());
        const double bj = std::sqrt(std::max(0.0, re_of(vdot(w, y))));

        // Ritz values of the tridiagonal section
        const int mdim = j + 1;
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(mdim, mdim);
        for (int i = 0; i < mdim; ++i) T(i, i) = alpha[i];
        for (int i = 0; i + 1 < mdim; ++i) {
            T(i, i + 1) = beta[i];
            T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        ritz_vals = es.eigenvalues();   // ascending; largest theta = smallest lambda
        ritz_vecs = es.eigenvectors();

        bool maybe_done = mdim >= k;
        if (maybe_done) {
            for (int t = 0; t < k; ++t) {
                const int col = mdim - 1 - t;
                const double theta = ritz_vals(col);
                if (theta <= 0.0 || bj * std::abs(ritz_vecs(mdim - 1, col)) >
                                        0.5 * tol * theta) {
                    maybe_done = false;
                    break;
                }
            }
        }
        const bool exhausted = bj < 1e-13;

        if (maybe_done || exhausted || j == m_max - 1) {
            // explicit residual check on the candidate pairs
            std::vector<EigenPair> pairs;
            double worst = 0.0;
            for (int t = 0; t < k && t < mdim; ++t) {
                const int col = mdim - 1 - t;
                const double theta = ritz_vals(col);
                if (theta <= 0.0) { worst = std::numeric_limits<double>::infinity(); break; }
                EigenPair p;
                p.value = sigma + 1.0 / theta;
                std::vector<Scalar> x(n, Scalar(0));
                for (int i = 0; i < mdim; ++i)
                    kernels::axpy(Scalar(ritz_vecs(i, col)), V[i].data(), x.data(), n);
                // M-normalize
                M.matvec(x.data(), z.data());
                const double nx = std::sqrt(re_of(vdot(x, z)));
                kernels::scal(Scalar(1.0 / nx), x.data(), n);
                // residual ||A x - lambda M x|| / ||M x||
                M.matvec(x.data(), z.data());
                A.matvec(x.data(), y.data());
                kernels::axpy(Scalar(-p.value), z.data(), y.data(), n);
                const double rnum = std::sqrt(kernels::norm2sq(y.data(), n));
                const double rden = std::sqrt(kernels::norm2sq(z.data(), n));
                p.residual = rnum / rden;
                worst = std::max(worst, p.residual);
                // deterministic phase: largest-magnitude entry real positive
                std::size_t imax = 0;
                for (std::size_t i = 1; i < x.size(); ++i)
                    if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
                const Scalar piv = x[imax];
                const double apiv = std::abs(piv);
                if (apiv > 0.0) kernels::scal(conj_of(piv) / Scalar(apiv), x.data(), n);
                p.vector.assign(x.size(), cplx(0, 0));
                for (std::size_t i = 0; i < x.size(); ++i) p.vector[i] = cplx(x[i]);
                pairs.push_back(std::move(p));
            }
            if (!pairs.empty() && worst < best_res) {
                best = pairs;
                best_res = worst;
            }
            if (worst <= tol && static_cast<int>(pairs.size()) == k) {
                std::sort(best.begin(), best.end(),
                          [](const EigenPair& a, const EigenPair& b) {
                              return a.value < b.value;
                          });
                return best;
            }
            if (exhausted || j == m_max - 1) break;
        }

        if (exhausted) break;
        beta.push_back(bj);
        V.emplace_back(n);
        for (int i = 0; i < n; ++i) V[j + 1][i] = w[i] / bj;
    }

    if (static_cast<int>(best.size()) == k && best_res <= tol) {
        std::sort(best.begin(), best.end(),
                  [](const EigenPair& a, const EigenPair& b) {
                      return a.value < b.value;
                  });
        return best;
    }
    throw SolverError("lowest_eigenpairs: no convergence after max iterations "
                      "(best residual " + std::to_string(best_res) + ")",
                      best_res);
}

} // namespace

std::vector<EigenPair> lowest_eigenpairs(const SparseHermitian& A,
                                         const SparseHermitian& M,
                                         int k, double tol) {
    if (k < 1) throw std::invalid_argument("lowest_eigenpairs: k must be >= 1");
    if (A.dim != M.dim || A.dim == 0)
        throw std::invalid_argument("lowest_eigenpairs: dimension mismatch");
    if (A.is_real && M.is_real) return lanczos<double>(A, M, k, tol);
    return lanczos<cplx>(A, M, k, tol);
}

double decay_rate(const EigenPair& pair, const AssembledSystem& sys) {
    const std::size_t n = pair.vector.size();
    if (n != sys.dof_pos.size())
        throw std::invalid_argument("decay_rate: eigenpair does not match the system");
    double peak = 0.0, diam = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        peak = std::max(peak, std::abs(pair.vector[i]));
        diam = std::max(diam, std::hypot(sys.dof_pos[i][0], sys.dof_pos[i][1]));
    }
    if (peak == 0.0) return 0.0;

    constexpr int nbins = 32;
    const double r0 = 0.2 * diam, r1 = 0.6 * diam;
    std::vector<double> env(nbins, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::hypot(sys.dof_pos[i][0], sys.dof_pos[i][1]);
        if (r < r0 || r >= r1) continue;
        const int b = std::min(nbins - 1, static_cast<int>((r - r0) / (r1 - r0) * nbins));
        env[b] = std::max(env[b], std::abs(pair.vector[i]));
    }
    double env_max = 0.0;
    for (double e : env) env_max = std::max(env_max, e);
    if (env_max < 1e-13 * peak)
        return std::numeric_limits<double>::infinity();   // fully decayed

    // least-squares slope of log(env) vs bin center radius
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int b = 0; b < nbins; ++b) {
        if (env[b] <= 0.0) continue;
        const double r = r0 + (b + 0.5) * (r1 - r0) / nbins;
        const double ly = std::log(env[b]);
        sx += r; sy += ly; sxx += r * r; sxy += r * ly;
        ++cnt;
    }
    if (cnt < 2) return std::numeric_limits<double>::infinity();
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return -slope;
}

} // namespace wedge::fem2d
