#include "wedge/spec1d.hpp"

#include "wedge/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace wedge::spec1d {

namespace {

// 3-point Gauss-Legendre on [0,1]: exact up to degree 5, enough for the
// weight-r potential terms (degree 5 integrands).
constexpr double kGaussX[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
constexpr double kGaussW[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

struct Tridiag {
    std::vector<double> diag, off;   // symmetric: off[i] couples i and i+1
};

struct Pencil {
    Tridiag K, M;   // K u = lambda M u on the retained nodes
};

// Assemble the P1 pencil for the form
//   int_0^tmax ( w(t) u'v' + w(t) (t-tau)^2 u v ) dt,  w = 1 or t,
// natural condition at t=0, Dirichlet at t=tmax (last node dropped).
Pencil assemble_pencil(double tau, const Grid1D& grid, Weight weight) {
    const int n = grid.n;
    const int m = n - 1;   // unknowns
    const double h = grid.spacing();
    Pencil p;
    p.K.diag.assign(m, 0.0);
    p.K.off.assign(m - 1, 0.0);
    p.M.diag.assign(m, 0.0);
    p.M.off.assign(m - 1, 0.0);

    auto add = [&](int i, int j, double kv, double mv) {
        if (i >= m || j >= m) return;   // Dirichlet node dropped
        if (i == j) {
            p.K.diag[i] += kv;
            p.M.diag[i] += mv;
        } else {
            p.K.off[std::min(i, j)] += kv;
            p.M.off[std::min(i, j)] += mv;
        }
    };

    for (int e = 0; e < n - 1; ++e) {
        const double a = e * h;
        double kloc[2][2] = {{0, 0}, {0, 0}};
        double ploc[2][2] = {{0, 0}, {0, 0}};
        double mloc[2][2] = {{0, 0}, {0, 0}};
        for (int q = 0; q < 3; ++q) {
            const double t = a + kGaussX[q] * h;
            const double w = (weight == Weight::RadialR) ? t : 1.0;
            const double wq = kGaussW[q] * h * w;
            const double N0 = 1.0 - kGaussX[q], N1 = kGaussX[q];
            const double V = (t - tau) * (t - tau);
            const double g = 1.0 / h;   // |grad| of both hats
            kloc[0][0] += wq * g * g;
            kloc[0][1] -= wq * g * g;
            kloc[1][1] += wq * g * g;
            ploc[0][0] += wq * V * N0 * N0;
            ploc[0][1] += wq * V * N0 * N1;
            ploc[1][1] += wq * V * N1 * N1;
            mloc[0][0] += wq * N0 * N0;
            mloc[0][1] += wq * N0 * N1;
            mloc[1][1] += wq * N1 * N1;
        }
        add(e, e, kloc[0][0] + ploc[0][0], mloc[0][0]);
        add(e, e + 1, kloc[0][1] + ploc[0][1], mloc[0][1]);
        add(e + 1, e + 1, kloc[1][1] + ploc[1][1], mloc[1][1]);
    }
    return p;
}

// Number of pencil eigenvalues below lambda (Sturm / LDL pivot count).
int neg_count(const Pencil& p, double lambda) {
    const int m = static_cast<int>(p.K.diag.size());
    int cnt = 0;
    double q = p.K.diag[0] - lambda * p.M.diag[0];
    if (q < 0) ++cnt;
    constexpr double pivmin = 1e-290;
    for (int i = 1; i < m; ++i) {
        if (std::abs(q) < pivmin) q = (q < 0 ? -pivmin : pivmin);
        const double e = p.K.off[i - 1] - lambda * p.M.off[i - 1];
        q = (p.K.diag[i] - lambda * p.M.diag[i]) - e * e / q;
        if (q < 0) ++cnt;
    }
    return cnt;
}

double lowest_eigenvalue(const Pencil& p, double hint) {
    double lo = 0.0;
    double hi = std::max(2.0, 2.0 * hint);
    while (neg_count(p, hi) < 1) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (neg_count(p, mid) >= 1) hi = mid;
        else lo = mid;
        if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

// Tridiagonal solve with partial pivoting (dgttrf/dgttrs style), used by the
// inverse iteration. Matrix rows: l[i] x_{i-1} + d[i] x_i + u[i] x_{i+1}.
void tridiag_solve(std::vector<double> l, std::vector<double> d,
                   std::vector<double> u, std::vector<double>& rhs) {
    const int m = static_cast<int>(d.size());
    std::vector<double> u2(m, 0.0);   // second superdiagonal fill-in
    for (int i = 0; i < m - 1; ++i) {
        if (std::abs(l[i + 1]) > std::abs(d[i])) {
            std::swap(d[i], l[i + 1]);
            std::swap(u[i], d[i + 1]);
            if (i + 2 < m) { u2[i] = u[i + 1]; u[i + 1] = 0.0; }
            std::swap(rhs[i], rhs[i + 1]);
        }
        if (d[i] == 0.0) d[i] = 1e-290;
        const double f = l[i + 1] / d[i];
        d[i + 1] -= f * u[i];
        if (i + 2 < m) u[i + 1] -= f * u2[i];
        rhs[i + 1] -= f * rhs[i];
    }
    if (d[m - 1] == 0.0) d[m - 1] = 1e-290;
    rhs[m - 1] /= d[m - 1];
    if (m >= 2) rhs[m - 2] = (rhs[m - 2] - u[m - 2] * rhs[m - 1]) / d[m - 2];
    for (int i = m - 3; i >= 0; --i)
        rhs[i] = (rhs[i] - u[i] * rhs[i + 1] - u2[i] * rhs[i + 2]) / d[i];
}

// M-weighted inner product for tridiagonal M.
double m_dot(const Tridiag& M, const std::vector<double>& x,
             const std::vector<double>& y) {
    const int m = static_cast<int>(x.size());
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += M.diag[i] * x[i] * y[i];
    for (int i = 0; i < m - 1; ++i) s += M.off[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
    return s;
}

std::vector<double> ground_vector(const Pencil& p, double lambda) {
    const int m = static_cast<int>(p.K.diag.size());
    // shifted pencil K - lambda*(1+eps) M, slightly inside the gap
    const double shift = lambda * (1.0 + 1e-12) + 1e-14;
    std::vector<double> dl(m, 0.0), dd(m), du(m, 0.0);
    for (int i = 0; i < m; ++i) dd[i] = p.K.diag[i] - shift * p.M.diag[i];
    for (int i = 0; i < m - 1; ++i) {
        const double e = p.K.off[i] - shift * p.M.off[i];
        du[i] = e;
        dl[i + 1] = e;
    }
    std::vector<double> x(m, 1.0);
    for (int it = 0; it < 3; ++it) {
        // rhs = M x
        std::vector<double> rhs(m, 0.0);
        for (int i = 0; i < m; ++i) rhs[i] = p.M.diag[i] * x[i];
        for (int i = 0; i < m - 1; ++i) {
            rhs[i] += p.M.off[i] * x[i + 1];
            rhs[i + 1] += p.M.off[i] * x[i];
        }
        tridiag_solve(dl, dd, du, rhs);
        const double nrm = std::sqrt(std::max(1e-300, m_dot(p.M, rhs, rhs)));
        for (int i = 0; i < m; ++i) x[i] = rhs[i] / nrm;
    }
    // constant sign, positive peak
    int imax = 0;
    for (int i = 1; i < m; ++i)
        if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
    if (x[imax] < 0)
        for (auto& v : x) v = -v;
    return x;
}

void check_preconditions(double tau, const Grid1D& grid) {
    if (grid.n < 16)
        throw std::invalid_argument("grid: need at least 16 nodes");
    if (!(grid.t_max >= tau + 10.0))
        throw std::invalid_argument("grid: truncation t_max must be >= tau + 10");
}

void check_truncation(const std::vector<double>& values, const char* op) {
    double peak = 0.0;
    for (double v : values) peak = std::max(peak, std::abs(v));
    const std::size_t n = values.size();
    const std::size_t tail = std::max<std::size_t>(2, n / 20);
    double tail_max = 0.0;
    for (std::size_t i = n - tail; i < n; ++i)
        tail_max = std::max(tail_max, std::abs(values[i]));
    if (tail_max > 1e-6 * peak)
        throw TruncationError(std::string(op) +
            ": ground state not decayed at t_max; enlarge the grid");
}

double trapz_weighted(const Grid1D& grid, const std::vector<double>& u,
                      Weight weight, int rpow) {
    const double h = grid.spacing();
    double s = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        double t = i * h;
        double w = (weight == Weight::RadialR) ? t : 1.0;
        for (int k = 0; k < rpow; ++k) w *= t;
        const double f = w * u[i] * u[i];
        s += (i == 0 || i == grid.n - 1) ? 0.5 * f : f;
    }
    return s * h;
}

std::mutex g_mu_mutex;
std::map<double, double> g_mu_cache;   // refined mu(tau), read-mostly

} // namespace

Grid1D default_grid(double tau) {
    Grid1D g;
    g.t_max = std::max(12.0, tau + 10.0);
    g.n = 2001;
    return g;
}

double degennes_mu(double tau, const Grid1D& grid) {
    check_preconditions(tau, grid);
    const Pencil p = assemble_pencil(tau, grid, Weight::Lebesgue);
    const double mu = lowest_eigenvalue(p, 1.0 + tau * tau);
    // truncation adequacy via the eigenfunction tail
    std::vector<double> v = ground_vector(p, mu);
    v.push_back(0.0);
    check_truncation(v, "degennes_mu");
    return mu;
}

double degennes_mu_refined(double tau) {
    {
        std::lock_guard<std::mutex> lk(g_mu_mutex);
        auto it = g_mu_cache.find(tau);
        if (it != g_mu_cache.end()) return it->second;
    }
    Grid1D coarse = default_grid(tau);
    Grid1D fine = coarse;
    fine.n = 2 * coarse.n - 1;
    const double a = degennes_mu(tau, coarse);
    const double b = degennes_mu(tau, fine);
    const double mu = (4.0 * b - a) / 3.0;
    std::lock_guard<std::mutex> lk(g_mu_mutex);
    g_mu_cache.emplace(tau, mu);
    return mu;
}

MinimizerResult theta0(double tol) {
    if (!(tol >= 1e-8))
        throw std::invalid_argument("theta0: tol must be >= 1e-8");
    auto f = [](double t) { return degennes_mu_refined(t); };
    auto [x0, f0] = scan_min(f, 0.0, 2.0, 0.05);
    GoldenResult g = golden_min(f, x0 - 0.05, x0 + 0.05, tol);
    MinimizerResult r;
    r.arg = g.arg;
    r.value = std::min(g.value, f0);
    r.bracket_lo = g.bracket_lo;
    r.bracket_hi = g.bracket_hi;
    r.tol = g.bracket_hi - g.bracket_lo;
    return r;
}

std::pair<double, Profile1D> halfline_zeta(double tau, const Grid1D& grid) {
    check_preconditions(tau, grid);
    const Pencil p = assemble_pencil(tau, grid, Weight::RadialR);
    const double zeta = lowest_eigenvalue(p, 2.0 + tau * tau);
    std::vector<double> v = ground_vector(p, zeta);
    v.push_back(0.0);
    check_truncation(v, "halfline_zeta");

    Profile1D prof;
    prof.grid = grid;
    prof.weight = Weight::RadialR;
    prof.values = std::move(v);
    // normalize in the exact weighted norm so the Rayleigh quotient of the
    // interpolant stays a rigorous upper bound downstream
    const double nrm2 = weighted_norm2_exact(prof);
    const double s = 1.0 / std::sqrt(nrm2);
    for (auto& x : prof.values) x *= s;
    prof.norm = weighted_norm2_exact(prof);
    auto [m2, msq] = moments(prof);
    prof.moment_r2 = m2;
    prof.moment_sqrt_r = msq;
    return {zeta, std::move(prof)};
}

double halfline_zeta_refined(double tau) {
    Grid1D coarse = default_grid(tau);
    Grid1D fine = coarse;
    fine.n = 2 * coarse.n - 1;
    const double a = halfline_zeta(tau, coarse).first;
    const double b = halfline_zeta(tau, fine).first;
    return (4.0 * b - a) / 3.0;
}

MinimizerResult xi0(double tol) {
    if (!(tol >= 1e-8))
        throw std::invalid_argument("xi0: tol must be >= 1e-8");
    auto f = [](double t) { return halfline_zeta_refined(t); };
    auto [x0, f0] = scan_min(f, 0.0, 4.0, 0.05);
    GoldenResult g = golden_min(f, x0 - 0.05, x0 + 0.05, tol);
    MinimizerResult r;
    r.arg = g.arg;
    r.value = std::min(g.value, f0);
    r.bracket_lo = g.bracket_lo;
    r.bracket_hi = g.bracket_hi;
    r.tol = g.bracket_hi - g.bracket_lo;
    return r;
}

std::pair<double, double> moments(const Profile1D& p) {
    if (p.weight != Weight::RadialR)
        throw std::invalid_argument("moments: profile must use the r dr weight");
    const double m2 = trapz_weighted(p.grid, p.values, Weight::RadialR, 2);
    const double msq = trapz_weighted(p.grid, p.values, Weight::RadialR, 1);
    return {m2, msq};
}

double weighted_norm2_exact(const Profile1D& p) {
    if (p.weight != Weight::RadialR)
        throw std::invalid_argument("weighted_norm2_exact: r dr weight expected");
    const int n = p.grid.n;
    const double h = p.grid.spacing();
    double s = 0.0;
    for (int e = 0; e < n - 1; ++e) {
        const double a = e * h;
        for (int q = 0; q < 3; ++q) {
            const double r = a + kGaussX[q] * h;
            const double u = p.values[e] * (1.0 - kGaussX[q]) + p.values[e + 1] * kGaussX[q];
            s += kGaussW[q] * h * r * u * u;
        }
    }
    return s;
}

double halfline_form_value(const Profile1D& p, double tau) {
    if (p.weight != Weight::RadialR)
        throw std::invalid_argument("halfline_form_value: profile must use the r dr weight");
    const int n = p.grid.n;
    const double h = p.grid.spacing();
    double s = 0.0;
    for (int e = 0; e < n - 1; ++e) {
        const double a = e * h;
        const double du = (p.values[e + 1] - p.values[e]) / h;
        for (int q = 0; q < 3; ++q) {
            const double r = a + kGaussX[q] * h;
            const double u = p.values[e] * (1.0 - kGaussX[q]) + p.values[e + 1] * kGaussX[q];
            s += kGaussW[q] * h * r * (du * du + (r - tau) * (r - tau) * u * u);
        }
    }
    return s;
}

const Constants& constants() {
    static const Constants c = [] {
        Constants k;
        MinimizerResult t0 = theta0(1e-7);
        k.theta0 = t0.value;
        k.xi0 = t0.arg;
        MinimizerResult x0 = xi0(1e-7);
        k.Xi0 = x0.value;
        k.tau0 = x0.arg;
        return k;
    }();
    return c;
}

const Profile1D& z_tau0() {
    static const Profile1D p = [] {
        Grid1D g = default_grid(constants().tau0);
        g.n = 4001;
        return halfline_zeta(constants().tau0, g).second;
    }();
    return p;
}

} // namespace wedge::spec1d
