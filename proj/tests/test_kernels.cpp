#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wedge/kernels.hpp"

#include <random>
#include <vector>

using namespace wedge;
using kernels::cplx;

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

std::vector<cplx> random_cvec(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& x : v) {
        double re = d(rng), im = d(rng);
        x = {re, im};
    }
    return v;
}

// odd sizes exercise the vector remainders
const std::size_t kSizes[] = {0, 1, 3, 5, 8, 17, 64, 257, 1000};

} // namespace

TEST_CASE("dispatched kernels match the scalar reference") {
    for (std::size_t n : kSizes) {
        auto x = random_vec(n, 1);
        auto y = random_vec(n, 2);
        const double tol = 1e-12 * (n + 1);

        CHECK(kernels::dot(x.data(), y.data(), n) ==
              doctest::Approx(kernels::scalar::dot(x.data(), y.data(), n)).epsilon(tol));
        CHECK(kernels::norm2sq(x.data(), n) ==
              doctest::Approx(kernels::scalar::norm2sq(x.data(), n)).epsilon(tol));

        auto y1 = y, y2 = y;
        kernels::axpy(0.37, x.data(), y1.data(), n);
        kernels::scalar::axpy(0.37, x.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));

        auto x1 = x, x2 = x;
        kernels::scal(-1.7, x1.data(), n);
        kernels::scalar::scal(-1.7, x2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(x1[i] == doctest::Approx(x2[i]).epsilon(1e-14));
    }
}

TEST_CASE("complex kernels match the scalar reference") {
    for (std::size_t n : kSizes) {
        auto x = random_cvec(n, 3);
        auto y = random_cvec(n, 4);
        const double tol = 1e-12 * (n + 1);

        const cplx d1 = kernels::dotc(x.data(), y.data(), n);
        const cplx d2 = kernels::scalar::dotc(x.data(), y.data(), n);
        CHECK(std::abs(d1 - d2) <= tol * (1.0 + std::abs(d2)));

        CHECK(kernels::norm2sq(x.data(), n) ==
              doctest::Approx(kernels::scalar::norm2sq(x.data(), n)).epsilon(tol));

        const cplx a{0.3, -0.8};
        auto y1 = y, y2 = y;
        kernels::axpy(a, x.data(), y1.data(), n);
        kernels::scalar::axpy(a, x.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-14);

        auto x1 = x, x2 = x;
        kernels::scal(a, x1.data(), n);
        kernels::scalar::scal(a, x2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x1[i] - x2[i]) <= 1e-14);
    }
}

TEST_CASE("dotc is conjugate-symmetric and consistent with norm2sq") {
    auto x = random_cvec(101, 5);
    auto y = random_cvec(101, 6);
    const cplx a = kernels::dotc(x.data(), y.data(), x.size());
    const cplx b = kernels::dotc(y.data(), x.data(), x.size());
    CHECK(std::abs(a - std::conj(b)) < 1e-13);
    const cplx xx = kernels::dotc(x.data(), x.data(), x.size());
    CHECK(xx.real() == doctest::Approx(kernels::norm2sq(x.data(), x.size())).epsilon(1e-13));
    CHECK(std::abs(xx.imag()) < 1e-13);
}

TEST_CASE("spmv matches a dense reference, real and complex") {
    // random CSR: 40 rows, ~9 entries per row, plus empty and full rows
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coldist(0, 39);
    std::uniform_real_distribution<double> vdist(-1.0, 1.0);
    const int nrows = 40;
    std::vector<int> row_ptr{0};
    std::vector<int> col_idx;
    std::vector<cplx> vals;
    for (int r = 0; r < nrows; ++r) {
        const int nnz = (r == 5) ? 0 : (r == 6 ? nrows : 9);
        std::vector<int> cols;
        for (int k = 0; k < nnz; ++k) cols.push_back(r == 6 ? k : coldist(rng));
        std::sort(cols.begin(), cols.end());
        for (int c : cols) {
            col_idx.push_back(c);
            vals.push_back({vdist(rng), vdist(rng)});
        }
        row_ptr.push_back(static_cast<int>(col_idx.size()));
    }
    auto x = random_cvec(nrows, 8);
    std::vector<cplx> y_dense(nrows, {0, 0});
    for (int r = 0; r < nrows; ++r)
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            y_dense[r] += vals[k] * x[col_idx[k]];

    std::vector<cplx> y1(nrows), y2(nrows);
    kernels::spmv(row_ptr.data(), col_idx.data(), vals.data(), x.data(), y1.data(), nrows);
    kernels::scalar::spmv(row_ptr.data(), col_idx.data(), vals.data(), x.data(), y2.data(), nrows);
    for (int r = 0; r < nrows; ++r) {
        CHECK(std::abs(y1[r] - y_dense[r]) < 1e-12);
        CHECK(std::abs(y2[r] - y_dense[r]) < 1e-12);
    }

    std::vector<double> rvals(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) rvals[i] = vals[i].real();
    auto rx = random_vec(nrows, 9);
    std::vector<double> ry1(nrows), ry2(nrows);
    kernels::spmv(row_ptr.data(), col_idx.data(), rvals.data(), rx.data(), ry1.data(), nrows);
    kernels::scalar::spmv(row_ptr.data(), col_idx.data(), rvals.data(), rx.data(), ry2.data(), nrows);
    for (int r = 0; r < nrows; ++r) CHECK(ry1[r] == doctest::Approx(ry2[r]).epsilon(1e-13));
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 variants agree with scalar when the cpu supports them") {
    if (kernels::active_isa() != kernels::Isa::Avx2) return;   // cpu without avx2
    auto x = random_cvec(333, 10);
    auto y = random_cvec(333, 11);
    const cplx a = kernels::avx2::dotc(x.data(), y.data(), x.size());
    const cplx b = kernels::scalar::dotc(x.data(), y.data(), x.size());
    CHECK(std::abs(a - b) < 1e-12);
    auto rx = random_vec(333, 12);
    CHECK(kernels::avx2::norm2sq(rx.data(), rx.size()) ==
          doctest::Approx(kernels::scalar::norm2sq(rx.data(), rx.size())).epsilon(1e-13));
}
#endif
