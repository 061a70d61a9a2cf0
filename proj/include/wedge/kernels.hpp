#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Dense vector and CSR matrix-vector kernels used by the eigensolvers.
// Scalar reference implementations live in kernels::scalar; AVX2 variants in
// kernels::avx2 (x86-64 only). The top-level functions dispatch once at
// startup based on cpuid, overridable with WEDGE_SPECTRA_SIMD=scalar|avx2.

namespace wedge::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

Isa active_isa();
const char* isa_name(Isa isa);

// y += a*x
void axpy(double a, const double* x, double* y, std::size_t n);
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);

// x *= a
void scal(double a, double* x, std::size_t n);
void scal(cplx a, cplx* x, std::size_t n);

// sum x[i]*y[i] (real), sum conj(x[i])*y[i] (complex)
double dot(const double* x, const double* y, std::size_t n);
cplx dotc(const cplx* x, const cplx* y, std::size_t n);

// sum |x[i]|^2
double norm2sq(const double* x, std::size_t n);
double norm2sq(const cplx* x, std::size_t n);

// y = A*x for CSR with full (mirrored) storage
void spmv(const int* row_ptr, const int* col_idx, const double* vals,
          const double* x, double* y, int nrows);
void spmv(const int* row_ptr, const int* col_idx, const cplx* vals,
          const cplx* x, cplx* y, int nrows);

namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
void scal(cplx a, cplx* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
cplx dotc(const cplx* x, const cplx* y, std::size_t n);
double norm2sq(const double* x, std::size_t n);
double norm2sq(const cplx* x, std::size_t n);
void spmv(const int* row_ptr, const int* col_idx, const double* vals,
          const double* x, double* y, int nrows);
void spmv(const int* row_ptr, const int* col_idx, const cplx* vals,
          const cplx* x, cplx* y, int nrows);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
void scal(cplx a, cplx* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
cplx dotc(const cplx* x, const cplx* y, std::size_t n);
double norm2sq(const double* x, std::size_t n);
double norm2sq(const cplx* x, std::size_t n);
void spmv(const int* row_ptr, const int* col_idx, const double* vals,
          const double* x, double* y, int nrows);
void spmv(const int* row_ptr, const int* col_idx, const cplx* vals,
          const cplx* x, cplx* y, int nrows);
} // namespace avx2
#endif

} // namespace wedge::kernels
