#include "wedge/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace wedge::kernels {

namespace {

Isa detect_isa() {
    if (const char* env = std::getenv("WEDGE_SPECTRA_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
        if (std::strcmp(env, "avx2") == 0) return Isa::Avx2;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return Isa::Avx2;
#endif
    return Isa::Scalar;
}

const Isa g_isa = detect_isa();

} // namespace

Isa active_isa() { return g_isa; }

const char* isa_name(Isa isa) {
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

#if defined(__x86_64__) || defined(_M_X64)
#define WEDGE_DISPATCH(fn, ...) \
    return g_isa == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define WEDGE_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void axpy(double a, const double* x, double* y, std::size_t n) { WEDGE_DISPATCH(axpy, a, x, y, n); }
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) { WEDGE_DISPATCH(axpy, a, x, y, n); }
void scal(double a, double* x, std::size_t n) { WEDGE_DISPATCH(scal, a, x, n); }
void scal(cplx a, cplx* x, std::size_t n) { WEDGE_DISPATCH(scal, a, x, n); }
double dot(const double* x, const double* y, std::size_t n) { WEDGE_DISPATCH(dot, x, y, n); }
cplx dotc(const cplx* x, const cplx* y, std::size_t n) { WEDGE_DISPATCH(dotc, x, y, n); }
double norm2sq(const double* x, std::size_t n) { WEDGE_DISPATCH(norm2sq, x, n); }
double norm2sq(const cplx* x, std::size_t n) { WEDGE_DISPATCH(norm2sq, x, n); }
void spmv(const int* row_ptr, const int* col_idx, const double* vals,
          const double* x, double* y, int nrows) {
    WEDGE_DISPATCH(spmv, row_ptr, col_idx, vals, x, y, nrows);
}
void spmv(const int* row_ptr, const int* col_idx, const cplx* vals,
          const cplx* x, cplx* y, int nrows) {
    WEDGE_DISPATCH(spmv, row_ptr, col_idx, vals, x, y, nrows);
}

#undef WEDGE_DISPATCH

} // namespace wedge::kernels
