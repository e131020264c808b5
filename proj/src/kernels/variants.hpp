#pragma once

#include "flm/kernels.hpp"

namespace flm::kernels::detail {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x, double* out);
Extrema scaled_extrema(const double* s, const double* shift, const double* scale, std::size_t n);
}  // namespace scalar

#if defined(FLM_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x, double* out);
Extrema scaled_extrema(const double* s, const double* shift, const double* scale, std::size_t n);
}  // namespace avx2
#endif

}  // namespace flm::kernels::detail
