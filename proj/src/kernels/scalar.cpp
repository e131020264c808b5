#include "variants.hpp"

namespace flm::kernels::detail::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * a[i] * b[i];
    return acc;
}

void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x, double* out) {
    for (std::size_t r = 0; r < rows; ++r) out[r] = dot(m + r * cols, x, cols);
}

Extrema scaled_extrema(const double* s, const double* shift, const double* scale, std::size_t n) {
    Extrema e{(shift ? s[0] + shift[0] : s[0]) / scale[0], 0.0};
    e.min = e.max;
    for (std::size_t j = 1; j < n; ++j) {
        const double v = (shift ? s[j] + shift[j] : s[j]) / scale[j];
        if (v > e.max) e.max = v;
        if (v < e.min) e.min = v;
    }
    return {e.max + 0.0, e.min + 0.0};
}

}  // namespace flm::kernels::detail::scalar
