#pragma once

// Data-parallel inner loops used by the quadrature inner products, the
// bootstrap draws and the max/min reductions. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2/FMA variant. The variant
// is chosen once at runtime (CPU feature probe, overridable with the
// FLMTEST_ISA environment variable set to "scalar" or "avx2").
//
// The extrema kernels are exact, so every variant returns identical bits.
// The dot-product kernels reassociate sums and agree with the scalar
// reference only to rounding.

#include <cstddef>
#include <string_view>

namespace flm::kernels {

enum class Isa { scalar, avx2 };

struct Extrema {
    double max;
    double min;
};

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*weighted_dot)(const double* a, const double* b, const double* w, std::size_t n);
    // out[r] = dot(m + r * cols, x, cols) for r < rows; m is row-major.
    void (*gemv)(const double* m, std::size_t rows, std::size_t cols, const double* x, double* out);
    // max/min over j of (s[j] + shift[j]) / scale[j]; shift may be null.
    // n must be >= 1.
    Extrema (*scaled_extrema)(const double* s, const double* shift, const double* scale, std::size_t n);
};

bool isa_available(Isa isa) noexcept;

/// Table for a specific ISA. Throws DomainError if the ISA is not available.
const KernelTable& table(Isa isa);

/// The table selected for this process.
const KernelTable& active() noexcept;

std::string_view isa_name(Isa isa) noexcept;

}  // namespace flm::kernels
