#include <cstdlib>
#include <string>
#include <string_view>

#include "flm/error.hpp"
#include "variants.hpp"

namespace flm::kernels {

namespace {

const KernelTable kScalar{Isa::scalar, detail::scalar::dot, detail::scalar::weighted_dot,
                          detail::scalar::gemv, detail::scalar::scaled_extrema};

#if defined(FLM_HAVE_AVX2)
const KernelTable kAvx2{Isa::avx2, detail::avx2::dot, detail::avx2::weighted_dot, detail::avx2::gemv,
                        detail::avx2::scaled_extrema};
#endif

const KernelTable& select() {
    if (const char* env = std::getenv("FLMTEST_ISA")) {
        const std::string_view want{env};
        if (want == "scalar") return kScalar;
        if (want == "avx2" && isa_available(Isa::avx2)) return table(Isa::avx2);
    }
    if (isa_available(Isa::avx2)) return table(Isa::avx2);
    return kScalar;
}

}  // namespace

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(FLM_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!isa_available(isa))
        throw DomainError("kernel ISA '" + std::string(isa_name(isa)) + "' is not available on this CPU/build");
#if defined(FLM_HAVE_AVX2)
    if (isa == Isa::avx2) return kAvx2;
#endif
    return kScalar;
}

const KernelTable& active() noexcept {
    static const KernelTable& chosen = select();
    return chosen;
}

std::string_view isa_name(Isa isa) noexcept {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

}  // namespace flm::kernels
