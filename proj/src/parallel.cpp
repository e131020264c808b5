#include "flm/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace flm {

unsigned default_workers() noexcept {
    const char* env = std::getenv("FLMTEST_WORKERS");
    if (env == nullptr) return 1;
    unsigned value = 0;
    const char* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc{} || ptr != end || value == 0) return 1;
    return value;
}

}  // namespace flm
