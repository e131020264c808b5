#pragma once

// Counter-based random streams. A stream is identified by a 64-bit key that
// is derived from (master seed, path of indices); the i-th output is a pure
// function of (key, i). Work split across any number of workers therefore
// sees exactly the same numbers as a serial run.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <span>

namespace flm::rng {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stream key for a hierarchical path below a master seed.
constexpr std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t key = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    for (const std::uint64_t p : path) key = mix64(key ^ mix64(p + 0x3c6ef372fe94f82bULL));
    return key;
}

// Purpose tags, so streams used for different jobs never coincide.
namespace tag {
inline constexpr std::uint64_t bootstrap = 0x626f6f74;   // final test quantiles
inline constexpr std::uint64_t tau_select = 0x74617573;  // tau selection replicates
inline constexpr std::uint64_t dataset = 0x64617461;
inline constexpr std::uint64_t test = 0x74657374;
inline constexpr std::uint64_t design = 0x64657369;      // study-level fixed quantities
}  // namespace tag

class Stream {
public:
    using result_type = std::uint64_t;

    explicit constexpr Stream(std::uint64_t key) noexcept : key_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept { return mix64(key_ + (++counter_) * 0xd1b54a32d192ed03ULL); }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal (Box-Muller, pairs cached).
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    void fill_normal(std::span<double> out) noexcept {
        for (double& v : out) v = normal();
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Inverse CDF of the centered Laplace law with the given scale; u in (0,1).
inline double laplace_quantile(double u, double scale) noexcept {
    const double d = u - 0.5;
    if (d == 0.0) return 0.0;
    const double tail = std::log1p(-2.0 * std::abs(d));
    return d < 0.0 ? scale * tail : -scale * tail;
}

}  // namespace flm::rng
