#pragma once

// Shared machinery for drawing S* ~ N(0, F F^T) restricted to the retained
// coordinates. Used by the final bootstrap and by tau selection.

#include <cmath>
#include <cstdint>
#include <vector>

#include "flm/kernels.hpp"
#include "flm/maxtest.hpp"
#include "flm/parallel.hpp"
#include "flm/rng.hpp"

namespace flm::detail {

struct CompactSummary {
    std::vector<std::size_t> index;    // retained coordinates
    RowMatrix factor;                  // retained rows of F, contiguous
    std::vector<double> sd;            // retained sd
    std::vector<double> scaled_mean;   // sqrt(n) * mean, retained
};

/// Throws DegenerateDataError when nothing is retained.
CompactSummary compact(const Summary& summary);

/// sd_j^tau for the retained coordinates.
std::vector<double> scales_for(const CompactSummary& c, double tau);

/// For each replicate r in [0, b): fills S* from stream derive(key, r) and
/// calls visit(r, s) with s pointing to the retained coordinates.
template <class Visit>
void for_each_draw(const CompactSummary& c, std::size_t b, std::uint64_t key, unsigned workers, Visit&& visit) {
    const std::size_t rows = static_cast<std::size_t>(c.factor.rows());
    const std::size_t cols = static_cast<std::size_t>(c.factor.cols());
    const auto& kt = kernels::active();
    parallel_for(b, workers, [&](std::size_t r) {
        std::vector<double> g(cols);
        std::vector<double> s(rows);
        rng::Stream stream(rng::derive(key, {r}));
        stream.fill_normal(g);
        kt.gemv(c.factor.data(), rows, cols, g.data(), s.data());
        visit(r, s.data());
    });
}

}  // namespace flm::detail
