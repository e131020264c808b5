#pragma once

#include <cstddef>
#include <vector>

namespace flm {

/// How the partial-standardization exponent is chosen.
struct TauPolicy {
    enum class Mode { fixed, grid };

    Mode mode = Mode::grid;
    double fixed_value = 0.5;
    std::vector<double> grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::size_t inner_b = 250;

    static TauPolicy fixed(double tau) {
        TauPolicy p;
        p.mode = Mode::fixed;
        p.fixed_value = tau;
        return p;
    }
    static TauPolicy over_grid(std::vector<double> values, std::size_t inner_b = 250) {
        TauPolicy p;
        p.mode = Mode::grid;
        p.grid = std::move(values);
        p.inner_b = inner_b;
        return p;
    }

    /// Throws DomainError on an invalid policy.
    void validate() const;
};

}  // namespace flm
