#include "flm/tauselect.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bootstrap_engine.hpp"
#include "flm/error.hpp"
#include "flm/rng.hpp"

namespace flm {

void TauPolicy::validate() const {
    auto in_range = [](double t) { return t >= 0.0 && t < 1.0; };
    if (mode == Mode::fixed) {
        if (!in_range(fixed_value))
            throw DomainError("fixed tau must lie in [0, 1), got " + std::to_string(fixed_value));
        return;
    }
    if (grid.empty()) throw DomainError("tau grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!in_range(grid[i])) throw DomainError("tau grid value " + std::to_string(grid[i]) + " is outside [0, 1)");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("tau grid must be strictly increasing");
    }
    if (inner_b < 20) throw DomainError("tau selection needs inner_b >= 20, got " + std::to_string(inner_b));
}

TauSelection evaluate_tau_grid(const Summary& summary, const TauPolicy& policy, double significance,
                               std::uint64_t seed, unsigned workers) {
    policy.validate();
    if (!(significance > 0.0 && significance < 1.0)) throw DomainError("significance must lie in (0, 1)");
    const auto c = detail::compact(summary);

    TauSelection sel;
    if (policy.mode == TauPolicy::Mode::fixed) {
        sel.tau = policy.fixed_value;
        sel.grid = {policy.fixed_value};
        return sel;
    }
    sel.grid = policy.grid;
    const std::size_t ng = policy.grid.size();
    const std::size_t b = policy.inner_b;
    const std::size_t p = c.sd.size();

    std::vector<std::vector<double>> scales(ng);
    for (std::size_t t = 0; t < ng; ++t) scales[t] = detail::scales_for(c, policy.grid[t]);
    const auto& kt = kernels::active();

    // Null draws -> per-tau quantiles.
    std::vector<std::vector<double>> m_star(ng, std::vector<double>(b));
    std::vector<std::vector<double>> l_star(ng, std::vector<double>(b));
    detail::for_each_draw(c, b, rng::derive(seed, {rng::tag::tau_select, 0}), workers,
                          [&](std::size_t r, const double* s) {
                              for (std::size_t t = 0; t < ng; ++t) {
                                  const auto e = kt.scaled_extrema(s, nullptr, scales[t].data(), p);
                                  m_star[t][r] = e.max;
                                  l_star[t][r] = e.min;
                              }
                          });
    std::vector<double> q_m(ng), q_l(ng);
    for (std::size_t t = 0; t < ng; ++t) {
        q_m[t] = empirical_quantile(m_star[t], 1.0 - significance / 2.0);
        q_l[t] = empirical_quantile(l_star[t], significance / 2.0);
    }

    // Fresh draws shifted by the observed signal -> rejection frequency.
    std::vector<unsigned char> rejected(b * ng, 0);
    detail::for_each_draw(c, b, rng::derive(seed, {rng::tag::tau_select, 1}), workers,
                          [&](std::size_t r, const double* s) {
                              for (std::size_t t = 0; t < ng; ++t) {
                                  const auto e = kt.scaled_extrema(s, c.scaled_mean.data(), scales[t].data(), p);
                                  rejected[r * ng + t] = (e.max > q_m[t] || e.min < q_l[t]) ? 1 : 0;
                              }
                          });
    sel.estimated_power.assign(ng, 0.0);
    for (std::size_t r = 0; r < b; ++r)
        for (std::size_t t = 0; t < ng; ++t) sel.estimated_power[t] += rejected[r * ng + t];
    for (double& v : sel.estimated_power) v /= static_cast<double>(b);

    const bool no_signal = std::all_of(c.scaled_mean.begin(), c.scaled_mean.end(), [](double v) { return v == 0.0; });
    std::size_t best = 0;
    if (!no_signal) {
        for (std::size_t t = 1; t < ng; ++t)
            if (sel.estimated_power[t] > sel.estimated_power[best]) best = t;
    }
    sel.tau = policy.grid[best];
    return sel;
}

double select_tau(const Summary& summary, const TauPolicy& policy, double significance, std::uint64_t seed,
                  unsigned workers) {
    return evaluate_tau_grid(summary, policy, significance, seed, workers).tau;
}

}  // namespace flm
