#pragma once

#include <cstdint>
#include <vector>

#include "flm/maxtest.hpp"
#include "flm/tau_policy.hpp"

namespace flm {

struct TauSelection {
    double tau = 0.0;
    std::vector<double> grid;
    std::vector<double> estimated_power;  // empty for a fixed policy
};

/// Scores every tau in the policy grid by a signal-injected bootstrap:
/// inner_b draws give the quantiles q_m(tau), q_l(tau); a second batch of
/// inner_b draws, shifted by sqrt(n) * mean, estimates how often the test
/// would reject. The largest estimate wins, ties go to the smallest tau.
///
/// Both batches are shared by all grid points (common random numbers), so
/// grid points that induce the same rejection region score identically.
/// When the shift is identically zero the criterion carries no information
/// and the smallest grid value is returned.
TauSelection evaluate_tau_grid(const Summary& summary, const TauPolicy& policy, double significance,
                               std::uint64_t seed, unsigned workers = 1);

double select_tau(const Summary& summary, const TauPolicy& policy, double significance, std::uint64_t seed,
                  unsigned workers = 1);

}  // namespace flm
