#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "flm/error.hpp"
#include "flm/rng.hpp"
#include "flm/tauselect.hpp"

namespace {

using namespace flm;

Summary data_summary(const RowMatrix& v) { return summarize(CrossScoreMatrix{v, static_cast<std::size_t>(v.cols()), 1}); }

RowMatrix gaussian_rows(std::size_t n, std::vector<double> mean, std::vector<double> sd, std::uint64_t seed) {
    rng::Stream st(seed);
    RowMatrix v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(mean.size()));
    for (Eigen::Index i = 0; i < v.rows(); ++i)
        for (Eigen::Index j = 0; j < v.cols(); ++j) v(i, j) = mean[j] + sd[j] * st.normal();
    return v;
}

TEST(TauPolicy, Validation) {
    EXPECT_NO_THROW(TauPolicy{}.validate());
    EXPECT_THROW(TauPolicy::fixed(1.0).validate(), DomainError);
    EXPECT_THROW(TauPolicy::fixed(-0.1).validate(), DomainError);
    EXPECT_THROW(TauPolicy::over_grid({}).validate(), DomainError);
    EXPECT_THROW(TauPolicy::over_grid({0.2, 0.1}).validate(), DomainError);
    EXPECT_THROW(TauPolicy::over_grid({0.0, 1.0}).validate(), DomainError);
    EXPECT_THROW(TauPolicy::over_grid({0.0, 0.5}, 10).validate(), DomainError);
}

TEST(SelectTau, FixedPolicyReturnsValue) {
    const auto s = data_summary(gaussian_rows(50, {0.1, 0.2}, {1, 2}, 1));
    EXPECT_EQ(select_tau(s, TauPolicy::fixed(0.35), 0.05, 1), 0.35);
}

TEST(SelectTau, SingleCoordinateTiesToSmallest) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = data_summary(gaussian_rows(60, {0.3}, {2.0}, seed));
        const auto sel = evaluate_tau_grid(s, TauPolicy{}, 0.05, seed);
        EXPECT_EQ(sel.tau, 0.0);
        for (double p : sel.estimated_power) EXPECT_EQ(p, sel.estimated_power.front());
    }
}

TEST(SelectTau, ZeroMeanGivesSmallestGridValue) {
    Eigen::MatrixXd cov(3, 3);
    cov << 1, 0.2, 0, 0.2, 4, 0, 0, 0, 0.25;
    const auto s = Summary::from_moments(Eigen::VectorXd::Zero(3), cov, 100);
    const auto policy = TauPolicy::over_grid({0.2, 0.5, 0.8});
    const auto sel = evaluate_tau_grid(s, policy, 0.05, 3);
    EXPECT_EQ(sel.tau, 0.2);
    for (double p : sel.estimated_power) EXPECT_NEAR(p, 0.05, 0.06);
}

TEST(SelectTau, SignalInLowVarianceCoordinatePrefersStandardization) {
    int positive = 0;
    const int runs = 50;
    const std::vector<double> sd = {4.0, 2.0, 1.0, 0.5, 0.25, 0.125};
    for (int k = 0; k < runs; ++k) {
        std::vector<double> mean(sd.size(), 0.0);
        mean.back() = 0.04;
        const auto s = data_summary(gaussian_rows(200, mean, sd, 1000 + k));
        const auto sel = evaluate_tau_grid(s, TauPolicy{}, 0.05, k);
        // Exhaustive check: the choice maximizes the estimated power, smallest on ties.
        std::size_t best = 0;
        for (std::size_t t = 1; t < sel.grid.size(); ++t)
            if (sel.estimated_power[t] > sel.estimated_power[best]) best = t;
        EXPECT_EQ(sel.tau, sel.grid[best]);
        if (sel.tau > 0.0) ++positive;
    }
    EXPECT_GT(positive, runs / 2);
}

TEST(SelectTau, ScaleEquivariance) {
    const auto v = gaussian_rows(80, {0.1, 0.0, 0.3}, {1.0, 3.0, 0.5}, 7);
    const RowMatrix w = 5.0 * v;
    const auto a = select_tau(data_summary(v), TauPolicy{}, 0.05, 11);
    const auto b = select_tau(data_summary(w), TauPolicy{}, 0.05, 11);
    EXPECT_EQ(a, b);
}

TEST(SelectTau, ResultLiesInGridAndIsWorkerInvariant) {
    const auto s = data_summary(gaussian_rows(80, {0.1, -0.2, 0.05, 0.0}, {1.0, 2.0, 0.3, 0.7}, 9));
    const auto policy = TauPolicy::over_grid({0.05, 0.45, 0.85}, 100);
    const auto a = evaluate_tau_grid(s, policy, 0.05, 5, 1);
    const auto b = evaluate_tau_grid(s, policy, 0.05, 5, 4);
    EXPECT_TRUE(a.tau == 0.05 || a.tau == 0.45 || a.tau == 0.85);
    EXPECT_EQ(a.tau, b.tau);
    EXPECT_EQ(a.estimated_power, b.estimated_power);
}

TEST(SelectTau, DegenerateSummaryThrows) {
    RowMatrix v = RowMatrix::Ones(10, 2);
    EXPECT_THROW(select_tau(data_summary(v), TauPolicy{}, 0.05, 1), DomainError);
}

}  // namespace
