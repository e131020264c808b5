#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "flm/rng.hpp"

namespace {

using flm::rng::Stream;

TEST(Rng, StreamsReproduce) {
    Stream a(flm::rng::derive(42, {1, 2}));
    Stream b(flm::rng::derive(42, {1, 2}));
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, DistinctPathsGiveDistinctKeys) {
    EXPECT_NE(flm::rng::derive(1, {0, 1}), flm::rng::derive(1, {1, 0}));
    EXPECT_NE(flm::rng::derive(1, {0}), flm::rng::derive(2, {0}));
    EXPECT_NE(flm::rng::derive(1, {}), flm::rng::derive(1, {0}));
}

TEST(Rng, UniformStaysInsideOpenInterval) {
    Stream s(7);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.01);
}

TEST(Rng, NormalMoments) {
    Stream s(9);
    const int n = 200000;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        m1 += z;
        m2 += z * z;
    }
    EXPECT_NEAR(m1 / n, 0.0, 0.01);
    EXPECT_NEAR(m2 / n, 1.0, 0.02);
}

TEST(Rng, LaplaceQuantileIsCenteredAndMonotone) {
    EXPECT_EQ(flm::rng::laplace_quantile(0.5, 1.0), 0.0);
    double prev = -INFINITY;
    for (double u = 0.001; u < 1.0; u += 0.001) {
        const double q = flm::rng::laplace_quantile(u, 0.7);
        EXPECT_GE(q, prev);
        prev = q;
    }
    // P(X <= -scale * ln 2) = 1/4
    EXPECT_NEAR(flm::rng::laplace_quantile(0.25, 2.0), -2.0 * std::log(2.0), 1e-12);
}

}  // namespace
