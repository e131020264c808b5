#include <gtest/gtest.h>

#include "flm/activity.hpp"
#include "flm/error.hpp"
#include "flm/rng.hpp"

namespace {

using namespace flm;
using namespace flm::activity;

TEST(Activity, ConstantWeek) {
    ActivityTrajectory a{std::vector<double>(10080, 5.0)};
    const std::vector<double> s{1, 3, 5, 5.5, 6, 100};
    const auto p = activity_profile(a, s);
    EXPECT_EQ(p.values, (std::vector<double>{7, 7, 7, 0, 0, 0}));
}

TEST(Activity, LinearRamp) {
    ActivityTrajectory a;
    for (int i = 0; i < 10080; ++i) a.readings.push_back(i);
    const auto s = threshold_range(1, 10079, 1);
    const auto p = activity_profile(a, s);
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(p.values[k], 7.0 - s[k] / 1440.0, 1e-12) << s[k];
}

TEST(Activity, EmptyAndInvalid) {
    const auto s = threshold_preset("children");
    const auto p = activity_profile(ActivityTrajectory{}, s);
    for (double v : p.values) EXPECT_EQ(v, 0.0);

    EXPECT_THROW(activity_profile(ActivityTrajectory{{1.0, -1.0}}, s), ValidationError);
    EXPECT_THROW(activity_profile(ActivityTrajectory{{40000.0}}, s), ValidationError);
    EXPECT_THROW(activity_profile(ActivityTrajectory{std::vector<double>(10081, 1.0)}, s), ValidationError);
    const std::vector<double> unsorted{5, 2};
    EXPECT_THROW(activity_profile(ActivityTrajectory{{1.0}}, unsorted), ValidationError);
    const std::vector<double> zero{0};
    EXPECT_THROW(activity_profile(ActivityTrajectory{{1.0}}, zero), ValidationError);
}

TEST(Activity, ProfilesAreNonIncreasingAndBounded) {
    rng::Stream st(21);
    const auto s = threshold_preset("adults");
    for (int trial = 0; trial < 20; ++trial) {
        ActivityTrajectory a;
        const auto len = 1 + static_cast<std::size_t>(st.uniform() * 10080);
        for (std::size_t i = 0; i < len; ++i) a.readings.push_back(std::floor(st.uniform() * 4000));
        const auto p = activity_profile(a, s);
        EXPECT_LE(p.values.front(), 7.0);
        for (std::size_t k = 1; k < p.values.size(); ++k) EXPECT_LE(p.values[k], p.values[k - 1]);
        EXPECT_GE(p.values.back(), 0.0);
    }
}

TEST(Activity, Presets) {
    const auto c = threshold_preset("children");
    EXPECT_EQ(c.front(), 1.0);
    EXPECT_EQ(c.back(), 991.0);
    EXPECT_EQ(c.size(), 100u);
    const auto a = threshold_preset("adults", 100);
    EXPECT_EQ(a.back(), 2901.0);
    EXPECT_THROW(threshold_preset("elderly"), ValidationError);
    EXPECT_THROW(threshold_range(0, 10, 1), ValidationError);
}

}  // namespace
