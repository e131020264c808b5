#pragma once

// Activity profiles: for a week of per-minute intensity readings A, the time
// (in days) spent at intensity >= s, as a function of the threshold s.

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flm::activity {

inline constexpr double kMaxReading = 32767.0;
inline constexpr std::size_t kMaxReadings = 7 * 1440;
inline constexpr double kMinutesPerDay = 1440.0;

struct ActivityTrajectory {
    std::vector<double> readings;  // one per minute
    double minutes_per_reading = 1.0;

    /// Throws ValidationError for readings outside [0, 32767], non-finite
    /// readings, or more than a week of data.
    void validate() const;
};

struct ActivityProfile {
    std::vector<double> thresholds;
    std::vector<double> values;  // days
};

/// Y(s) = (minutes with reading >= s) / 1440 for each threshold s. Thresholds
/// must be >= 1 (zero intensity is excluded) and strictly increasing.
ActivityProfile activity_profile(const ActivityTrajectory& trajectory, std::span<const double> thresholds);

/// lo, lo + step, ... up to hi (inclusive when hit exactly).
std::vector<double> threshold_range(double lo, double hi, double step);

/// Named threshold grids: "children" covers [1, 1000], "adults" [1, 3000].
std::vector<double> threshold_preset(std::string_view name, double step = 10.0);

std::string preset_names();

}  // namespace flm::activity
