#include "flm/activity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flm/error.hpp"

namespace flm::activity {

void ActivityTrajectory::validate() const {
    if (!(minutes_per_reading > 0.0)) throw ValidationError("minutes_per_reading must be positive");
    if (static_cast<double>(readings.size()) * minutes_per_reading > static_cast<double>(kMaxReadings))
        throw ValidationError("trajectory covers more than 7 days (" + std::to_string(readings.size()) + " readings)");
    for (std::size_t i = 0; i < readings.size(); ++i) {
        const double a = readings[i];
        if (!std::isfinite(a) || a < 0.0 || a > kMaxReading)
            throw ValidationError("reading " + std::to_string(i) + " is " + std::to_string(a) +
                                  ", outside [0, 32767]");
    }
}

ActivityProfile activity_profile(const ActivityTrajectory& trajectory, std::span<const double> thresholds) {
    trajectory.validate();
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] >= 1.0) || !std::isfinite(thresholds[i]))
            throw ValidationError("thresholds must be finite and >= 1");
        if (i > 0 && !(thresholds[i] > thresholds[i - 1]))
            throw ValidationError("thresholds must be strictly increasing");
    }
    std::vector<double> sorted = trajectory.readings;
    std::sort(sorted.begin(), sorted.end());
    ActivityProfile p;
    p.thresholds.assign(thresholds.begin(), thresholds.end());
    p.values.reserve(thresholds.size());
    for (double s : thresholds) {
        const auto at_least = static_cast<double>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), s));
        p.values.push_back(at_least * trajectory.minutes_per_reading / kMinutesPerDay);
    }
    return p;
}

std::vector<double> threshold_range(double lo, double hi, double step) {
    if (!(lo >= 1.0) || !(hi >= lo) || !(step > 0.0) || !std::isfinite(hi))
        throw ValidationError("threshold range needs 1 <= lo <= hi and step > 0");
    std::vector<double> out;
    for (std::size_t k = 0;; ++k) {
        const double s = lo + static_cast<double>(k) * step;
        if (s > hi) break;
        out.push_back(s);
    }
    return out;
}

std::vector<double> threshold_preset(std::string_view name, double step) {
    if (name == "children") return threshold_range(1.0, 1000.0, step);
    if (name == "adults") return threshold_range(1.0, 3000.0, step);
    throw ValidationError("unknown threshold preset '" + std::string(name) + "' (valid: " + preset_names() + ")");
}

std::string preset_names() { return "children, adults"; }

}  // namespace flm::activity
