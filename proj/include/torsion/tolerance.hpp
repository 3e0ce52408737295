#pragma once

#include <algorithm>
#include <cmath>

namespace torsion {

/// Relative tolerance and absolute floor shared by every analytic comparison.
inline constexpr double kRelTol = 1e-10;
inline constexpr double kAbsFloor = 1e-14;

inline double tolerance_for(double scale, double rel = kRelTol, double floor = kAbsFloor)
{
    return std::max(floor, rel * std::abs(scale));
}

inline bool approx_equal(double a, double b, double rel = kRelTol, double floor = kAbsFloor)
{
    return std::abs(a - b) <= tolerance_for(std::max(std::abs(a), std::abs(b)), rel, floor);
}

/// |a - b| relative to the larger magnitude; zero when both vanish.
inline double relative_deviation(double a, double b, double floor = kAbsFloor)
{
    const double scale = std::max({std::abs(a), std::abs(b), floor});
    return std::abs(a - b) / scale;
}

} // namespace torsion
