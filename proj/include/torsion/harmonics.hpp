#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

#include "torsion/params.hpp"

namespace torsion {

// Real spherical harmonics, orthonormal in L^2 of the unit sphere.
//   N = 2: Y_{0,1} = 1/sqrt(2 pi), Y_{k,1} = cos(k theta)/sqrt(pi), Y_{k,2} = sin(k theta)/sqrt(pi).
//   N = 3: order 1 is m = 0, order 2m is the cos(m phi) harmonic, order 2m+1 the sin(m phi) one.

/// Degree-k circular harmonic at polar angle theta.
inline double circular_harmonic(ModeIndex mode, double theta)
{
    if (mode.degree < 0 || mode.order < 1 || mode.order > multiplicity(2, mode.degree))
        throw std::invalid_argument("circular_harmonic: invalid mode");
    if (mode.degree == 0)
        return 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double k = mode.degree;
    const double norm = 1.0 / std::sqrt(std::numbers::pi);
    return mode.order == 1 ? norm * std::cos(k * theta) : norm * std::sin(k * theta);
}

/// d/dtheta of circular_harmonic.
inline double circular_harmonic_derivative(ModeIndex mode, double theta)
{
    if (mode.degree == 0)
        return 0.0;
    const double k = mode.degree;
    const double norm = 1.0 / std::sqrt(std::numbers::pi);
    return mode.order == 1 ? -norm * k * std::sin(k * theta) : norm * k * std::cos(k * theta);
}

inline double spherical_harmonic_3d(ModeIndex mode, double polar, double azimuth)
{
    if (mode.degree < 0 || mode.order < 1 || mode.order > 2 * mode.degree + 1)
        throw std::invalid_argument("spherical_harmonic_3d: invalid mode");
    const auto l = static_cast<unsigned>(mode.degree);
    if (mode.order == 1)
        return std::sph_legendre(l, 0u, polar);
    const auto m = static_cast<unsigned>(mode.order / 2);
    const double base = std::numbers::sqrt2 * std::sph_legendre(l, m, polar);
    return mode.order % 2 == 0 ? base * std::cos(m * azimuth) : base * std::sin(m * azimuth);
}

/// Evaluates Y_{k,i} at a point of the unit sphere given in Cartesian coordinates.
/// Only N = 2 and N = 3 are supported.
inline double harmonic(ModeIndex mode, std::span<const double> point)
{
    if (point.size() == 2)
        return circular_harmonic(mode, std::atan2(point[1], point[0]));
    if (point.size() == 3) {
        const double norm = std::sqrt(point[0] * point[0] + point[1] * point[1] + point[2] * point[2]);
        if (!(norm > 0.0))
            throw std::invalid_argument("harmonic: point must be nonzero");
        const double polar = std::acos(std::clamp(point[2] / norm, -1.0, 1.0));
        return spherical_harmonic_3d(mode, polar, std::atan2(point[1], point[0]));
    }
    throw std::invalid_argument("pointwise harmonics are implemented for N = 2 and N = 3 only");
}

} // namespace torsion
