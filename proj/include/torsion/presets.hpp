#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include "torsion/params.hpp"

namespace torsion {

/// Simple interface/boundary perturbations alpha Y_{k,i} on the interface and
/// beta Y_{m,j} on the outer boundary, named case-i .. case-v:
///   i:   k = 3, m = 5
///   ii:  k = m = 5, i != j
///   iii: k = m = 5, i = j, alpha beta > 0
///   iv:  k = m = 5, i = j, alpha beta < 0
///   v:   k = m = 1, i = j, alpha = beta (rigid translation)
/// Only iii, iv and v excite the resonance term.
inline constexpr std::array<std::string_view, 5> kResonancePresets{"case-i", "case-ii", "case-iii",
                                                                   "case-iv", "case-v"};

inline PerturbationSpec resonance_preset(std::string_view name)
{
    PerturbationSpec spec;
    if (name == "case-i") {
        spec.set(3, 1, 1.0, 0.0).set(5, 1, 0.0, 1.0);
    } else if (name == "case-ii") {
        spec.set(5, 1, 1.0, 0.0).set(5, 2, 0.0, 1.0);
    } else if (name == "case-iii") {
        spec.set(5, 1, 1.0, 1.0);
    } else if (name == "case-iv") {
        spec.set(5, 1, 1.0, -1.0);
    } else if (name == "case-v") {
        spec.set(1, 1, 1.0, 1.0);
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected case-i .. case-v)");
    }
    return spec;
}

} // namespace torsion
