#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "torsion/params.hpp"

namespace torsion {

/// Cartesian parameter grid for analytic sweeps.
struct ParameterGrid {
    std::vector<int> dims{2, 3, 4};
    int degree_min = 1;
    int degree_max = 20;
    std::vector<double> sigmas{0.1, 0.5, 1.0, 2.0, 10.0};
    std::vector<double> radii{0.2, 0.5, 0.8};

    std::vector<ProblemParams> points() const
    {
        std::vector<ProblemParams> out;
        for (int n : dims)
            for (double s : sigmas)
                for (double r : radii)
                    out.emplace_back(n, r, s);
        return out;
    }

    std::string describe() const
    {
        auto list = [](const auto& xs) {
            std::string s = "{";
            for (std::size_t i = 0; i < xs.size(); ++i) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%g", static_cast<double>(xs[i]));
                s += (i ? "," : "") + std::string(buf);
            }
            return s + "}";
        };
        return "N in " + list(dims) + ", k in " + std::to_string(degree_min) + ".." + std::to_string(degree_max)
               + ", sigma in " + list(sigmas) + ", R in " + list(radii);
    }
};

inline std::string describe_point(const ProblemParams& p, int degree)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "N=%d R=%.17g sigma=%.17g k=%d", p.dim(), p.radius(), p.sigma(), degree);
    return buf;
}

} // namespace torsion
