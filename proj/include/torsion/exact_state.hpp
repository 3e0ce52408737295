#pragma once

#include <cmath>
#include <stdexcept>

#include "torsion/params.hpp"

namespace torsion {

/// Boundary and interface data of the radial state on concentric balls.
/// Normal derivatives are radial; jumps are outside minus inside.
struct StateTraces {
    double dn_u_inner_interface;
    double dn_u_outer_interface;
    double dn_u_boundary;
    double dnn_u_inner;
    double dnn_u_outer;
    double dnn_u_boundary;
    double jump_dn;
    double jump_sigma_gradsq;
    double curvature_interface;
    double curvature_boundary;
};

/// State u at radius r: (1-R^2)/(2N) + (R^2-r^2)/(2N sigma) in the core, (1-r^2)/(2N) in the shell.
inline double u_value(const ProblemParams& p, double r)
{
    if (!(r >= 0.0 && r <= 1.0))
        throw std::invalid_argument("u_value: radius must lie in [0,1]");
    const double n = p.dim();
    const double core = p.radius();
    if (r <= core)
        return (1.0 - core * core) / (2.0 * n) + (core * core - r * r) / (2.0 * n * p.sigma());
    return (1.0 - r * r) / (2.0 * n);
}

inline StateTraces traces(const ProblemParams& p)
{
    const double n = p.dim();
    const double core = p.radius();
    const double s = p.sigma();

    StateTraces t{};
    t.dn_u_inner_interface = -core / (n * s);
    t.dn_u_outer_interface = -core / n;
    t.dn_u_boundary = -1.0 / n;
    t.dnn_u_inner = -1.0 / (n * s);
    t.dnn_u_outer = -1.0 / n;
    t.dnn_u_boundary = -1.0 / n;
    t.jump_dn = t.dn_u_outer_interface - t.dn_u_inner_interface;
    t.jump_sigma_gradsq = t.dn_u_outer_interface * t.dn_u_outer_interface
                          - s * t.dn_u_inner_interface * t.dn_u_inner_interface;
    t.curvature_interface = (n - 1.0) / core;
    t.curvature_boundary = n - 1.0;
    return t;
}

/// E(D_0, Omega_0) = |S^{N-1}| / (N^2 (N+2)) * (1 - R^{N+2} + R^{N+2}/sigma).
inline double baseline_energy(const ProblemParams& p)
{
    const double n = p.dim();
    const double core_power = std::pow(p.radius(), n + 2.0);
    return sphere_area(p.dim()) / (n * n * (n + 2.0)) * (1.0 - core_power + core_power / p.sigma());
}

} // namespace torsion
