#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "torsion/exact_state.hpp"
#include "torsion/harmonics.hpp"
#include "torsion/params.hpp"

namespace torsion {

/// Which boundary carries the unit degree-k perturbation.
enum class ModeKind { Inner, Outer };

inline const char* to_string(ModeKind kind) { return kind == ModeKind::Inner ? "inner" : "outer"; }

class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Radial profile of the degree-k shape derivative for a unit mode coefficient:
///   inner_coeff r^k                                  for r <= R,
///   outer_sing r^{2-N-k} + outer_reg r^k             for R < r <= 1.
struct ModeProfile {
    ModeKind kind = ModeKind::Inner;
    int degree = 1;
    double inner_coeff = 0.0;
    double outer_sing = 0.0;
    double outer_reg = 0.0;
    double denom = 0.0;
    int dim = 2;
    double core_radius = 0.5;

    double inside_value(double r) const { return inner_coeff * std::pow(r, degree); }
    double outside_value(double r) const
    {
        return outer_sing * std::pow(r, 2 - dim - degree) + outer_reg * std::pow(r, degree);
    }
    double inside_slope(double r) const
    {
        return inner_coeff * degree * std::pow(r, degree - 1);
    }
    double outside_slope(double r) const
    {
        return outer_sing * (2 - dim - degree) * std::pow(r, 1 - dim - degree)
               + outer_reg * degree * std::pow(r, degree - 1);
    }
    double value(double r) const { return r <= core_radius ? inside_value(r) : outside_value(r); }
};

/// Common denominator N(N-2+k+k sigma) R^{2-N-2k} + k N (1-sigma).
inline double denom_F(const ProblemParams& p, int degree)
{
    if (degree < 1)
        throw std::invalid_argument("denom_F: degree must be at least 1");
    const double n = p.dim();
    const double k = degree;
    const double s = p.sigma();
    return n * (n - 2.0 + k + k * s) * std::pow(p.radius(), 2.0 - n - 2.0 * k)
           + k * n * (1.0 - s);
}

/// Relative residuals of the three transmission conditions.
struct TransmissionResidual {
    double flux_jump = 0.0;
    double value_jump = 0.0;
    double boundary = 0.0;

    double max() const { return std::max({flux_jump, value_jump, boundary}); }
};

namespace detail {

inline double relative_residual(std::span<const double> terms, double rhs)
{
    double sum = -rhs;
    double scale = std::abs(rhs);
    for (double t : terms) {
        sum += t;
        scale += std::abs(t);
    }
    return scale > 0.0 ? std::abs(sum) / scale : 0.0;
}

inline std::array<double, 2> transmission_data(const ProblemParams& p, ModeKind kind)
{
    const StateTraces tr = traces(p);
    // value jump at r = R and Dirichlet value at r = 1
    if (kind == ModeKind::Inner)
        return {-tr.jump_dn, 0.0};
    return {0.0, -tr.dn_u_boundary};
}

} // namespace detail

/// Evaluates each interface/boundary condition on the profile, relative to the
/// magnitude of its terms.
inline TransmissionResidual transmission_residual(const ModeProfile& m, const ProblemParams& p)
{
    const double core = p.radius();
    const auto [jump_rhs, bnd_rhs] = detail::transmission_data(p, m.kind);
    TransmissionResidual res;
    const std::array<double, 2> flux{m.outside_slope(core), -p.sigma() * m.inside_slope(core)};
    res.flux_jump = detail::relative_residual(flux, 0.0);
    const std::array<double, 3> jump{m.outer_sing * std::pow(core, 2 - p.dim() - m.degree),
                                     m.outer_reg * std::pow(core, m.degree),
                                     -m.inside_value(core)};
    res.value_jump = detail::relative_residual(jump, jump_rhs);
    const std::array<double, 2> bnd{m.outer_sing, m.outer_reg};
    res.boundary = detail::relative_residual(bnd, bnd_rhs);
    return res;
}

inline constexpr double kTransmissionResidualTol = 1e-12;

/// Solves the transmission conditions for a unit degree-k mode directly as a
/// 3x3 linear system in (inner_coeff, outer_sing, outer_reg).
inline ModeProfile solve_mode_oracle(const ProblemParams& p, int degree, ModeKind kind)
{
    if (degree < 1)
        throw std::invalid_argument("solve_mode_oracle: degree must be at least 1");
    const int n = p.dim();
    const int k = degree;
    const double core = p.radius();
    const double s = p.sigma();

    Eigen::Matrix3d a;
    a << -s * k * std::pow(core, k - 1), (2 - n - k) * std::pow(core, 1 - n - k), k * std::pow(core, k - 1),
        -std::pow(core, k), std::pow(core, 2 - n - k), std::pow(core, k),
        0.0, 1.0, 1.0;
    const auto [jump_rhs, bnd_rhs] = detail::transmission_data(p, kind);
    Eigen::Vector3d b(0.0, jump_rhs, bnd_rhs);

    // Row then column equilibration; the powers of R span many decades for large k.
    Eigen::Vector3d row_scale, col_scale;
    for (int i = 0; i < 3; ++i)
        row_scale(i) = 1.0 / a.row(i).cwiseAbs().maxCoeff();
    Eigen::Matrix3d scaled = row_scale.asDiagonal() * a;
    for (int j = 0; j < 3; ++j)
        col_scale(j) = 1.0 / scaled.col(j).cwiseAbs().maxCoeff();
    scaled = scaled * col_scale.asDiagonal();
    const Eigen::Vector3d rhs = row_scale.cwiseProduct(b);

    const Eigen::FullPivLU<Eigen::Matrix3d> lu(scaled);
    if (lu.rank() < 3)
        throw SingularSystemError("transmission system is singular for degree " + std::to_string(k));
    Eigen::Vector3d y = lu.solve(rhs);
    y += lu.solve(rhs - scaled * y);
    const Eigen::Vector3d x = col_scale.cwiseProduct(y);

    ModeProfile m;
    m.kind = kind;
    m.degree = k;
    m.inner_coeff = x(0);
    m.outer_sing = x(1);
    m.outer_reg = x(2);
    m.denom = denom_F(p, k);
    m.dim = n;
    m.core_radius = core;

    const TransmissionResidual res = transmission_residual(m, p);
    if (!(res.max() < kTransmissionResidualTol))
        throw SingularSystemError("transmission solve residual " + std::to_string(res.max())
                                  + " exceeds tolerance at degree " + std::to_string(k));
    return m;
}

/// Closed-form coefficients B, C, D over the common denominator F, evaluated
/// exactly as printed (including the printed inner B coefficient).
inline ModeProfile closed_form_mode(const ProblemParams& p, int degree, ModeKind kind)
{
    if (degree < 1)
        throw std::invalid_argument("closed_form_mode: degree must be at least 1");
    const double n = p.dim();
    const double k = degree;
    const double core = p.radius();
    const double s = p.sigma();
    const double f = denom_F(p, degree);
    const double big = std::pow(core, 2.0 - n - 2.0 * k);

    ModeProfile m;
    m.kind = kind;
    m.degree = degree;
    m.denom = f;
    m.dim = p.dim();
    m.core_radius = core;
    if (kind == ModeKind::Inner) {
        m.inner_coeff = (1.0 - s) * std::pow(core, -k + 1.0) * ((n - 2.0 + k) * big) / f;
        m.outer_sing = (s - 1.0) * k * std::pow(core, -k + 1.0) / f;
        m.outer_reg = -m.outer_sing;
    } else {
        m.inner_coeff = (n - 2.0 + 2.0 * k) * big / f;
        m.outer_sing = (1.0 - s) * k / f;
        m.outer_reg = (n - 2.0 + k + k * s) * big / f;
    }
    return m;
}

/// Pointwise shape derivative u'(r theta) for the given perturbation, built from
/// oracle profiles. Supports N = 2 and N = 3.
inline double u_prime_value(const PerturbationSpec& spec, const ProblemParams& p, double r,
                            std::span<const double> angle)
{
    if (p.dim() != 2 && p.dim() != 3)
        throw std::invalid_argument("u_prime_value supports N = 2 and N = 3 only");
    if (angle.size() != static_cast<std::size_t>(p.dim()))
        throw std::invalid_argument("u_prime_value: angle must be a point of the unit sphere in R^N");
    if (!(r >= 0.0 && r <= 1.0))
        throw std::invalid_argument("u_prime_value: radius must lie in [0,1]");
    spec.check_orders(p.dim());

    double total = 0.0;
    for (const auto& [mode, c] : spec.modes()) {
        if (mode.degree == 0)
            throw std::invalid_argument("u_prime_value: degree-0 modes are not supported");
        double radial = 0.0;
        if (c.alpha_in != 0.0)
            radial += c.alpha_in * solve_mode_oracle(p, mode.degree, ModeKind::Inner).value(r);
        if (c.alpha_out != 0.0)
            radial += c.alpha_out * solve_mode_oracle(p, mode.degree, ModeKind::Outer).value(r);
        if (radial != 0.0)
            total += radial * harmonic(mode, angle);
    }
    return total;
}

} // namespace torsion
