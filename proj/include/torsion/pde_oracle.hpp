#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "torsion/harmonics.hpp"
#include "torsion/parallel.hpp"
#include "torsion/params.hpp"

namespace torsion {

// Numerical two-phase torsion solver on perturbed disks (N = 2 only).
//
// The physical domain is pulled back to the unit disk by a piecewise-radial map
// that sends the circle s = R onto the perturbed interface and s = 1 onto the
// perturbed outer boundary. In (s, theta) the problem is discretised with
// piecewise-linear elements in s (two-point Gauss quadrature per cell) and
// trigonometric collocation in theta. The interface is a mesh circle, so the
// coefficient jump is resolved without interpolation and flux continuity is
// the natural condition of the weak form.

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite cosine/sine series g(theta) = sum c_{k,i} Y_{k,i}(theta).
class AngularProfile {
public:
    struct Term {
        ModeIndex mode;
        double coeff;
    };

    AngularProfile& add(ModeIndex mode, double coeff)
    {
        if (mode.order < 1 || mode.order > multiplicity(2, mode.degree))
            throw std::invalid_argument("AngularProfile: invalid circular mode");
        if (coeff != 0.0)
            terms_.push_back({mode, coeff});
        return *this;
    }

    static AngularProfile inner_of(const PerturbationSpec& spec)
    {
        AngularProfile g;
        for (const auto& [mode, c] : spec.modes())
            g.add(mode, c.alpha_in);
        return g;
    }

    static AngularProfile outer_of(const PerturbationSpec& spec)
    {
        AngularProfile g;
        for (const auto& [mode, c] : spec.modes())
            g.add(mode, c.alpha_out);
        return g;
    }

    double value(double theta) const
    {
        double v = 0.0;
        for (const auto& t : terms_)
            v += t.coeff * circular_harmonic(t.mode, theta);
        return v;
    }

    double derivative(double theta) const
    {
        double v = 0.0;
        for (const auto& t : terms_)
            v += t.coeff * circular_harmonic_derivative(t.mode, theta);
        return v;
    }

    /// Angular mean of g^2 (the harmonics are orthonormal, so sum c^2 / 2 pi).
    double mean_square() const
    {
        // coefficients of the same mode may be split across several terms
        double total = 0.0;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            for (std::size_t j = 0; j < terms_.size(); ++j)
                if (terms_[i].mode == terms_[j].mode)
                    total += terms_[i].coeff * terms_[j].coeff;
        return total / (2.0 * std::numbers::pi);
    }

    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

private:
    std::vector<Term> terms_;
};

/// rho(theta, t)^2 = rho0^2 + 2 rho0 t g + t^2 (g^2 - mean(g^2)). For zero-mean g
/// the enclosed area pi rho0^2 is preserved exactly for every t, and d rho/dt = g at t = 0.
struct PerturbedDomainFamily {
    ProblemParams params;
    AngularProfile inner_shape;
    AngularProfile outer_shape;
    double t = 0.0;

    PerturbedDomainFamily(ProblemParams p, AngularProfile inner, AngularProfile outer, double amplitude = 0.0)
        : params(p), inner_shape(std::move(inner)), outer_shape(std::move(outer)), t(amplitude)
    {
        if (params.dim() != 2)
            throw std::invalid_argument("the PDE oracle is restricted to N = 2");
    }

    static PerturbedDomainFamily from_spec(const ProblemParams& p, const PerturbationSpec& spec,
                                           double amplitude = 0.0)
    {
        spec.check_orders(2);
        return {p, AngularProfile::inner_of(spec), AngularProfile::outer_of(spec), amplitude};
    }

    PerturbedDomainFamily at(double amplitude) const
    {
        PerturbedDomainFamily f = *this;
        f.t = amplitude;
        return f;
    }

    static double radius(double base, const AngularProfile& g, double mean_sq, double t, double theta)
    {
        const double gv = g.value(theta);
        const double sq = base * base + 2.0 * base * t * gv + t * t * (gv * gv - mean_sq);
        if (!(sq > 0.0))
            throw OracleError("perturbed radius collapsed at amplitude " + std::to_string(t));
        return std::sqrt(sq);
    }

    static double radius_derivative(double base, const AngularProfile& g, double mean_sq, double t,
                                    double theta)
    {
        const double rho = radius(base, g, mean_sq, t, theta);
        return t * g.derivative(theta) * (base + t * g.value(theta)) / rho;
    }

    double inner_radius(double theta) const
    {
        return radius(params.radius(), inner_shape, inner_shape.mean_square(), t, theta);
    }
    double outer_radius(double theta) const
    {
        return radius(1.0, outer_shape, outer_shape.mean_square(), t, theta);
    }
    double inner_radius_derivative(double theta) const
    {
        return radius_derivative(params.radius(), inner_shape, inner_shape.mean_square(), t, theta);
    }
    double outer_radius_derivative(double theta) const
    {
        return radius_derivative(1.0, outer_shape, outer_shape.mean_square(), t, theta);
    }
};

/// Enclosed area 1/2 int rho^2 d theta by the trapezoid rule (exact for the
/// trigonometric polynomial rho^2 once samples exceed twice its degree).
template <class RadiusFn>
double enclosed_area(RadiusFn&& rho, int samples = 512)
{
    const double h = 2.0 * std::numbers::pi / samples;
    double sum = 0.0;
    for (int m = 0; m < samples; ++m) {
        const double r = rho(m * h);
        sum += r * r;
    }
    return 0.5 * sum * h;
}

/// Periodic spectral differentiation matrix on `points` equispaced nodes.
inline Eigen::MatrixXd fourier_differentiation_matrix(int points)
{
    if (points < 3)
        throw std::invalid_argument("fourier_differentiation_matrix: need at least 3 points");
    const double h = 2.0 * std::numbers::pi / points;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(points, points);
    for (int i = 0; i < points; ++i)
        for (int j = 0; j < points; ++j) {
            if (i == j)
                continue;
            const double x = 0.5 * (i - j) * h;
            const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = points % 2 == 0 ? 0.5 * sign / std::tan(x) : 0.5 * sign / std::sin(x);
        }
    return d;
}

struct EnergySolution {
    /// int sigma |grad u|^2 from the discrete quadratic form.
    double energy = 0.0;
    /// int u from the discrete load; equals `energy` up to solver round-off.
    double load_energy = 0.0;
    /// Area of the mapped domain from the quadrature of the map Jacobian.
    double area = 0.0;
    int radial_points = 0;
    int angular_modes = 0;
};

namespace detail {

/// Radial mesh with the interface at a node: n_in cells on [0,R], the rest on [R,1].
inline std::vector<double> oracle_radial_nodes(double core, int radial_points)
{
    const int n_in = std::clamp(static_cast<int>(std::lround(radial_points * core)), 2, radial_points - 2);
    const int n_out = radial_points - n_in;
    std::vector<double> s(static_cast<std::size_t>(radial_points) + 1);
    for (int j = 0; j <= n_in; ++j)
        s[j] = core * j / n_in;
    for (int j = 1; j <= n_out; ++j)
        s[n_in + j] = core + (1.0 - core) * j / n_out;
    s[n_in] = core;
    s[radial_points] = 1.0;
    return s;
}

} // namespace detail

/// Solves -div(sigma grad u) = 1 on the perturbed two-phase disk and returns the energy.
inline EnergySolution solve_energy_detailed(const PerturbedDomainFamily& family, int radial_points,
                                            int angular_modes)
{
    if (radial_points < 8)
        throw std::invalid_argument("solve_energy: radial_points must be at least 8");
    if (angular_modes < 4)
        throw std::invalid_argument("solve_energy: angular_modes must be at least 4");

    const ProblemParams& p = family.params;
    const double core = p.radius();
    const int m_pts = angular_modes;
    const double dtheta = 2.0 * std::numbers::pi / m_pts;

    Eigen::VectorXd rho_d(m_pts), rho_o(m_pts), drho_d(m_pts), drho_o(m_pts);
    for (int m = 0; m < m_pts; ++m) {
        const double th = m * dtheta;
        rho_d(m) = family.inner_radius(th);
        rho_o(m) = family.outer_radius(th);
        drho_d(m) = family.inner_radius_derivative(th);
        drho_o(m) = family.outer_radius_derivative(th);
    }
    for (int m = 0; m < 4 * m_pts; ++m) {
        const double th = m * dtheta / 4.0;
        if (!(family.inner_radius(th) < family.outer_radius(th)))
            throw OracleError("interface leaves the outer domain at amplitude " + std::to_string(family.t));
    }

    const std::vector<double> nodes = detail::oracle_radial_nodes(core, radial_points);
    const int n_cells = radial_points;
    const int n_free = radial_points; // nodes 0..n-1; node n carries u = 0
    const Eigen::MatrixXd dmat = fourier_differentiation_matrix(m_pts);

    std::vector<Eigen::MatrixXd> diag(n_free, Eigen::MatrixXd::Zero(m_pts, m_pts));
    std::vector<Eigen::MatrixXd> upper(n_free - 1, Eigen::MatrixXd::Zero(m_pts, m_pts));
    std::vector<Eigen::VectorXd> load(n_free, Eigen::VectorXd::Zero(m_pts));
    double area = 0.0;

    const double gauss_offset = 0.5 / std::sqrt(3.0);
    const double gauss_points[2] = {0.5 - gauss_offset, 0.5 + gauss_offset};

    Eigen::VectorXd r(m_pts), rs(m_pts), rt(m_pts);
    Eigen::VectorXd kss(m_pts), kst(m_pts), ktt(m_pts), jac(m_pts);
    for (int e = 0; e < n_cells; ++e) {
        const double s0 = nodes[e];
        const double s1 = nodes[e + 1];
        const double h = s1 - s0;
        const bool in_core = s1 <= core;
        const double coeff = in_core ? p.sigma() : 1.0;

        for (double xi : gauss_points) {
            const double s = s0 + xi * h;
            if (in_core) {
                // identity near the origin, interface onto rho_D at s = R
                const double blend = (s / core) * (s / core);
                const double dblend = 2.0 * s / (core * core);
                r = s + blend * (rho_d.array() - core);
                rs = 1.0 + dblend * (rho_d.array() - core);
                rt = blend * drho_d;
            } else {
                const double lam = (s - core) / (1.0 - core);
                r = rho_d + lam * (rho_o - rho_d);
                rs = (rho_o - rho_d) / (1.0 - core);
                rt = drho_d + lam * (drho_o - drho_d);
            }
            if (r.minCoeff() <= 0.0 || rs.minCoeff() <= 0.0)
                throw OracleError("coordinate map folds at amplitude " + std::to_string(family.t));
            kss = (rt.array().square() + r.array().square()) / (rs.array() * r.array());
            kst = -rt.array() / r.array();
            ktt = rs.array() / r.array();
            jac = r.array() * rs.array();

            const double w = 0.5 * h * dtheta;
            const double phi[2] = {1.0 - xi, xi};
            const double dphi[2] = {-1.0 / h, 1.0 / h};
            const Eigen::MatrixXd cross = kst.asDiagonal() * dmat; // Kst D
            const Eigen::MatrixXd angular = dmat.transpose() * ktt.asDiagonal() * dmat;

            auto block = [&](int a, int b) -> Eigen::MatrixXd {
                Eigen::MatrixXd blk = (dphi[a] * dphi[b]) * Eigen::MatrixXd(kss.asDiagonal());
                blk += (dphi[a] * phi[b]) * cross;
                blk += (phi[a] * dphi[b]) * cross.transpose();
                blk += (phi[a] * phi[b]) * angular;
                return (w * coeff) * blk;
            };

            diag[e] += block(0, 0);
            load[e] += (w * phi[0]) * jac;
            if (e + 1 < n_free) {
                diag[e + 1] += block(1, 1);
                upper[e] += block(0, 1);
                load[e + 1] += (w * phi[1]) * jac;
            }
            area += w * jac.sum();
        }
    }

    // The pole is a single physical point: collapse node 0 to one unknown.
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m_pts);
    diag[0] = Eigen::MatrixXd::Constant(1, 1, ones.dot(diag[0] * ones));
    upper[0] = (ones.transpose() * upper[0]).eval();
    load[0] = Eigen::VectorXd::Constant(1, ones.dot(load[0]));

    // Block tridiagonal Cholesky elimination.
    std::vector<Eigen::LLT<Eigen::MatrixXd>> factors(n_free);
    std::vector<Eigen::MatrixXd> eliminated(n_free - 1);
    std::vector<Eigen::VectorXd> z(n_free);
    Eigen::MatrixXd schur = diag[0];
    Eigen::VectorXd rhs = load[0];
    for (int j = 0; j < n_free; ++j) {
        factors[j].compute(schur);
        if (factors[j].info() != Eigen::Success)
            throw OracleError("linear solve failed: block " + std::to_string(j) + " is not positive definite");
        z[j] = factors[j].solve(rhs);
        if (j + 1 < n_free) {
            eliminated[j] = factors[j].solve(upper[j]);
            schur = diag[j + 1] - upper[j].transpose() * eliminated[j];
            rhs = load[j + 1] - upper[j].transpose() * z[j];
        }
    }
    std::vector<Eigen::VectorXd> u(n_free);
    u[n_free - 1] = z[n_free - 1];
    for (int j = n_free - 2; j >= 0; --j)
        u[j] = z[j] - eliminated[j] * u[j + 1];

    EnergySolution out;
    out.radial_points = radial_points;
    out.angular_modes = angular_modes;
    out.area = area;
    for (int j = 0; j < n_free; ++j) {
        out.energy += u[j].dot(diag[j] * u[j]);
        if (j + 1 < n_free)
            out.energy += 2.0 * u[j].dot(upper[j] * u[j + 1]);
        out.load_energy += load[j].dot(u[j]);
    }
    if (!std::isfinite(out.energy))
        throw OracleError("linear solve produced a non-finite energy");
    return out;
}

inline double solve_energy(const PerturbedDomainFamily& family, int radial_points = 512,
                           int angular_modes = 64)
{
    return solve_energy_detailed(family, radial_points, angular_modes).energy;
}

struct OracleSettings {
    int radial_points = 512;
    int angular_modes = 64;
    double t0 = 1e-2;
    int levels = 2;
    /// Also solve at radial_points/2 and /4 to measure the observed order.
    bool measure_convergence = true;
    int threads = 0; // 0: use TORSION_THREADS / hardware concurrency
};

/// Energy samples along the family and central-difference t-derivatives,
/// Richardson-extrapolated over step halvings.
struct OracleRun {
    PerturbedDomainFamily family;
    int radial_points = 0;
    int angular_modes = 0;
    std::vector<double> t_samples;
    std::vector<double> energies;
    double d1 = 0.0;
    double d2 = 0.0;
    /// Central differences at each step t0 / 2^l before extrapolation.
    std::vector<double> d1_by_step;
    std::vector<double> d2_by_step;
    /// |last - previous| Richardson estimate.
    double d1_spread = 0.0;
    double d2_spread = 0.0;
    bool non_quadratic = false;
    double convergence_rate = NAN;

    double baseline() const
    {
        const auto it = std::find(t_samples.begin(), t_samples.end(), 0.0);
        return energies[static_cast<std::size_t>(it - t_samples.begin())];
    }

    bool rate_accepted() const { return convergence_rate >= 1.5 && convergence_rate <= 2.5; }
};

namespace detail {

/// Richardson extrapolation of estimates with an error series in even powers of the step,
/// each step half the previous. Returns {extrapolated, |last two diagonal entries|}.
inline std::pair<double, double> richardson_even(const std::vector<double>& estimates)
{
    std::vector<std::vector<double>> table(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        table[i].push_back(estimates[i]);
        double factor = 1.0;
        for (std::size_t j = 1; j <= i; ++j) {
            factor *= 4.0;
            table[i].push_back(table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0));
        }
    }
    const auto& last = table.back();
    const double best = last.back();
    const double spread = last.size() > 1 ? std::abs(best - last[last.size() - 2]) : 0.0;
    return {best, spread};
}

} // namespace detail

/// Relative spread of the last two Richardson estimates of d2 above which the run
/// is flagged as not behaving quadratically in t.
inline constexpr double kQuadraticSpreadTol = 1e-2;

inline OracleRun differentiate_energy(const PerturbedDomainFamily& templ, const OracleSettings& cfg = {})
{
    if (!(cfg.t0 > 0.0))
        throw std::invalid_argument("differentiate_energy: t0 must be positive");
    if (cfg.levels < 1)
        throw std::invalid_argument("differentiate_energy: levels must be at least 1");

    std::vector<double> steps;
    for (int l = 0; l < cfg.levels; ++l)
        steps.push_back(cfg.t0 / std::pow(2.0, l));

    OracleRun run{templ.at(0.0)};
    run.radial_points = cfg.radial_points;
    run.angular_modes = cfg.angular_modes;
    run.t_samples.push_back(0.0);
    for (double s : steps) {
        run.t_samples.push_back(s);
        run.t_samples.push_back(-s);
    }
    std::sort(run.t_samples.begin(), run.t_samples.end());

    struct Job {
        double t;
        int radial;
    };
    std::vector<Job> jobs;
    for (double t : run.t_samples)
        jobs.push_back({t, cfg.radial_points});
    if (cfg.measure_convergence) {
        jobs.push_back({cfg.t0, cfg.radial_points / 2});
        jobs.push_back({cfg.t0, cfg.radial_points / 4});
    }
    const int width = cfg.threads > 0 ? cfg.threads : parallel_width();
    const std::vector<double> energies = parallel_map(
        jobs.size(),
        [&](std::size_t i) { return solve_energy(templ.at(jobs[i].t), jobs[i].radial, cfg.angular_modes); },
        width);
    run.energies.assign(energies.begin(), energies.begin() + static_cast<long>(run.t_samples.size()));

    auto energy_at = [&](double t) {
        const auto it = std::find(run.t_samples.begin(), run.t_samples.end(), t);
        return run.energies[static_cast<std::size_t>(it - run.t_samples.begin())];
    };
    const double e0 = energy_at(0.0);
    for (double h : steps) {
        const double plus = energy_at(h);
        const double minus = energy_at(-h);
        run.d1_by_step.push_back((plus - minus) / (2.0 * h));
        run.d2_by_step.push_back((plus - 2.0 * e0 + minus) / (h * h));
    }
    std::tie(run.d1, run.d1_spread) = detail::richardson_even(run.d1_by_step);
    std::tie(run.d2, run.d2_spread) = detail::richardson_even(run.d2_by_step);
    run.non_quadratic = run.d2_spread > kQuadraticSpreadTol * std::abs(run.d2) + 1e-6 * std::abs(e0);

    if (cfg.measure_convergence) {
        const double fine = energy_at(cfg.t0);
        const double half = energies[run.t_samples.size()];
        const double quarter = energies[run.t_samples.size() + 1];
        run.convergence_rate = std::log2(std::abs(quarter - half) / std::abs(half - fine));
    }
    return run;
}

} // namespace torsion
