#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "torsion/exact_state.hpp"
#include "torsion/pde_oracle.hpp"
#include "torsion/presets.hpp"
#include "torsion/second_variation.hpp"
#include "torsion/sweep.hpp"
#include "torsion/tolerance.hpp"
#include "torsion/transmission.hpp"

namespace torsion {

// Property suites over the default grids. Each property records the number of
// cases it evaluated and the first counterexample.

enum class Suite { Coefficients, SecondVar, Monotonicity, Pde };

inline const char* to_string(Suite s)
{
    switch (s) {
    case Suite::Coefficients: return "coefficients";
    case Suite::SecondVar: return "secondvar";
    case Suite::Monotonicity: return "monotonicity";
    case Suite::Pde: return "pde";
    }
    return "?";
}

inline Suite parse_suite(std::string_view name)
{
    for (Suite s : {Suite::Coefficients, Suite::SecondVar, Suite::Monotonicity, Suite::Pde})
        if (name == to_string(s))
            return s;
    throw std::invalid_argument("unknown suite '" + std::string(name)
                                + "' (expected coefficients, secondvar, monotonicity or pde)");
}

struct PropertyResult {
    std::string name;
    std::size_t cases = 0;
    bool passed = true;
    std::string counterexample;
};

struct SuiteReport {
    Suite suite = Suite::Coefficients;
    std::vector<PropertyResult> properties;

    bool passed() const
    {
        for (const auto& p : properties)
            if (!p.passed)
                return false;
        return true;
    }
};

/// Collects case outcomes for one property.
class PropertyCheck {
public:
    explicit PropertyCheck(std::string name) { result_.name = std::move(name); }

    template <class Describe>
    bool expect(bool ok, Describe&& describe)
    {
        ++result_.cases;
        if (!ok && result_.passed) {
            result_.passed = false;
            result_.counterexample = describe();
        }
        return ok;
    }

    PropertyResult result() const { return result_; }

private:
    PropertyResult result_;
};

namespace detail {

inline std::string with_values(const std::string& where, const char* what, double got, double want)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, ": %s = %.17g, expected %.17g", what, got, want);
    return where + buf;
}

/// Relative closeness measured against an explicit scale.
inline bool close_at_scale(double a, double b, double scale, double rel)
{
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), std::abs(scale)});
}

inline std::vector<ProblemParams> single_phase_points()
{
    std::vector<ProblemParams> out;
    for (int n : {2, 3, 4})
        for (double r : {0.2, 0.5, 0.8})
            out.emplace_back(n, r, 1.0);
    return out;
}

inline std::vector<ProblemParams> resonance_points()
{
    std::vector<ProblemParams> out;
    for (int n : {2, 3, 4})
        for (double s : {1.5, 2.0, 10.0})
            for (double r : {0.2, 0.5, 0.8})
                out.emplace_back(n, r, s);
    return out;
}

/// 100 amplitudes: 98 evenly spread over [-5, 5] plus t = -1 and t = 1.
inline std::vector<double> resonance_amplitudes()
{
    std::vector<double> t;
    for (int j = 0; j < 98; ++j)
        t.push_back(-5.0 + 10.0 * j / 97.0);
    t.push_back(-1.0);
    t.push_back(1.0);
    return t;
}

} // namespace detail

inline SuiteReport verify_coefficients(const ParameterGrid& grid = {})
{
    PropertyCheck residual("transmission residuals below 1e-12");
    PropertyCheck positive_f("denominator F positive on grid and random samples");
    PropertyCheck c_in("closed-form C_in matches solved coefficient to 1e-10");
    PropertyCheck d_in("closed-form D_in matches solved coefficient to 1e-10");
    PropertyCheck outer("closed-form outer coefficients match solved ones to 1e-10");

    for (const ProblemParams& p : grid.points()) {
        for (int k = grid.degree_min; k <= grid.degree_max; ++k) {
            const std::string where = describe_point(p, k);
            for (ModeKind kind : {ModeKind::Inner, ModeKind::Outer}) {
                const ModeProfile m = solve_mode_oracle(p, k, kind);
                const TransmissionResidual r = transmission_residual(m, p);
                residual.expect(r.max() < kTransmissionResidualTol, [&] {
                    return detail::with_values(where + " " + to_string(kind), "residual", r.max(), 0.0);
                });
            }
            const double f = denom_F(p, k);
            positive_f.expect(f > 0.0, [&] { return detail::with_values(where, "F", f, 1.0); });

            const ModeProfile oi = solve_mode_oracle(p, k, ModeKind::Inner);
            const ModeProfile pi = closed_form_mode(p, k, ModeKind::Inner);
            const double shell_in = std::max(std::abs(oi.outer_sing), std::abs(oi.outer_reg));
            c_in.expect(detail::close_at_scale(pi.outer_sing, oi.outer_sing, shell_in, kRelTol),
                        [&] { return detail::with_values(where, "C_in", pi.outer_sing, oi.outer_sing); });
            d_in.expect(detail::close_at_scale(pi.outer_reg, oi.outer_reg, shell_in, kRelTol),
                        [&] { return detail::with_values(where, "D_in", pi.outer_reg, oi.outer_reg); });

            const ModeProfile oo = solve_mode_oracle(p, k, ModeKind::Outer);
            const ModeProfile po = closed_form_mode(p, k, ModeKind::Outer);
            const double shell_out = std::max(std::abs(oo.outer_sing), std::abs(oo.outer_reg));
            outer.expect(detail::close_at_scale(po.inner_coeff, oo.inner_coeff, 0.0, kRelTol)
                             && detail::close_at_scale(po.outer_sing, oo.outer_sing, shell_out, kRelTol)
                             && detail::close_at_scale(po.outer_reg, oo.outer_reg, shell_out, kRelTol),
                         [&] { return detail::with_values(where, "B_out", po.inner_coeff, oo.inner_coeff); });
        }
    }

    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> dim_dist(2, 10), degree_dist(1, 40);
    std::uniform_real_distribution<double> radius_dist(0.01, 0.99), log_sigma(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const ProblemParams p(dim_dist(rng), radius_dist(rng), std::pow(10.0, log_sigma(rng)));
        const int k = degree_dist(rng);
        const double f = denom_F(p, k);
        positive_f.expect(f > 0.0, [&] { return detail::with_values(describe_point(p, k), "F", f, 1.0); });
    }
    return {Suite::Coefficients,
            {residual.result(), positive_f.result(), c_in.result(), d_in.result(), outer.result()}};
}

inline SuiteReport verify_second_variation(const ParameterGrid& grid = {})
{
    PropertyCheck translation("e_in(1) = e_out(1) to 1e-12");
    PropertyCheck eps_one("e_in(1) = 2(1-sigma)/F(1) to 1e-10");
    PropertyCheck single_phase("sigma = 1: e_in = 0, e_out(1) = 0, e_out(k) < 0 for k = 2..50");
    PropertyCheck decreasing("e_out decreasing in k = 1..50, e_in too when sigma != 1");
    PropertyCheck discriminant("factored discriminant equals e_res^2 - 4 e_in e_out to 1e-10");
    PropertyCheck resonance("Delta <= 0, Delta(1) = 0 and Q(t) < 0 for k >= 2");
    PropertyCheck translation_mode("matched k = 1 translation has zero second variation");

    for (const ProblemParams& p : grid.points()) {
        const SecondVariationSpectrum one = spectrum(p, 1);
        const std::string where = describe_point(p, 1);
        translation.expect(detail::close_at_scale(one.e_in, one.e_out, 0.0, 1e-12),
                           [&] { return detail::with_values(where, "e_in(1)", one.e_in, one.e_out); });
        const double ref = 2.0 * (1.0 - p.sigma()) / denom_F(p, 1);
        eps_one.expect(detail::close_at_scale(one.e_in, ref, 0.0, kRelTol),
                       [&] { return detail::with_values(where, "e_in(1)", one.e_in, ref); });

        SecondVariationSpectrum prev = one;
        for (int k = 2; k <= 50; ++k) {
            const SecondVariationSpectrum e = spectrum(p, k);
            const bool ok = e.e_out < prev.e_out && (approx_equal(p.sigma(), 1.0) || e.e_in < prev.e_in);
            decreasing.expect(ok, [&] { return detail::with_values(describe_point(p, k), "e_out", e.e_out, prev.e_out); });
            prev = e;
        }
        for (int k = grid.degree_min; k <= grid.degree_max; ++k) {
            const SecondVariationSpectrum e = spectrum(p, k);
            const double disc = e.e_res * e.e_res - 4.0 * e.e_in * e.e_out;
            const double scale = discriminant_scale(e.e_in, e.e_res, e.e_out);
            const double factored = factored_discriminant(p, k);
            discriminant.expect(detail::close_at_scale(factored, disc, scale, kRelTol), [&] {
                return detail::with_values(describe_point(p, k), "factored", factored, disc);
            });
        }
    }

    for (const ProblemParams& p : detail::single_phase_points()) {
        for (int k = 1; k <= 50; ++k) {
            const SecondVariationSpectrum e = spectrum(p, k);
            const double scale = std::max(1.0, std::abs(e.e_out));
            const bool ok = std::abs(e.e_in) <= 1e-12 * scale
                            && (k == 1 ? std::abs(e.e_out) <= 1e-12 : e.e_out < 0.0);
            single_phase.expect(ok, [&] { return detail::with_values(describe_point(p, k), "e_in", e.e_in, 0.0); });
        }
    }

    const std::vector<double> amplitudes = detail::resonance_amplitudes();
    for (const ProblemParams& p : detail::resonance_points()) {
        for (int k = 1; k <= 50; ++k) {
            const ResonanceAnalysis r = resonance_analysis(p, k);
            const double scale = discriminant_scale(r.q_leading, r.q_linear, r.q_constant);
            const std::string where = describe_point(p, k);
            if (k == 1) {
                resonance.expect(std::abs(r.discriminant) <= kRelTol * scale,
                                 [&] { return detail::with_values(where, "Delta(1)", r.discriminant, 0.0); });
                continue;
            }
            resonance.expect(r.discriminant <= kRelTol * scale,
                             [&] { return detail::with_values(where, "Delta", r.discriminant, 0.0); });
            for (double t : amplitudes) {
                const double q = r.q(t);
                resonance.expect(q < 0.0, [&] { return detail::with_values(where + " t=" + std::to_string(t), "Q", q, -1.0); });
            }
        }
        const double v = total_second_variation(resonance_preset("case-v"), p);
        const SecondVariationSpectrum one = spectrum(p, 1);
        const double scale = std::abs(one.e_in) + std::abs(one.e_out) + std::abs(one.e_res);
        translation_mode.expect(std::abs(v) <= kRelTol * scale,
                                [&] { return detail::with_values(describe_point(p, 1), "E''", v, 0.0); });
    }

    return {Suite::SecondVar,
            {translation.result(), eps_one.result(), single_phase.result(), decreasing.result(),
             discriminant.result(), resonance.result(), translation_mode.result()}};
}

/// x grid: 80 log-spaced points in [1e-3, 50].
inline std::vector<double> monotonicity_abscissae()
{
    std::vector<double> x;
    const int count = 80;
    for (int i = 0; i < count; ++i)
        x.push_back(std::pow(10.0, -3.0 + (std::log10(50.0) + 3.0) * i / (count - 1)));
    return x;
}

inline SuiteReport verify_monotonicity()
{
    PropertyCheck negative("a(x), b(x), c(x) < 0 on the log grid over 100 (N, R) pairs");
    const std::vector<double> xs = monotonicity_abscissae();
    for (int n = 2; n <= 11; ++n) {
        for (int j = 0; j < 10; ++j) {
            const ProblemParams p(n, 0.05 + 0.1 * j, 2.0);
            for (double x : xs) {
                const MonotonicityTriple m = monotonicity_functions(p, x);
                negative.expect(m.a < 0.0 && m.b < 0.0 && m.c < 0.0, [&] {
                    char buf[160];
                    std::snprintf(buf, sizeof buf, "N=%d R=%.17g x=%.17g: a=%.6g b=%.6g c=%.6g", n, p.radius(),
                                  x, m.a, m.b, m.c);
                    return std::string(buf);
                });
            }
        }
    }
    return {Suite::Monotonicity, {negative.result()}};
}

struct PdeSuiteSettings {
    int radial_points = 512;
    int angular_modes = 64;
    double t0 = 1e-2;
    int levels = 2;
};

inline SuiteReport verify_pde(const PdeSuiteSettings& s = {})
{
    PropertyCheck baseline("unperturbed energy within 1e-6 of the closed form");
    PropertyCheck order("observed radial convergence order in [1.5, 2.5]");
    PropertyCheck stationary("|d1| < 1e-4 E(0) for k = 1, 2, 3 on both boundaries");
    PropertyCheck second("d2 within 2% of the assembled E'' for k = 2, inner and outer alone");
    PropertyCheck coupled("coupled k = 2 run recovers e_res(2) within 5%");

    OracleSettings cfg;
    cfg.radial_points = s.radial_points;
    cfg.angular_modes = s.angular_modes;
    cfg.t0 = s.t0;
    cfg.levels = s.levels;

    for (double sigma : {1.0, 2.0}) {
        const ProblemParams p(2, 0.5, sigma);
        const PerturbedDomainFamily flat(p, {}, {});
        const double exact = baseline_energy(p);
        const double e = solve_energy(flat, s.radial_points, s.angular_modes);
        baseline.expect(std::abs(e - exact) <= 1e-6 * exact, [&] {
            return detail::with_values(describe_point(p, 0), "E(0)", e, exact);
        });
        const double coarse = solve_energy(flat, s.radial_points / 2, s.angular_modes);
        const double coarser = solve_energy(flat, s.radial_points / 4, s.angular_modes);
        const double rate = std::log2(std::abs(coarser - exact) / std::abs(coarse - exact));
        order.expect(rate >= 1.5 && rate <= 2.5,
                     [&] { return detail::with_values(describe_point(p, 0), "order", rate, 2.0); });
    }

    const ProblemParams p(2, 0.5, 2.0);
    OracleSettings quick = cfg;
    quick.measure_convergence = false;
    for (int k = 1; k <= 3; ++k) {
        for (bool inner : {true, false}) {
            PerturbationSpec spec;
            spec.set(k, 1, inner ? 1.0 : 0.0, inner ? 0.0 : 1.0);
            const OracleRun run = differentiate_energy(PerturbedDomainFamily::from_spec(p, spec), quick);
            stationary.expect(std::abs(run.d1) < 1e-4 * run.baseline(), [&] {
                return detail::with_values(describe_point(p, k) + (inner ? " inner" : " outer"), "d1", run.d1, 0.0);
            });
            if (k != 2)
                continue;
            const double want = total_second_variation(spec, p);
            second.expect(std::abs(run.d2 - want) <= 0.02 * std::abs(want), [&] {
                return detail::with_values(describe_point(p, k) + (inner ? " inner" : " outer"), "d2", run.d2, want);
            });
        }
    }

    PerturbationSpec in_only, out_only, both;
    in_only.set(2, 1, 1.0, 0.0);
    out_only.set(2, 1, 0.0, 1.0);
    both.set(2, 1, 1.0, 1.0);
    const double d_in = differentiate_energy(PerturbedDomainFamily::from_spec(p, in_only), quick).d2;
    const double d_out = differentiate_energy(PerturbedDomainFamily::from_spec(p, out_only), quick).d2;
    const double d_both = differentiate_energy(PerturbedDomainFamily::from_spec(p, both), quick).d2;
    const double cross = d_both - d_in - d_out;
    const double e_res = spectrum(p, 2).e_res;
    coupled.expect(std::abs(cross - e_res) <= 0.05 * std::abs(e_res),
                   [&] { return detail::with_values(describe_point(p, 2), "cross term", cross, e_res); });

    return {Suite::Pde, {baseline.result(), order.result(), stationary.result(), second.result(), coupled.result()}};
}

inline SuiteReport run_suite(Suite suite)
{
    switch (suite) {
    case Suite::Coefficients: return verify_coefficients();
    case Suite::SecondVar: return verify_second_variation();
    case Suite::Monotonicity: return verify_monotonicity();
    case Suite::Pde: return verify_pde();
    }
    throw std::invalid_argument("unknown suite");
}

} // namespace torsion
