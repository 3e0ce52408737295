// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "torsion/exact_state.hpp"
#include "torsion/pde_oracle.hpp"
#include "torsion/presets.hpp"
#include "torsion/second_variation.hpp"
#include "torsion/stability.hpp"
#include "torsion/sweep.hpp"
#include "torsion/transmission.hpp"

using namespace torsion;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;

    // keeps the first failure message
    void require(bool ok, const std::string& what)
    {
        if (!ok && passed) {
            passed = false;
            detail = what;
        }
    }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

const std::vector<ProblemParams> kGrid = ParameterGrid{}.points();

double scale_of(const SecondVariationSpectrum& e)
{
    return std::max({std::abs(e.e_in), std::abs(e.e_out), std::abs(e.e_res)});
}

Outcome transmission_residuals()
{
    Outcome o;
    double worst = 0.0;
    for (const auto& p : kGrid)
        for (int k = 1; k <= 20; ++k)
            for (ModeKind kind : {ModeKind::Inner, ModeKind::Outer}) {
                const double r = transmission_residual(solve_mode_oracle(p, k, kind), p).max();
                worst = std::max(worst, r);
                o.require(r < 1e-12, describe_point(p, k) + fmt(" residual %.3e", r));
            }
    if (o.passed)
        o.detail = fmt("max residual %.3e over 900 degree/parameter points, both kinds", worst);
    return o;
}

Outcome denominator_positive()
{
    Outcome o;
    double smallest = INFINITY;
    for (const auto& p : kGrid)
        for (int k = 1; k <= 20; ++k) {
            const double f = denom_F(p, k);
            smallest = std::min(smallest, f);
            o.require(f > 0.0, describe_point(p, k) + fmt(" F = %.17g", f));
        }
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dim(2, 12), degree(1, 60);
    std::uniform_real_distribution<double> radius(1e-3, 1.0 - 1e-3), log_sigma(-4.0, 4.0);
    for (int i = 0; i < 1000; ++i) {
        const ProblemParams p(dim(rng), radius(rng), std::pow(10.0, log_sigma(rng)));
        const int k = degree(rng);
        const double f = denom_F(p, k);
        smallest = std::min(smallest, f);
        o.require(f > 0.0, describe_point(p, k) + fmt(" F = %.17g", f));
    }
    if (o.passed)
        o.detail = fmt("min F %.4g over grid + 1000 random samples", smallest);
    return o;
}

Outcome closed_form_fidelity()
{
    Outcome o;
    double worst_cd = 0.0, worst_b = 0.0;
    for (const auto& p : kGrid)
        for (int k = 1; k <= 20; ++k) {
            const ModeProfile solved = solve_mode_oracle(p, k, ModeKind::Inner);
            const ModeProfile printed = closed_form_mode(p, k, ModeKind::Inner);
            const double scale = std::max({std::abs(solved.outer_sing), std::abs(solved.outer_reg), 1e-300});
            const double dc = std::abs(printed.outer_sing - solved.outer_sing) / scale;
            const double dd = std::abs(printed.outer_reg - solved.outer_reg) / scale;
            worst_cd = std::max({worst_cd, dc, dd});
            o.require(dc <= 1e-10 && dd <= 1e-10, describe_point(p, k) + fmt(" C/D deviation %.3e %.3e", dc, dd));

            // the printed interior coefficient must be evaluated verbatim, never corrected
            const double n = p.dim(), r = p.radius(), s = p.sigma();
            const double verbatim = (1.0 - s) * std::pow(r, 1.0 - k) * (n - 2.0 + k) * std::pow(r, 2.0 - n - 2.0 * k)
                                    / denom_F(p, k);
            o.require(printed.inner_coeff == verbatim || std::abs(printed.inner_coeff - verbatim) <= 1e-14 * std::abs(verbatim),
                      describe_point(p, k) + " printed B_in was altered");
            const double db = std::abs(printed.inner_coeff - solved.inner_coeff)
                              / std::max({std::abs(printed.inner_coeff), std::abs(solved.inner_coeff), 1e-300});
            worst_b = std::max(worst_b, db);
        }
    if (o.passed)
        o.detail = fmt("C_in/D_in max deviation %.3e; B_in max deviation %.3e", worst_cd, worst_b)
                   + (worst_b <= 1e-10 ? " -> Match" : " -> Mismatch, reported in the fidelity report");
    return o;
}

Outcome translation_invariance()
{
    Outcome o;
    double worst = 0.0;
    for (const auto& p : kGrid) {
        const SecondVariationSpectrum e = spectrum(p, 1);
        const double d = std::abs(e.e_in - e.e_out) / std::max({std::abs(e.e_in), std::abs(e.e_out), 1e-300});
        worst = std::max(worst, d);
        o.require(d <= 1e-12, describe_point(p, 1) + fmt(" e_in=%.17g e_out=%.17g", e.e_in, e.e_out));
    }
    if (o.passed)
        o.detail = fmt("max relative gap %.3e", worst);
    return o;
}

Outcome single_phase()
{
    Outcome o;
    for (int n : {2, 3, 4})
        for (double r : {0.2, 0.5, 0.8}) {
            const ProblemParams p(n, r, 1.0);
            for (int k = 1; k <= 50; ++k) {
                const SecondVariationSpectrum e = spectrum(p, k);
                o.require(std::abs(e.e_in) <= 1e-12, describe_point(p, k) + fmt(" e_in=%.3e", e.e_in));
                if (k == 1)
                    o.require(std::abs(e.e_out) <= 1e-12, describe_point(p, k) + fmt(" e_out=%.3e", e.e_out));
                else
                    o.require(e.e_out < 0.0, describe_point(p, k) + fmt(" e_out=%.3e", e.e_out));
            }
        }
    if (o.passed)
        o.detail = "N in {2,3,4}, R in {0.2,0.5,0.8}, k = 1..50";
    return o;
}

Outcome monotone_spectra()
{
    Outcome o;
    for (const auto& p : kGrid) {
        SecondVariationSpectrum prev = spectrum(p, 1);
        for (int k = 2; k <= 50; ++k) {
            const SecondVariationSpectrum e = spectrum(p, k);
            o.require(e.e_out < prev.e_out, describe_point(p, k) + fmt(" e_out %.17g >= %.17g", e.e_out, prev.e_out));
            if (p.sigma() != 1.0)
                o.require(e.e_in < prev.e_in, describe_point(p, k) + fmt(" e_in %.17g >= %.17g", e.e_in, prev.e_in));
            prev = e;
        }
    }
    if (o.passed)
        o.detail = "45 parameter points, k = 1..50";
    return o;
}

Outcome proof_functions()
{
    Outcome o;
    std::vector<double> xs;
    for (int i = 0; i < 100; ++i)
        xs.push_back(std::pow(10.0, -4.0 + (std::log10(50.0) + 4.0) * i / 99.0));
    int combos = 0;
    for (int n = 2; n <= 11; ++n)
        for (int j = 0; j < 12; ++j) {
            const ProblemParams p(n, 0.04 + 0.08 * j, 2.0);
            ++combos;
            for (double x : xs) {
                const MonotonicityTriple m = monotonicity_functions(p, x);
                o.require(m.a < 0.0 && m.b < 0.0 && m.c < 0.0,
                          describe_point(p, 0) + fmt(" x=%.6g a=%.3e b=%.3e", x, m.a, m.b) + fmt(" c=%.3e", m.c));
            }
        }
    if (o.passed)
        o.detail = std::to_string(combos) + " (N,R) pairs x 100 log-spaced x in [1e-4, 50]";
    return o;
}

Outcome resonance()
{
    Outcome o;
    std::vector<double> ts;
    for (int j = 0; j < 98; ++j)
        ts.push_back(-5.0 + 10.0 * j / 97.0);
    ts.push_back(-1.0);
    ts.push_back(1.0);
    for (int n : {2, 3, 4})
        for (double s : {1.5, 2.0, 10.0})
            for (double r : {0.2, 0.5, 0.8}) {
                const ProblemParams p(n, r, s);
                for (int k = 1; k <= 50; ++k) {
                    const ResonanceAnalysis q = resonance_analysis(p, k);
                    const double scale = q.q_linear * q.q_linear + 4.0 * std::abs(q.q_leading * q.q_constant);
                    if (k == 1) {
                        o.require(std::abs(q.discriminant) <= 1e-10 * scale,
                                  describe_point(p, k) + fmt(" Delta=%.3e scale=%.3e", q.discriminant, scale));
                        continue;
                    }
                    o.require(q.discriminant <= 0.0, describe_point(p, k) + fmt(" Delta=%.3e", q.discriminant));
                    for (double t : ts)
                        o.require(q.q(t) < 0.0, describe_point(p, k) + fmt(" Q(%.4g)=%.3e", t, q.q(t)));
                }
                const SecondVariationSpectrum one = spectrum(p, 1);
                const double v = total_second_variation(resonance_preset("case-v"), p);
                o.require(std::abs(v) <= 1e-10 * scale_of(one), describe_point(p, 1) + fmt(" case V E''=%.3e", v));
            }
    if (o.passed)
        o.detail = "sigma in {1.5,2,10}, 27 points, k = 1..50, 100 amplitudes";
    return o;
}

OracleSettings oracle_settings(bool convergence)
{
    OracleSettings cfg;
    cfg.radial_points = 512;
    cfg.angular_modes = 64;
    cfg.t0 = 1e-2;
    cfg.levels = 2;
    cfg.measure_convergence = convergence;
    return cfg;
}

OracleRun oracle_run(const ProblemParams& p, const PerturbationSpec& spec)
{
    return differentiate_energy(PerturbedDomainFamily::from_spec(p, spec), oracle_settings(false));
}

Outcome pde_baseline()
{
    Outcome o;
    std::string detail;
    for (double s : {1.0, 2.0}) {
        const ProblemParams p(2, 0.5, s);
        const PerturbedDomainFamily flat(p, {}, {});
        const double exact = baseline_energy(p);
        const double fine = solve_energy(flat, 512, 64);
        const double half = solve_energy(flat, 256, 64);
        const double quarter = solve_energy(flat, 128, 64);
        const double err = std::abs(fine - exact) / exact;
        const double rate = std::log2(std::abs(quarter - half) / std::abs(half - fine));
        o.require(err <= 1e-6, fmt("sigma=%g relative error %.3e", s, err));
        o.require(rate >= 1.5 && rate <= 2.5, fmt("sigma=%g order %.3f", s, rate));
        if (!detail.empty())
            detail += "; ";
        detail += fmt("sigma=%g: rel err %.2e, order %.3f", s, err, rate);
    }
    if (o.passed)
        o.detail = detail;
    return o;
}

Outcome pde_first_variation()
{
    Outcome o;
    const ProblemParams p(2, 0.5, 2.0);
    double worst = 0.0;
    for (int k = 1; k <= 3; ++k)
        for (bool inner : {true, false}) {
            PerturbationSpec spec;
            spec.set(k, 1, inner ? 1.0 : 0.0, inner ? 0.0 : 1.0);
            const OracleRun run = oracle_run(p, spec);
            const double ratio = std::abs(run.d1) / run.baseline();
            worst = std::max(worst, ratio);
            o.require(ratio < 1e-4, fmt("k=%g |d1|/E0 = %.3e", k, ratio) + (inner ? " inner" : " outer"));
        }
    if (o.passed)
        o.detail = fmt("max |d1|/E(0) = %.3e over k = 1,2,3 on both boundaries", worst);
    return o;
}

Outcome pde_second_variation()
{
    Outcome o;
    const ProblemParams p(2, 0.5, 2.0);
    PerturbationSpec in_only, out_only, both;
    in_only.set(2, 1, 1.0, 0.0);
    out_only.set(2, 1, 0.0, 1.0);
    both.set(2, 1, 1.0, 1.0);
    const SecondVariationSpectrum e = spectrum(p, 2);

    const double d_in = oracle_run(p, in_only).d2;
    const double d_out = oracle_run(p, out_only).d2;
    const double d_both = oracle_run(p, both).d2;
    const double rel_in = std::abs(d_in - e.e_in) / std::abs(e.e_in);
    const double rel_out = std::abs(d_out - e.e_out) / std::abs(e.e_out);
    const double cross = d_both - d_in - d_out;
    const double rel_res = std::abs(cross - e.e_res) / std::abs(e.e_res);
    o.require(rel_in <= 0.02, fmt("inner d2=%.8g assembled=%.8g (%.3e)", d_in, e.e_in, rel_in));
    o.require(rel_out <= 0.02, fmt("outer d2=%.8g assembled=%.8g (%.3e)", d_out, e.e_out, rel_out));
    o.require(rel_res <= 0.05, fmt("cross term %.8g vs e_res %.8g (%.3e)", cross, e.e_res, rel_res));
    if (o.passed)
        o.detail = fmt("rel dev inner %.2e, outer %.2e, ", rel_in, rel_out) + fmt("resonance %.2e", rel_res);
    return o;
}

Outcome classifier()
{
    Outcome o;
    const ProblemParams hard(2, 0.5, 2.0), soft(2, 0.5, 0.5);
    const StabilityVerdict vh = classify(hard, 30);
    o.require(vh.classification == Classification::LocalMaximum,
              std::string("sigma=2 classified ") + to_string(vh.classification));
    const StabilityVerdict vs = classify(soft, 30);
    o.require(vs.classification == Classification::Saddle, std::string("sigma=0.5 classified ") + to_string(vs.classification));
    if (!o.passed || !vs.witness_positive || !vs.witness_negative) {
        o.require(false, "missing witnesses");
        return o;
    }
    const double plus = total_second_variation(*vs.witness_positive, soft);
    const double minus = total_second_variation(*vs.witness_negative, soft);
    o.require(plus > 0.0, fmt("positive witness E''=%.6g", plus));
    o.require(minus < 0.0, fmt("negative witness E''=%.6g", minus));

    const double d_plus = oracle_run(soft, *vs.witness_positive).d2;
    const double d_minus = oracle_run(soft, *vs.witness_negative).d2;
    o.require(d_plus > 0.0 && std::abs(d_plus - plus) <= 0.05 * std::abs(plus),
              fmt("oracle positive witness d2=%.6g vs %.6g", d_plus, plus));
    o.require(d_minus < 0.0 && std::abs(d_minus - minus) <= 0.05 * std::abs(minus),
              fmt("oracle negative witness d2=%.6g vs %.6g", d_minus, minus));
    if (o.passed)
        o.detail = fmt("witness E'' %+.6g (oracle %+.6g), ", plus, d_plus) + fmt("%+.6g (oracle %+.6g)", minus, d_minus);
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double budget_s; // 0: no runtime bound
    std::function<Outcome()> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "transmission residuals below 1e-12 on the grid", 10.0, transmission_residuals},
        {2, "denominator F positive on the grid and 1000 random samples", 5.0, denominator_positive},
        {3, "closed-form C_in, D_in match the solved modes; B_in reported", 0.0, closed_form_fidelity},
        {4, "translation invariance e_in(1) = e_out(1)", 0.0, translation_invariance},
        {5, "single-phase degeneracy at sigma = 1", 0.0, single_phase},
        {6, "spectra strictly decreasing in k", 0.0, monotone_spectra},
        {7, "proof functions a, b, c negative", 5.0, proof_functions},
        {8, "resonance discriminant and coupled quadratic", 0.0, resonance},
        {9, "PDE baseline energy and convergence order", 0.0, pde_baseline},
        {10, "PDE first variation vanishes", 180.0, pde_first_variation},
        {11, "PDE second variation matches the assembled spectrum", 300.0, pde_second_variation},
        {12, "classifier verdicts with oracle-confirmed witnesses", 0.0, classifier},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_s > 0.0 && secs > c.budget_s && o.passed) {
            o.passed = false;
            o.detail = fmt("runtime %.2f s exceeds %.0f s", secs, c.budget_s);
        }
        failures += o.passed ? 0 : 1;
        std::printf("[%s] AC%02d %s (%.2f s): %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
