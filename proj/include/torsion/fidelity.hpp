#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "torsion/second_variation.hpp"
#include "torsion/sweep.hpp"
#include "torsion/tolerance.hpp"
#include "torsion/transmission.hpp"

namespace torsion {

// Compares every printed closed form against the value assembled from the
// transmission-system solution. Mismatches are report content, not errors.

enum class FidelityVerdict { Match, Mismatch };

inline const char* to_string(FidelityVerdict v) { return v == FidelityVerdict::Match ? "Match" : "Mismatch"; }

struct FidelityEntry {
    std::string formula;
    /// Values at the grid point of largest deviation.
    double printed = 0.0;
    double assembled = 0.0;
    double deviation = 0.0;
    FidelityVerdict verdict = FidelityVerdict::Match;
    std::string worst_point;
    std::size_t samples = 0;
    std::string note;
};

struct FidelityReport {
    std::string grid;
    double tolerance = kRelTol;
    std::vector<FidelityEntry> entries;

    const FidelityEntry* find(const std::string& formula) const
    {
        for (const auto& e : entries)
            if (e.formula == formula)
                return &e;
        return nullptr;
    }
};

namespace detail {

/// Folds samples of one formula into its entry, keeping the worst one.
class FidelityAccumulator {
public:
    explicit FidelityAccumulator(std::string formula) { entry_.formula = std::move(formula); }

    /// `scale` is the magnitude the deviation is measured against.
    void add(double printed, double assembled, double scale, const std::string& where)
    {
        const double denom = std::max({std::abs(printed), std::abs(assembled), std::abs(scale), kAbsFloor});
        double dev = std::abs(printed - assembled) / denom;
        if (!std::isfinite(dev))
            dev = INFINITY;
        ++entry_.samples;
        if (entry_.samples == 1 || dev > entry_.deviation) {
            entry_.deviation = dev;
            entry_.printed = printed;
            entry_.assembled = assembled;
            entry_.worst_point = where;
        }
    }

    FidelityEntry finish(double tol, const std::string& mismatch_note)
    {
        entry_.verdict = entry_.deviation <= tol ? FidelityVerdict::Match : FidelityVerdict::Mismatch;
        if (entry_.verdict == FidelityVerdict::Mismatch)
            entry_.note = mismatch_note;
        return entry_;
    }

private:
    FidelityEntry entry_;
};

inline double spectrum_scale(const SecondVariationSpectrum& e)
{
    return std::max({std::abs(e.e_in), std::abs(e.e_out), std::abs(e.e_res)});
}

} // namespace detail

inline FidelityReport fidelity_report(const ParameterGrid& grid = {})
{
    using detail::FidelityAccumulator;
    FidelityReport report;
    report.grid = grid.describe();

    FidelityAccumulator b_in("B_k^in"), c_in("C_k^in"), d_in("D_k^in");
    FidelityAccumulator b_out("B_k^out"), c_out("C_k^out"), d_out("D_k^out");
    FidelityAccumulator e_in("E''_in(k)"), e_out("E''_out(k)"), e_res("E''_res(k)");
    FidelityAccumulator delta("Delta(k) factored");
    FidelityAccumulator eps1("E''_eps(1) = 2(1-sigma)/F(1)");
    FidelityAccumulator res1("E''_res(1) = 4(sigma-1)/F(1)");
    FidelityAccumulator q1("Q(t) at k=1 = 2(1-sigma)(t-1)^2/F(1)");

    for (const ProblemParams& p : grid.points()) {
        for (int k = grid.degree_min; k <= grid.degree_max; ++k) {
            const std::string where = describe_point(p, k);

            const ModeProfile oi = solve_mode_oracle(p, k, ModeKind::Inner);
            const ModeProfile pi = closed_form_mode(p, k, ModeKind::Inner);
            const ModeProfile oo = solve_mode_oracle(p, k, ModeKind::Outer);
            const ModeProfile po = closed_form_mode(p, k, ModeKind::Outer);
            // the annulus pair (C, D) is compared against its larger member
            const double shell_in = std::max(std::abs(oi.outer_sing), std::abs(oi.outer_reg));
            const double shell_out = std::max(std::abs(oo.outer_sing), std::abs(oo.outer_reg));
            b_in.add(pi.inner_coeff, oi.inner_coeff, 0.0, where);
            c_in.add(pi.outer_sing, oi.outer_sing, shell_in, where);
            d_in.add(pi.outer_reg, oi.outer_reg, shell_in, where);
            b_out.add(po.inner_coeff, oo.inner_coeff, 0.0, where);
            c_out.add(po.outer_sing, oo.outer_sing, shell_out, where);
            d_out.add(po.outer_reg, oo.outer_reg, shell_out, where);

            const SecondVariationSpectrum a = compute_spectrum(p, k, SpectrumPath::Assembled);
            const SecondVariationSpectrum pr = compute_spectrum(p, k, SpectrumPath::PrintedFormula);
            const double scale = detail::spectrum_scale(a);
            e_in.add(pr.e_in, a.e_in, scale, where);
            e_out.add(pr.e_out, a.e_out, scale, where);
            e_res.add(pr.e_res, a.e_res, scale, where);

            const double disc = a.e_res * a.e_res - 4.0 * a.e_in * a.e_out;
            const double disc_scale = discriminant_scale(a.e_in, a.e_res, a.e_out);
            delta.add(factored_discriminant(p, k), disc, disc_scale, where);

            if (k == 1) {
                const double f1 = denom_F(p, 1);
                const double ref = 2.0 * (1.0 - p.sigma()) / f1;
                eps1.add(ref, a.e_in, scale, where);
                eps1.add(ref, a.e_out, scale, where);
                res1.add(4.0 * (p.sigma() - 1.0) / f1, a.e_res, scale, where);
                for (double t : {-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 4.0}) {
                    const double q = a.e_in * t * t + a.e_res * t + a.e_out;
                    const double q_scale = std::abs(a.e_in) * t * t + std::abs(a.e_res * t) + std::abs(a.e_out);
                    char at[24];
                    std::snprintf(at, sizeof at, " t=%g", t);
                    q1.add(ref * (t - 1.0) * (t - 1.0), q, q_scale, where + at);
                }
            }
        }
    }

    const double tol = report.tolerance;
    const std::string coeff_note =
        "printed form disagrees with the transmission-system solution; downstream uses the solved coefficients";
    const std::string spectrum_note =
        "printed form disagrees with the spectrum assembled from the solved modes; downstream uses the assembled value";
    report.entries = {
        b_in.finish(tol, coeff_note + " (see docs/fidelity.md, interface coefficient)"),
        c_in.finish(tol, coeff_note),
        d_in.finish(tol, coeff_note),
        b_out.finish(tol, coeff_note),
        c_out.finish(tol, coeff_note),
        d_out.finish(tol, coeff_note),
        e_in.finish(tol, spectrum_note + " (see docs/fidelity.md, interface spectrum)"),
        e_out.finish(tol, spectrum_note + " (see docs/fidelity.md, boundary spectrum)"),
        e_res.finish(tol, spectrum_note),
        delta.finish(tol, spectrum_note),
        eps1.finish(tol, spectrum_note),
        res1.finish(tol, spectrum_note),
        q1.finish(tol, spectrum_note),
    };
    return report;
}

} // namespace torsion
