#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "torsion/params.hpp"
#include "torsion/second_variation.hpp"
#include "torsion/tolerance.hpp"

namespace torsion {

enum class Classification { LocalMaximum, Saddle, NeutralSinglePhase };
enum class Channel { InnerAlone, OuterAlone, Coupled };

inline const char* to_string(Classification c)
{
    switch (c) {
    case Classification::LocalMaximum: return "LocalMaximum";
    case Classification::Saddle: return "Saddle";
    case Classification::NeutralSinglePhase: return "NeutralSinglePhase";
    }
    return "?";
}

inline const char* to_string(Channel c)
{
    switch (c) {
    case Channel::InnerAlone: return "InnerAlone";
    case Channel::OuterAlone: return "OuterAlone";
    case Channel::Coupled: return "Coupled";
    }
    return "?";
}

struct PositiveMode {
    int degree;
    Channel channel;

    friend bool operator==(const PositiveMode&, const PositiveMode&) = default;
};

/// One row of the scanned spectrum with the sign information used for the verdict.
struct ModeDiagnostics {
    int degree = 1;
    SecondVariationSpectrum spectrum;
    ResonanceAnalysis resonance;
    /// sup_t Q(t); +inf when Q is unbounded above.
    double coupled_supremum = 0.0;
    bool outer_admissible = true;
};

struct StabilityVerdict {
    Classification classification = Classification::LocalMaximum;
    int k_max = 0;
    std::vector<PositiveMode> positive_modes;
    std::optional<PerturbationSpec> witness_positive;
    std::optional<PerturbationSpec> witness_negative;
    std::vector<ModeDiagnostics> modes;
};

namespace detail {

inline double degree_scale(const SecondVariationSpectrum& e)
{
    return std::max({std::abs(e.e_in), std::abs(e.e_out), std::abs(e.e_res)});
}

inline bool strictly_positive(double value, double scale) { return value > tolerance_for(scale); }
inline bool strictly_negative(double value, double scale) { return value < -tolerance_for(scale); }

/// Supremum of Q over the real line.
inline double quadratic_supremum(const ResonanceAnalysis& r, double scale)
{
    const double tol = tolerance_for(scale);
    if (r.q_leading > tol)
        return INFINITY;
    if (std::abs(r.q_leading) <= tol)
        return std::abs(r.q_linear) > tol ? INFINITY : r.q_constant;
    return r.q_constant - r.q_linear * r.q_linear / (4.0 * r.q_leading);
}

inline ModeDiagnostics diagnose(const ProblemParams& p, int degree)
{
    ModeDiagnostics d;
    d.degree = degree;
    d.spectrum = spectrum(p, degree, SpectrumPath::Assembled);
    d.resonance = resonance_analysis(p, degree, SpectrumPath::Assembled);
    d.coupled_supremum = quadratic_supremum(d.resonance, degree_scale(d.spectrum));
    d.outer_admissible = degree != 1;
    return d;
}

inline std::vector<PositiveMode> positive_modes_of(const std::vector<ModeDiagnostics>& rows)
{
    std::vector<PositiveMode> out;
    for (const auto& d : rows) {
        const double scale = degree_scale(d.spectrum);
        if (strictly_positive(d.spectrum.e_in, scale))
            out.push_back({d.degree, Channel::InnerAlone});
        if (!d.outer_admissible)
            continue;
        if (strictly_positive(d.spectrum.e_out, scale))
            out.push_back({d.degree, Channel::OuterAlone});
        if (strictly_positive(d.coupled_supremum, scale))
            out.push_back({d.degree, Channel::Coupled});
    }
    return out;
}

inline PerturbationSpec witness_for(const ModeDiagnostics& d, Channel channel)
{
    PerturbationSpec w;
    switch (channel) {
    case Channel::InnerAlone: w.set(d.degree, 1, 1.0, 0.0); break;
    case Channel::OuterAlone: w.set(d.degree, 1, 0.0, 1.0); break;
    case Channel::Coupled: {
        const ResonanceAnalysis& r = d.resonance;
        // maximiser of Q when it is concave, otherwise a point where Q > 0
        double t = 1.0;
        if (r.q_leading < 0.0)
            t = -r.q_linear / (2.0 * r.q_leading);
        else if (r.q_leading > 0.0)
            // past both roots: a t^2 > |b| t + |c| once t > |b|/a + sqrt(|c|/a)
            t = std::abs(r.q_linear) / r.q_leading + std::sqrt(std::abs(r.q_constant) / r.q_leading) + 1.0;
        else if (r.q_linear != 0.0)
            t = (std::abs(r.q_constant) + 1.0) / r.q_linear;
        w.set(d.degree, 1, t, 1.0);
        break;
    }
    }
    return w;
}

inline std::optional<PerturbationSpec> negative_witness(const std::vector<ModeDiagnostics>& rows)
{
    for (const auto& d : rows) {
        const double scale = degree_scale(d.spectrum);
        if (strictly_negative(d.spectrum.e_in, scale))
            return witness_for(d, Channel::InnerAlone);
        if (d.outer_admissible && strictly_negative(d.spectrum.e_out, scale))
            return witness_for(d, Channel::OuterAlone);
    }
    return std::nullopt;
}

inline std::vector<ModeDiagnostics> scan(const ProblemParams& p, int k_max)
{
    std::vector<ModeDiagnostics> rows;
    rows.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k)
        rows.push_back(diagnose(p, k));
    return rows;
}

} // namespace detail

/// (degree, channel) pairs inside the volume- and barycenter-preserving class
/// whose assembled second variation can be strictly positive.
inline std::vector<PositiveMode> positive_mode_set(const ProblemParams& p, int k_max)
{
    if (k_max < 1)
        throw std::invalid_argument("positive_mode_set: k_max must be at least 1");
    return detail::positive_modes_of(detail::scan(p, k_max));
}

/// Classifies the radial configuration over degrees 1..k_max. Beyond k_max the
/// verdict relies on the monotone decay of the spectra.
inline StabilityVerdict classify(const ProblemParams& p, int k_max)
{
    if (k_max < 2)
        throw std::invalid_argument("classify: k_max must be at least 2");
    StabilityVerdict v;
    v.k_max = k_max;
    v.modes = detail::scan(p, k_max);
    v.positive_modes = detail::positive_modes_of(v.modes);
    v.witness_negative = detail::negative_witness(v.modes);

    if (approx_equal(p.sigma(), 1.0)) {
        v.classification = Classification::NeutralSinglePhase;
        return v;
    }
    if (v.positive_modes.empty()) {
        v.classification = Classification::LocalMaximum;
        return v;
    }
    const PositiveMode& first = v.positive_modes.front();
    const auto row = std::find_if(v.modes.begin(), v.modes.end(),
                                  [&](const ModeDiagnostics& d) { return d.degree == first.degree; });
    if (!v.witness_negative)
        throw std::runtime_error("classify: positive directions but no negative one up to k_max");
    v.witness_positive = detail::witness_for(*row, first.channel);
    v.classification = Classification::Saddle;
    return v;
}

} // namespace torsion
