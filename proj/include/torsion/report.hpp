#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"

#include "torsion/fidelity.hpp"
#include "torsion/pde_oracle.hpp"
#include "torsion/second_variation.hpp"
#include "torsion/stability.hpp"

namespace torsion {

// JSON documents and CSV tables. nlohmann::json writes doubles in shortest
// round-trip form and non-finite values as null, so output is byte-stable.

using Json = nlohmann::ordered_json;

inline Json to_json(const ProblemParams& p)
{
    return {{"dim", p.dim()}, {"radius", p.radius()}, {"sigma", p.sigma()}};
}

inline Json to_json(const PerturbationSpec& spec)
{
    Json modes = Json::array();
    for (const auto& [mode, c] : spec.modes())
        modes.push_back({{"degree", mode.degree}, {"order", mode.order}, {"alpha_in", c.alpha_in},
                         {"alpha_out", c.alpha_out}});
    return {{"allow_mean", spec.allow_mean()}, {"modes", std::move(modes)}};
}

inline Json to_json(const AngularProfile& g)
{
    Json terms = Json::array();
    for (const auto& t : g.terms())
        terms.push_back({{"degree", t.mode.degree}, {"order", t.mode.order}, {"coeff", t.coeff}});
    return terms;
}

inline Json to_json(const SecondVariationSpectrum& e)
{
    return {{"k", e.degree}, {"e_in", e.e_in}, {"e_out", e.e_out}, {"e_res", e.e_res}};
}

inline Json witness_json(const std::optional<PerturbationSpec>& w, const ProblemParams& p)
{
    if (!w)
        return nullptr;
    Json doc = to_json(*w);
    doc["second_variation"] = total_second_variation(*w, p, SpectrumPath::Assembled);
    return doc;
}

inline Json to_json(const StabilityVerdict& v, const ProblemParams& p)
{
    Json positive = Json::array();
    for (const auto& m : v.positive_modes)
        positive.push_back({{"k", m.degree}, {"channel", to_string(m.channel)}});
    Json modes = Json::array();
    for (const auto& d : v.modes) {
        Json row = to_json(d.spectrum);
        row["delta"] = d.resonance.discriminant;
        row["coupled_supremum"] = d.coupled_supremum;
        row["outer_admissible"] = d.outer_admissible;
        modes.push_back(std::move(row));
    }
    return {{"classification", to_string(v.classification)},
            {"params", to_json(p)},
            {"k_max", v.k_max},
            {"positive_modes", std::move(positive)},
            {"witness_positive", witness_json(v.witness_positive, p)},
            {"witness_negative", witness_json(v.witness_negative, p)},
            {"modes", std::move(modes)}};
}

inline Json to_json(const OracleRun& run)
{
    const PerturbedDomainFamily& f = run.family;
    return {{"family",
             {{"params", to_json(f.params)},
              {"inner_shape", to_json(f.inner_shape)},
              {"outer_shape", to_json(f.outer_shape)}}},
            {"radial_points", run.radial_points},
            {"angular_modes", run.angular_modes},
            {"t_samples", run.t_samples},
            {"energies", run.energies},
            {"d1", run.d1},
            {"d2", run.d2},
            {"d1_by_step", run.d1_by_step},
            {"d2_by_step", run.d2_by_step},
            {"d1_spread", run.d1_spread},
            {"d2_spread", run.d2_spread},
            {"non_quadratic", run.non_quadratic},
            {"convergence_rate", run.convergence_rate},
            {"rate_accepted", run.rate_accepted()}};
}

inline Json to_json(const FidelityReport& r)
{
    Json entries = Json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"formula", e.formula},
                           {"printed", e.printed},
                           {"assembled", e.assembled},
                           {"deviation", e.deviation},
                           {"verdict", to_string(e.verdict)},
                           {"worst_point", e.worst_point},
                           {"samples", e.samples},
                           {"note", e.note}});
    return {{"grid", r.grid}, {"tolerance", r.tolerance}, {"entries", std::move(entries)}};
}

/// CSV rows k,e_in,e_out,e_res,delta for k = 1..k_max with 17 significant digits.
/// delta is e_res^2 - 4 e_in e_out of the selected path.
inline void write_spectrum_csv(std::ostream& out, const ProblemParams& p, int k_max, SpectrumPath path)
{
    if (k_max < 1)
        throw std::invalid_argument("kmax must be at least 1");
    out << "k,e_in,e_out,e_res,delta\n";
    char buf[160];
    for (int k = 1; k <= k_max; ++k) {
        const SecondVariationSpectrum e = spectrum(p, k, path);
        const double delta = e.e_res * e.e_res - 4.0 * e.e_in * e.e_out;
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", k, e.e_in, e.e_out, e.e_res, delta);
        out << buf;
    }
}

} // namespace torsion
