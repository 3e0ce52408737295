#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

#include "torsion/exact_state.hpp"
#include "torsion/params.hpp"
#include "torsion/transmission.hpp"

namespace torsion {

/// Assembled: computed from the boundary-integral form of E'' with oracle mode
/// profiles. PrintedFormula: the closed-form spectrum evaluated verbatim.
enum class SpectrumPath { Assembled, PrintedFormula };

inline const char* to_string(SpectrumPath path)
{
    return path == SpectrumPath::Assembled ? "assembled" : "printed";
}

/// Per-degree coefficients of the quadratic form
///   E'' = sum_{k,i} a_in^2 e_in(k) + a_out^2 e_out(k) + a_in a_out e_res(k).
struct SecondVariationSpectrum {
    int degree = 1;
    double e_in = 0.0;
    double e_out = 0.0;
    double e_res = 0.0;
    SpectrumPath source = SpectrumPath::Assembled;
};

/// Reduces the four boundary integrals of E'' on volume-preserving perturbations
/// to a single orthonormal mode. With u radial, grad u . grad u' = u_r u'_r on
/// each sphere, and the sphere measures contribute R^{N-1} (interface) and 1.
inline SecondVariationSpectrum assemble_spectrum(const ProblemParams& p, int degree)
{
    if (degree < 1)
        throw std::invalid_argument("assemble_spectrum: degree must be at least 1");
    const StateTraces tr = traces(p);
    const double core = p.radius();
    const double s = p.sigma();
    const double interface_measure = std::pow(core, p.dim() - 1);

    const ModeProfile in = solve_mode_oracle(p, degree, ModeKind::Inner);
    const ModeProfile out = solve_mode_oracle(p, degree, ModeKind::Outer);

    // [sigma_0 u_r u'_r] across r = R for a given profile
    auto flux_product_jump = [&](const ModeProfile& m) {
        return tr.dn_u_outer_interface * m.outside_slope(core)
               - s * tr.dn_u_inner_interface * m.inside_slope(core);
    };

    SecondVariationSpectrum spec;
    spec.degree = degree;
    spec.source = SpectrumPath::Assembled;
    // -2 int_{dD} [sigma_0 grad u . grad u'] h.n  - 2 int_{dD} sigma u_r^- [u_rr] (h.n)^2
    spec.e_in = -2.0 * interface_measure * flux_product_jump(in)
                - 2.0 * interface_measure * s * tr.dn_u_inner_interface
                      * (tr.dnn_u_outer - tr.dnn_u_inner);
    // 2 int_{dOmega} grad u . grad u' h.n + 2 int_{dOmega} u_r u_rr (h.n)^2
    spec.e_out = 2.0 * tr.dn_u_boundary * out.outside_slope(1.0)
                 + 2.0 * tr.dn_u_boundary * tr.dnn_u_boundary;
    spec.e_res = 2.0 * tr.dn_u_boundary * in.outside_slope(1.0)
                 - 2.0 * interface_measure * flux_product_jump(out);
    return spec;
}

inline SecondVariationSpectrum printed_spectrum(const ProblemParams& p, int degree)
{
    if (degree < 1)
        throw std::invalid_argument("printed_spectrum: degree must be at least 1");
    const double n = p.dim();
    const double k = degree;
    const double core = p.radius();
    const double s = p.sigma();
    const double f = denom_F(p, degree);
    const double big = std::pow(core, 2.0 - n - 2.0 * k);

    SecondVariationSpectrum spec;
    spec.degree = degree;
    spec.source = SpectrumPath::PrintedFormula;
    spec.e_in = (2.0 * std::pow(core, n) / n) * ((1.0 - s) / s)
                * (f - k * (k * (1.0 - s) + (n - 2.0 + k) * (1.0 - s) * big)) / f;
    spec.e_out = (2.0 / n) * (f - k * ((-n + 2.0 - k) * (1.0 - s) + (n - 2.0 + k + k * s) * big)) / f;
    spec.e_res = 4.0 * (s - 1.0) * std::pow(core, 1.0 - k) / n * ((n - 2.0) * k + 2.0 * k * k) / f;
    return spec;
}

inline SecondVariationSpectrum compute_spectrum(const ProblemParams& p, int degree, SpectrumPath path)
{
    return path == SpectrumPath::Assembled ? assemble_spectrum(p, degree) : printed_spectrum(p, degree);
}

/// Memoises spectra per (params, degree, path). Concurrent readers share the
/// lock; each key is inserted at most once.
class SpectrumCache {
public:
    SecondVariationSpectrum get(const ProblemParams& p, int degree, SpectrumPath path)
    {
        const Key key{p.dim(), std::bit_cast<std::uint64_t>(p.radius()),
                      std::bit_cast<std::uint64_t>(p.sigma()), degree, path};
        {
            std::shared_lock lock(mutex_);
            if (const auto it = entries_.find(key); it != entries_.end())
                return it->second;
        }
        const SecondVariationSpectrum value = compute_spectrum(p, degree, path);
        std::unique_lock lock(mutex_);
        return entries_.try_emplace(key, value).first->second;
    }

    std::size_t size() const
    {
        std::shared_lock lock(mutex_);
        return entries_.size();
    }

private:
    using Key = std::tuple<int, std::uint64_t, std::uint64_t, int, SpectrumPath>;
    mutable std::shared_mutex mutex_;
    std::map<Key, SecondVariationSpectrum> entries_;
};

inline SpectrumCache& default_spectrum_cache()
{
    static SpectrumCache cache;
    return cache;
}

inline SecondVariationSpectrum spectrum(const ProblemParams& p, int degree,
                                        SpectrumPath path = SpectrumPath::Assembled)
{
    return default_spectrum_cache().get(p, degree, path);
}

/// Quadratic form of E'' over every stored mode.
inline double total_second_variation(const PerturbationSpec& spec, const ProblemParams& p,
                                     SpectrumPath path = SpectrumPath::Assembled)
{
    if (!validate(spec, Constraint::VolumeOnly))
        throw std::invalid_argument("total_second_variation: degree-0 modes are not volume preserving");
    spec.check_orders(p.dim());
    double total = 0.0;
    for (const auto& [mode, c] : spec.modes()) {
        const SecondVariationSpectrum e = spectrum(p, mode.degree, path);
        total += c.alpha_in * c.alpha_in * e.e_in + c.alpha_out * c.alpha_out * e.e_out
                 + c.alpha_in * c.alpha_out * e.e_res;
    }
    return total;
}

/// Quadratic Q(t) = e_in t^2 + e_res t + e_out, with t = alpha_in / alpha_out.
struct ResonanceAnalysis {
    int degree = 1;
    double q_leading = 0.0;
    double q_linear = 0.0;
    double q_constant = 0.0;
    double discriminant = 0.0;
    /// The factored discriminant -16(s-1)(k-1)R^N/(s N^2 F^2) * (...) * G.
    double discriminant_factored = 0.0;
    double g_factor = 0.0;
    SpectrumPath source = SpectrumPath::Assembled;

    double q(double t) const { return (q_leading * t + q_linear) * t + q_constant; }
};

inline double resonance_g_factor(const ProblemParams& p, int degree)
{
    const double n = p.dim();
    const double k = degree;
    const double big = std::pow(p.radius(), 2.0 - n - 2.0 * k);
    return (p.sigma() - 1.0) * k * (n - 1.0 + k) * (big - 1.0) + (n - 2.0 + 2.0 * k) * big;
}

inline double factored_discriminant(const ProblemParams& p, int degree)
{
    const double n = p.dim();
    const double k = degree;
    const double core = p.radius();
    const double s = p.sigma();
    const double f = denom_F(p, degree);
    const double big = std::pow(core, 2.0 - n - 2.0 * k);
    const double prefactor = -16.0 * (s - 1.0) * (k - 1.0) * std::pow(core, n) / (s * n * n * f * f);
    const double middle = s * k * (big - 1.0) + (n - 2.0 + k) * big + k;
    return prefactor * middle * resonance_g_factor(p, degree);
}

/// Magnitude a discriminant b^2 - 4ac is compared against. The squared
/// largest coefficient keeps it meaningful when every term is roundoff.
inline double discriminant_scale(double a, double b, double c)
{
    const double m = std::max({std::abs(a), std::abs(b), std::abs(c)});
    return std::max(b * b + 4.0 * std::abs(a * c), m * m);
}

inline ResonanceAnalysis resonance_analysis(const ProblemParams& p, int degree,
                                            SpectrumPath path = SpectrumPath::Assembled)
{
    if (degree < 1)
        throw std::invalid_argument("resonance_analysis: degree must be at least 1");
    const SecondVariationSpectrum e = spectrum(p, degree, path);
    ResonanceAnalysis r;
    r.degree = degree;
    r.q_leading = e.e_in;
    r.q_linear = e.e_res;
    r.q_constant = e.e_out;
    r.discriminant = r.q_linear * r.q_linear - 4.0 * r.q_leading * r.q_constant;
    r.discriminant_factored = factored_discriminant(p, degree);
    r.g_factor = resonance_g_factor(p, degree);
    r.source = path;
    return r;
}

struct MonotonicityTriple {
    double a;
    double b;
    double c;
};

/// Auxiliary functions whose negativity certifies that e_out is decreasing in
/// the (continuous) degree x. Uses L = 1/R, lambda = log L, M = N-2, P = L^{2x+M}.
inline MonotonicityTriple monotonicity_functions(const ProblemParams& p, double x)
{
    if (!(x > 0.0))
        throw std::invalid_argument("monotonicity_functions: x must be positive");
    const double lambda = -std::log(p.radius());
    const double m = p.dim() - 2.0;
    const double exponent = lambda * (2.0 * x + m);
    const double big = std::exp(exponent);
    const double inv = std::exp(-exponent);

    MonotonicityTriple r{};
    r.a = x * x * inv + m * (2.0 * x + m) - (x + m) * (x + m) * big
          - 2.0 * lambda * (2.0 * x * x * x + 3.0 * m * x * x + m * m * x);
    r.b = -2.0 * x * x * inv - m * (2.0 * x + m) - 2.0 * (m * x + x * x) * big
          + 2.0 * lambda * m * (m * x + 2.0 * x * x);
    // P^{-1} - P written as -2 sinh to avoid cancellation for small x
    r.c = -2.0 * std::sinh(exponent) + 2.0 * lambda * (m + 2.0 * x);
    return r;
}

/// E'(Phi) = -int_{dD} [sigma_0 |grad u|^2] h_in.n + int_{dOmega} |grad u|^2 h_out.n.
/// Only degree-0 modes contribute since both brackets are constant on their spheres.
inline double first_variation(const PerturbationSpec& spec, const ProblemParams& p)
{
    const ModeCoefficients mean = spec.coefficients(ModeIndex{0, 1});
    if (mean.alpha_in == 0.0 && mean.alpha_out == 0.0)
        return 0.0;
    const StateTraces tr = traces(p);
    const double root_area = std::sqrt(sphere_area(p.dim()));
    const double interface_measure = std::pow(p.radius(), p.dim() - 1);
    const double gradsq_boundary = tr.dn_u_boundary * tr.dn_u_boundary;
    return -tr.jump_sigma_gradsq * interface_measure * root_area * mean.alpha_in
           + gradsq_boundary * root_area * mean.alpha_out;
}

} // namespace torsion
