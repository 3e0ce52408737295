#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace torsion {

/// Dimension N, core radius R (outer radius normalised to 1) and core conductivity sigma.
class ProblemParams {
public:
    ProblemParams(int dim, double core_radius, double sigma)
        : dim_(dim), radius_(core_radius), sigma_(sigma)
    {
        if (dim < 2)
            throw std::invalid_argument("dim must be at least 2");
        if (!(core_radius > 0.0 && core_radius < 1.0))
            throw std::invalid_argument("radius must lie in (0,1)");
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw std::invalid_argument("sigma must be positive");
    }

    int dim() const noexcept { return dim_; }
    double radius() const noexcept { return radius_; }
    double sigma() const noexcept { return sigma_; }

    friend bool operator==(const ProblemParams&, const ProblemParams&) = default;

private:
    int dim_;
    double radius_;
    double sigma_;
};

/// Surface area of the unit sphere S^{N-1}.
inline double sphere_area(int dim)
{
    if (dim < 1)
        throw std::invalid_argument("sphere_area: dim must be positive");
    if (dim == 2)
        return 2.0 * std::numbers::pi;
    if (dim == 3)
        return 4.0 * std::numbers::pi;
    const double half = 0.5 * dim;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

/// Laplace-Beltrami eigenvalue k(N+k-2) of degree-k spherical harmonics.
inline double eigenvalue(int dim, int degree)
{
    if (dim < 2)
        throw std::invalid_argument("eigenvalue: dim must be at least 2");
    if (degree < 0)
        throw std::invalid_argument("eigenvalue: degree must be non-negative");
    return static_cast<double>(degree) * static_cast<double>(dim + degree - 2);
}

namespace detail {

inline std::int64_t binomial(std::int64_t n, std::int64_t k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    std::int64_t result = 1;
    for (std::int64_t i = 1; i <= k; ++i)
        result = result * (n - k + i) / i; // exact: result is C(n-k+i, i)
    return result;
}

} // namespace detail

/// Dimension of the space of degree-k spherical harmonics on S^{N-1}.
inline std::int64_t multiplicity(int dim, int degree)
{
    if (dim < 2)
        throw std::invalid_argument("multiplicity: dim must be at least 2");
    if (degree < 0)
        throw std::invalid_argument("multiplicity: degree must be non-negative");
    const std::int64_t first = detail::binomial(dim + degree - 1, degree);
    const std::int64_t second = degree >= 2 ? detail::binomial(dim + degree - 3, degree - 2) : 0;
    return first - second;
}

struct ModeIndex {
    int degree = 0;
    int order = 1;

    friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

struct ModeCoefficients {
    double alpha_in = 0.0;
    double alpha_out = 0.0;

    friend bool operator==(const ModeCoefficients&, const ModeCoefficients&) = default;
};

/// Sparse spherical-harmonic coefficients of h_in.n (on the interface) and
/// h_out.n (on the outer boundary). Missing modes are zero.
class PerturbationSpec {
public:
    using ModeMap = std::map<ModeIndex, ModeCoefficients>;

    PerturbationSpec() = default;
    explicit PerturbationSpec(bool allow_mean) : allow_mean_(allow_mean) {}

    /// Inserts or overwrites a mode. Degree 0 requires allow_mean.
    PerturbationSpec& set(ModeIndex mode, double alpha_in, double alpha_out)
    {
        if (mode.degree < 0)
            throw std::invalid_argument("mode degree must be non-negative");
        if (mode.order < 1)
            throw std::invalid_argument("mode order must be at least 1");
        if (mode.degree == 0 && !allow_mean_)
            throw std::invalid_argument(
                "degree-0 mode violates first-order volume preservation (enable allow_mean)");
        if (!std::isfinite(alpha_in) || !std::isfinite(alpha_out))
            throw std::invalid_argument("mode coefficients must be finite");
        modes_[mode] = ModeCoefficients{alpha_in, alpha_out};
        return *this;
    }

    PerturbationSpec& set(int degree, int order, double alpha_in, double alpha_out)
    {
        return set(ModeIndex{degree, order}, alpha_in, alpha_out);
    }

    void erase(ModeIndex mode) { modes_.erase(mode); }

    const ModeMap& modes() const noexcept { return modes_; }
    bool allow_mean() const noexcept { return allow_mean_; }
    bool empty() const noexcept { return modes_.empty(); }
    std::size_t size() const noexcept { return modes_.size(); }

    ModeCoefficients coefficients(ModeIndex mode) const
    {
        const auto it = modes_.find(mode);
        return it == modes_.end() ? ModeCoefficients{} : it->second;
    }

    bool has_mean() const
    {
        return !modes_.empty() && modes_.begin()->first.degree == 0;
    }

    /// True iff no degree-1 mode carries an outer coefficient.
    bool barycenter_admissible() const
    {
        for (const auto& [mode, c] : modes_)
            if (mode.degree == 1 && c.alpha_out != 0.0)
                return false;
        return true;
    }

    /// Throws if some order exceeds the harmonic multiplicity in this dimension.
    void check_orders(int dim) const
    {
        for (const auto& [mode, c] : modes_)
            if (mode.order > multiplicity(dim, mode.degree))
                throw std::invalid_argument("mode (" + std::to_string(mode.degree) + ","
                                            + std::to_string(mode.order)
                                            + ") has order beyond the harmonic multiplicity");
    }

    friend bool operator==(const PerturbationSpec&, const PerturbationSpec&) = default;

private:
    ModeMap modes_;
    bool allow_mean_ = false;
};

enum class Constraint { VolumeOnly, VolumeAndBarycenter };

struct Violation {
    ModeIndex mode;
    std::string reason;
};

struct ValidationVerdict {
    std::vector<Violation> violations;

    bool passed() const noexcept { return violations.empty(); }
    explicit operator bool() const noexcept { return passed(); }
};

inline ValidationVerdict validate(const PerturbationSpec& spec, Constraint constraint)
{
    ValidationVerdict verdict;
    for (const auto& [mode, c] : spec.modes()) {
        if (mode.degree == 0)
            verdict.violations.push_back({mode, "degree-0 mode breaks volume preservation"});
        else if (constraint == Constraint::VolumeAndBarycenter && mode.degree == 1
                 && c.alpha_out != 0.0)
            verdict.violations.push_back({mode, "outer degree-1 mode moves the barycenter"});
    }
    return verdict;
}

} // namespace torsion
