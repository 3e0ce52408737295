#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>

#include "torsion/pde_oracle.hpp"
#include "torsion/presets.hpp"
#include "torsion/spec_format.hpp"

namespace torsion {

// key = value configuration for an oracle run (docs/oracle_config.md):
//
//   dim = 2
//   radius = 0.5
//   sigma = 2
//   radial_points = 512
//   angular_modes = 64
//   t0 = 0.01
//   levels = 2
//   preset = case-iii           # optional seed for the modes
//   mode = 2 1 1.0 0.0          # repeatable: degree order alpha_in alpha_out
//
// Modes given explicitly override preset entries of the same index.

struct OracleConfig {
    ProblemParams params{2, 0.5, 2.0};
    PerturbationSpec spec;
    OracleSettings settings;
    std::optional<std::string> preset;

    PerturbedDomainFamily family() const { return PerturbedDomainFamily::from_spec(params, spec); }
};

namespace detail {

template <class T>
T parse_scalar(const std::string& key, const std::string& value, int line)
{
    std::istringstream in(value);
    T out{};
    std::string extra;
    if (!(in >> out) || (in >> extra))
        throw FormatError("bad value for '" + key + "': '" + value + "'", line);
    return out;
}

} // namespace detail

inline OracleConfig read_oracle_config(std::istream& in)
{
    int dim = 2;
    double radius = 0.5;
    double sigma = 2.0;
    OracleConfig cfg;
    std::vector<std::pair<detail::ModeRecord, int>> records;
    bool allow_mean = false;

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string text = detail::strip_comment(raw);
        if (text.empty())
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw FormatError("expected 'key = value'", line);
        const std::string key = detail::strip_comment(text.substr(0, eq));
        const std::string value = detail::strip_comment(text.substr(eq + 1));
        if (value.empty())
            throw FormatError("missing value for '" + key + "'", line);

        if (key == "dim")
            dim = detail::parse_scalar<int>(key, value, line);
        else if (key == "radius")
            radius = detail::parse_scalar<double>(key, value, line);
        else if (key == "sigma")
            sigma = detail::parse_scalar<double>(key, value, line);
        else if (key == "radial_points")
            cfg.settings.radial_points = detail::parse_scalar<int>(key, value, line);
        else if (key == "angular_modes")
            cfg.settings.angular_modes = detail::parse_scalar<int>(key, value, line);
        else if (key == "t0")
            cfg.settings.t0 = detail::parse_scalar<double>(key, value, line);
        else if (key == "levels")
            cfg.settings.levels = detail::parse_scalar<int>(key, value, line);
        else if (key == "threads")
            cfg.settings.threads = detail::parse_scalar<int>(key, value, line);
        else if (key == "measure_convergence")
            cfg.settings.measure_convergence = detail::parse_bool(value, line);
        else if (key == "allow_mean")
            allow_mean = detail::parse_bool(value, line);
        else if (key == "preset")
            cfg.preset = value;
        else if (key == "mode")
            records.emplace_back(detail::parse_mode_record(value, line), line);
        else
            throw FormatError("unknown key '" + key + "'", line);
    }

    cfg.params = ProblemParams(dim, radius, sigma);
    if (cfg.settings.radial_points < 8 || cfg.settings.angular_modes < 4)
        throw std::invalid_argument("oracle grid too coarse (radial_points >= 8, angular_modes >= 4)");

    PerturbationSpec spec(allow_mean);
    if (cfg.preset) {
        const PerturbationSpec seed = resonance_preset(*cfg.preset);
        for (const auto& [mode, c] : seed.modes())
            spec.set(mode, c.alpha_in, c.alpha_out);
    }
    for (const auto& [rec, at] : records) {
        try {
            spec.set(rec.mode, rec.alpha_in, rec.alpha_out);
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what(), at);
        }
    }
    cfg.spec = std::move(spec);
    return cfg;
}

inline OracleConfig parse_oracle_config(const std::string& text)
{
    std::istringstream in(text);
    return read_oracle_config(in);
}

inline OracleConfig load_oracle_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open oracle config '" + path + "'");
    return read_oracle_config(in);
}

inline OracleRun run_oracle(const OracleConfig& cfg)
{
    return differentiate_energy(cfg.family(), cfg.settings);
}

} // namespace torsion
