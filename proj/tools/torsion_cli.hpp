#pragma once

// Command-line front end, kept in a header so tests can drive it in-process.
//
//   torsion classify  --dim 2 --radius 0.5 --sigma 2 [--kmax 30] [--out FILE]
//   torsion spectrum  --dim 2 --radius 0.5 --sigma 2 [--kmax 30] [--path assembled|printed]
//   torsion evaluate  --dim 2 --radius 0.5 --sigma 2 (--spec FILE | --preset case-iii)
//   torsion verify    coefficients|secondvar|monotonicity|pde|all
//   torsion fidelity  [--out FILE]
//   torsion oracle    --config FILE [--out FILE]

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "torsion/fidelity.hpp"
#include "torsion/oracle_config.hpp"
#include "torsion/presets.hpp"
#include "torsion/report.hpp"
#include "torsion/spec_format.hpp"
#include "torsion/stability.hpp"
#include "torsion/verify.hpp"

namespace torsion::cli {

namespace detail {

inline std::string one_line(std::string s)
{
    std::replace(s.begin(), s.end(), '\n', ' ');
    while (!s.empty() && s.back() == ' ')
        s.pop_back();
    return s;
}

/// Writes into --out when given, else into the command stream.
inline void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body)
{
    if (path.empty()) {
        body(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open output file '" + path + "'");
    body(file);
    if (!file)
        throw std::runtime_error("failed writing '" + path + "'");
}

struct ParamFlags {
    int dim = 2;
    double radius = 0.5;
    double sigma = 2.0;

    void attach(CLI::App& cmd)
    {
        cmd.add_option("--dim", dim, "space dimension N")->capture_default_str();
        cmd.add_option("--radius", radius, "core radius R in (0,1)")->required();
        cmd.add_option("--sigma", sigma, "core conductivity")->required();
    }

    ProblemParams params() const { return {dim, radius, sigma}; }
};

inline void print_suite(std::ostream& out, const SuiteReport& report)
{
    for (const auto& p : report.properties) {
        out << (p.passed ? "PASS " : "FAIL ") << to_string(report.suite) << ": " << p.name << " (" << p.cases
            << " cases)";
        if (!p.passed)
            out << " counterexample: " << p.counterexample;
        out << '\n';
    }
}

} // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Two-phase torsion: second shape variation on concentric balls", "torsion"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "torsion 1.0");

    detail::ParamFlags classify_params, spectrum_params, evaluate_params;
    int classify_kmax = 30, spectrum_kmax = 30;
    std::string out_path, path_name = "assembled", suite_name, config_path, spec_path, preset_name;

    CLI::App* classify_cmd = app.add_subcommand("classify", "classify the radial configuration (JSON)");
    classify_params.attach(*classify_cmd);
    classify_cmd->add_option("--kmax", classify_kmax, "largest scanned degree")->capture_default_str();
    classify_cmd->add_option("--out", out_path, "write to file");

    CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "per-degree second-variation spectrum (CSV)");
    spectrum_params.attach(*spectrum_cmd);
    spectrum_cmd->add_option("--kmax", spectrum_kmax, "largest degree")->capture_default_str();
    spectrum_cmd->add_option("--path", path_name, "assembled or printed")
        ->check(CLI::IsMember({"assembled", "printed"}))
        ->capture_default_str();
    spectrum_cmd->add_option("--out", out_path, "write to file");

    CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "validate a perturbation and evaluate E' and E'' (JSON)");
    evaluate_params.attach(*evaluate_cmd);
    auto* spec_opt = evaluate_cmd->add_option("--spec", spec_path, "perturbation file");
    auto* preset_opt = evaluate_cmd->add_option("--preset", preset_name, "case-i .. case-v");
    spec_opt->excludes(preset_opt);
    evaluate_cmd->add_option("--path", path_name, "assembled or printed")
        ->check(CLI::IsMember({"assembled", "printed"}))
        ->capture_default_str();
    evaluate_cmd->add_option("--out", out_path, "write to file");

    CLI::App* verify_cmd = app.add_subcommand("verify", "run a property suite");
    verify_cmd->add_option("suite", suite_name, "coefficients, secondvar, monotonicity, pde or all")->required();

    CLI::App* fidelity_cmd = app.add_subcommand("fidelity", "printed vs assembled formula report (JSON)");
    fidelity_cmd->add_option("--out", out_path, "write to file");

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "run the N = 2 PDE oracle from a config file (JSON)");
    oracle_cmd->add_option("--config", config_path, "oracle configuration")->required();
    oracle_cmd->add_option("--out", out_path, "write to file");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);

        const auto path = path_name == "printed" ? SpectrumPath::PrintedFormula : SpectrumPath::Assembled;

        if (*classify_cmd) {
            const ProblemParams p = classify_params.params();
            const StabilityVerdict v = classify(p, classify_kmax);
            detail::emit(out_path, out, [&](std::ostream& o) { o << to_json(v, p).dump(2) << '\n'; });
            return 0;
        }
        if (*spectrum_cmd) {
            const ProblemParams p = spectrum_params.params();
            std::ostringstream table;
            write_spectrum_csv(table, p, spectrum_kmax, path);
            detail::emit(out_path, out, [&](std::ostream& o) { o << table.str(); });
            return 0;
        }
        if (*evaluate_cmd) {
            const ProblemParams p = evaluate_params.params();
            if (spec_path.empty() && preset_name.empty())
                throw std::invalid_argument("evaluate needs --spec or --preset");
            const PerturbationSpec spec = spec_path.empty() ? resonance_preset(preset_name) : load_perturbation(spec_path);
            spec.check_orders(p.dim());
            const ValidationVerdict check = validate(spec, Constraint::VolumeAndBarycenter);
            Json violations = Json::array();
            for (const auto& v : check.violations)
                violations.push_back({{"degree", v.mode.degree}, {"order", v.mode.order}, {"reason", v.reason}});
            Json doc = {{"params", to_json(p)},
                        {"perturbation", to_json(spec)},
                        {"admissible", check.passed()},
                        {"violations", std::move(violations)},
                        {"first_variation", first_variation(spec, p)}};
            // the quadratic form is only defined on the volume-preserving class
            if (validate(spec, Constraint::VolumeOnly).passed())
                doc["second_variation"] = total_second_variation(spec, p, path);
            else
                doc["second_variation"] = nullptr;
            detail::emit(out_path, out, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
            return 0;
        }
        if (*verify_cmd) {
            std::vector<Suite> suites;
            if (suite_name == "all")
                suites = {Suite::Coefficients, Suite::SecondVar, Suite::Monotonicity, Suite::Pde};
            else
                suites = {parse_suite(suite_name)};
            bool ok = true;
            for (Suite s : suites) {
                const SuiteReport report = run_suite(s);
                detail::print_suite(out, report);
                ok = ok && report.passed();
            }
            out << (ok ? "verify: PASS\n" : "verify: FAIL\n");
            return ok ? 0 : 1;
        }
        if (*fidelity_cmd) {
            const FidelityReport report = fidelity_report();
            detail::emit(out_path, out, [&](std::ostream& o) { o << to_json(report).dump(2) << '\n'; });
            return 0;
        }
        if (*oracle_cmd) {
            const OracleConfig cfg = load_oracle_config(config_path);
            const OracleRun run = run_oracle(cfg);
            Json doc = to_json(run);
            doc["perturbation"] = to_json(cfg.spec);
            if (cfg.preset)
                doc["preset"] = *cfg.preset;
            doc["assembled_second_variation"] = total_second_variation(cfg.spec, cfg.params);
            detail::emit(out_path, out, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
            return 0;
        }
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << detail::one_line(e.what()) << '\n';
        return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
    } catch (const std::exception& e) {
        err << "error: " << detail::one_line(e.what()) << '\n';
        return 2;
    }
    return 2;
}

} // namespace torsion::cli
