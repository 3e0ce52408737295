#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "torsion/params.hpp"

namespace torsion {

// Line-based text form of a PerturbationSpec (grammar in docs/perturbation_format.md):
//
//   # comment
//   allow_mean true
//   <degree> <order> <alpha_in> <alpha_out>

class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    int line() const noexcept { return line_; }

private:
    int line_;
};

namespace detail {

inline std::string strip_comment(const std::string& line)
{
    const auto hash = line.find('#');
    std::string s = hash == std::string::npos ? line : line.substr(0, hash);
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::string format_decimal(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline bool parse_bool(const std::string& word, int line)
{
    if (word == "true" || word == "1" || word == "yes")
        return true;
    if (word == "false" || word == "0" || word == "no")
        return false;
    throw FormatError("expected true or false, got '" + word + "'", line);
}

struct ModeRecord {
    ModeIndex mode;
    double alpha_in;
    double alpha_out;
};

inline ModeRecord parse_mode_record(const std::string& text, int line)
{
    std::istringstream in(text);
    ModeRecord rec{};
    if (!(in >> rec.mode.degree >> rec.mode.order >> rec.alpha_in >> rec.alpha_out))
        throw FormatError("expected '<degree> <order> <alpha_in> <alpha_out>'", line);
    std::string extra;
    if (in >> extra)
        throw FormatError("unexpected trailing field '" + extra + "'", line);
    return rec;
}

} // namespace detail

inline PerturbationSpec read_perturbation(std::istream& in)
{
    std::vector<std::pair<detail::ModeRecord, int>> records;
    bool allow_mean = false;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string text = detail::strip_comment(raw);
        if (text.empty())
            continue;
        if (text.rfind("allow_mean", 0) == 0) {
            std::istringstream words(text);
            std::string key, value, extra;
            words >> key >> value;
            if (key != "allow_mean" || value.empty() || (words >> extra))
                throw FormatError("expected 'allow_mean true|false'", line);
            allow_mean = detail::parse_bool(value, line);
            continue;
        }
        records.emplace_back(detail::parse_mode_record(text, line), line);
    }
    PerturbationSpec spec(allow_mean);
    for (const auto& [rec, at] : records) {
        if (spec.modes().count(rec.mode))
            throw FormatError("duplicate mode record", at);
        try {
            spec.set(rec.mode, rec.alpha_in, rec.alpha_out);
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what(), at);
        }
    }
    return spec;
}

inline PerturbationSpec parse_perturbation(const std::string& text)
{
    std::istringstream in(text);
    return read_perturbation(in);
}

inline PerturbationSpec load_perturbation(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open perturbation file '" + path + "'");
    return read_perturbation(in);
}

inline std::string format_perturbation(const PerturbationSpec& spec)
{
    std::string out = "# degree order alpha_in alpha_out\n";
    if (spec.allow_mean())
        out += "allow_mean true\n";
    for (const auto& [mode, c] : spec.modes()) {
        out += std::to_string(mode.degree) + ' ' + std::to_string(mode.order) + ' '
               + detail::format_decimal(c.alpha_in) + ' ' + detail::format_decimal(c.alpha_out) + '\n';
    }
    return out;
}

} // namespace torsion
