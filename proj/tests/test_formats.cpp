#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "torsion/oracle_config.hpp"
#include "torsion/presets.hpp"
#include "torsion/spec_format.hpp"

using namespace torsion;

TEST(PerturbationText, ParsesRecordsAndComments)
{
    const PerturbationSpec spec = parse_perturbation(
        "# interface bump and boundary wobble\n"
        "\n"
        "2 1 1.0 0.0\n"
        "  3 2 -0.5 0.25   # trailing comment\n");
    EXPECT_EQ(spec.size(), 2u);
    EXPECT_EQ(spec.coefficients({3, 2}), (ModeCoefficients{-0.5, 0.25}));
    EXPECT_FALSE(spec.allow_mean());
}

TEST(PerturbationText, MeanModesNeedTheFlag)
{
    EXPECT_THROW(parse_perturbation("0 1 1 0\n"), FormatError);
    const PerturbationSpec spec = parse_perturbation("0 1 1 0\nallow_mean true\n");
    EXPECT_TRUE(spec.has_mean());
}

TEST(PerturbationText, ErrorsCarryLineNumbers)
{
    try {
        parse_perturbation("2 1 1 0\n3 1 x 0\n");
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    EXPECT_THROW(parse_perturbation("2 1 1 0 9\n"), FormatError);
    EXPECT_THROW(parse_perturbation("2 1 1 0\n2 1 0 1\n"), FormatError);
    EXPECT_THROW(parse_perturbation("allow_mean maybe\n"), FormatError);
    EXPECT_THROW(parse_perturbation("2 0 1 0\n"), FormatError);
}

TEST(PerturbationText, RoundTripsExactly)
{
    PerturbationSpec spec(true);
    spec.set(0, 1, 0.1, 0.2).set(4, 2, 1.0 / 3.0, -2.0e-17).set(7, 1, 123456.789, 0.0);
    const std::string text = format_perturbation(spec);
    EXPECT_EQ(parse_perturbation(text), spec);
    EXPECT_EQ(format_perturbation(parse_perturbation(text)), text);
}

TEST(Presets, FiveResonanceCases)
{
    EXPECT_EQ(kResonancePresets.size(), 5u);
    const PerturbationSpec i = resonance_preset("case-i");
    EXPECT_EQ(i.coefficients({3, 1}), (ModeCoefficients{1.0, 0.0}));
    EXPECT_EQ(i.coefficients({5, 1}), (ModeCoefficients{0.0, 1.0}));
    const PerturbationSpec ii = resonance_preset("case-ii");
    EXPECT_EQ(ii.coefficients({5, 2}), (ModeCoefficients{0.0, 1.0}));
    EXPECT_EQ(resonance_preset("case-iii").coefficients({5, 1}), (ModeCoefficients{1.0, 1.0}));
    EXPECT_EQ(resonance_preset("case-iv").coefficients({5, 1}), (ModeCoefficients{1.0, -1.0}));
    const PerturbationSpec v = resonance_preset("case-v");
    EXPECT_EQ(v.coefficients({1, 1}), (ModeCoefficients{1.0, 1.0}));
    EXPECT_FALSE(v.barycenter_admissible());
    EXPECT_THROW(resonance_preset("case-vi"), std::invalid_argument);
}

TEST(OracleConfigText, ParsesAllKeys)
{
    const OracleConfig cfg = parse_oracle_config(
        "# coupled degree-two run\n"
        "dim = 2\n"
        "radius = 0.4\n"
        "sigma = 3\n"
        "radial_points = 128\n"
        "angular_modes = 16\n"
        "t0 = 0.02\n"
        "levels = 3\n"
        "threads = 2\n"
        "measure_convergence = false\n"
        "mode = 2 1 1.0 0.0\n"
        "mode = 2 2 0.0 0.5\n");
    EXPECT_EQ(cfg.params, ProblemParams(2, 0.4, 3.0));
    EXPECT_EQ(cfg.settings.radial_points, 128);
    EXPECT_EQ(cfg.settings.angular_modes, 16);
    EXPECT_EQ(cfg.settings.t0, 0.02);
    EXPECT_EQ(cfg.settings.levels, 3);
    EXPECT_EQ(cfg.settings.threads, 2);
    EXPECT_FALSE(cfg.settings.measure_convergence);
    EXPECT_EQ(cfg.spec.size(), 2u);
}

TEST(OracleConfigText, PresetThenOverrides)
{
    const OracleConfig cfg = parse_oracle_config("preset = case-iv\nmode = 5 1 2 -1\nmode = 3 1 0 1\n");
    EXPECT_EQ(cfg.preset, "case-iv");
    EXPECT_EQ(cfg.spec.coefficients({5, 1}), (ModeCoefficients{2.0, -1.0}));
    EXPECT_EQ(cfg.spec.size(), 2u);
    // defaults
    EXPECT_EQ(cfg.settings.radial_points, 512);
    EXPECT_EQ(cfg.settings.angular_modes, 64);
}

TEST(OracleConfigText, Errors)
{
    EXPECT_THROW(parse_oracle_config("colour = blue\n"), FormatError);
    EXPECT_THROW(parse_oracle_config("sigma\n"), FormatError);
    EXPECT_THROW(parse_oracle_config("sigma = \n"), FormatError);
    EXPECT_THROW(parse_oracle_config("levels = two\n"), FormatError);
    EXPECT_THROW(parse_oracle_config("radius = 1.5\n"), std::invalid_argument);
    EXPECT_THROW(parse_oracle_config("radial_points = 4\n"), std::invalid_argument);
    EXPECT_THROW(parse_oracle_config("preset = case-x\n"), std::invalid_argument);
    EXPECT_THROW(load_oracle_config("/nonexistent/oracle.cfg"), std::runtime_error);
}

TEST(OracleConfigText, DimensionIsCheckedByTheFamily)
{
    const OracleConfig cfg = parse_oracle_config("dim = 3\nmode = 2 1 1 0\n");
    EXPECT_THROW(cfg.family(), std::invalid_argument);
}
