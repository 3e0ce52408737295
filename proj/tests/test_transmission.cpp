#include <array>
#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "torsion/exact_state.hpp"
#include "torsion/sweep.hpp"
#include "torsion/transmission.hpp"

using namespace torsion;

TEST(DenominatorF, Examples)
{
    EXPECT_DOUBLE_EQ(denom_F(ProblemParams(2, 0.5, 1.0), 1), 16.0);
    EXPECT_DOUBLE_EQ(denom_F(ProblemParams(3, 0.5, 2.0), 1), 93.0);
    EXPECT_GT(denom_F(ProblemParams(2, 0.9, 10.0), 5), 0.0);
    EXPECT_THROW(denom_F(ProblemParams(2, 0.5, 2.0), 0), std::invalid_argument);
}

TEST(ModeOracle, SatisfiesConditionsOnGrid)
{
    for (const ProblemParams& p : ParameterGrid{}.points())
        for (int k = 1; k <= 20; ++k)
            for (ModeKind kind : {ModeKind::Inner, ModeKind::Outer}) {
                const ModeProfile m = solve_mode_oracle(p, k, kind);
                EXPECT_LT(transmission_residual(m, p).max(), kTransmissionResidualTol)
                    << describe_point(p, k) << " " << to_string(kind);
            }
}

TEST(ModeOracle, Examples)
{
    for (int k = 1; k <= 10; ++k) {
        const ModeProfile m = solve_mode_oracle(ProblemParams(3, 0.3, 1.0), k, ModeKind::Inner);
        EXPECT_EQ(m.inner_coeff, 0.0);
        EXPECT_EQ(m.outer_sing, 0.0);
        EXPECT_EQ(m.outer_reg, 0.0);
    }
    const ProblemParams p(2, 0.5, 2.0);
    EXPECT_LT(transmission_residual(solve_mode_oracle(p, 1, ModeKind::Outer), p).max(), 1e-12);
    const ModeProfile m3 = solve_mode_oracle(p, 3, ModeKind::Inner);
    EXPECT_NEAR(m3.outer_sing, -m3.outer_reg, 1e-15 * std::abs(m3.outer_reg));
    EXPECT_THROW(solve_mode_oracle(p, 0, ModeKind::Inner), std::invalid_argument);
}

TEST(ModeOracle, ProfileHonoursConditionsPointwise)
{
    // re-check the conditions with finite differences of value(r)
    const ProblemParams p(3, 0.5, 4.0);
    const StateTraces tr = traces(p);
    const double h = 1e-7;
    for (int k : {1, 2, 5}) {
        const ModeProfile in = solve_mode_oracle(p, k, ModeKind::Inner);
        const double out_slope = (in.value(0.5 + 2 * h) - in.value(0.5 + h)) / h;
        const double in_slope = (in.value(0.5 - h) - in.value(0.5 - 2 * h)) / h;
        EXPECT_NEAR(out_slope, p.sigma() * in_slope, 1e-5 * std::abs(out_slope) + 1e-9);
        EXPECT_NEAR(in.outside_value(0.5) - in.inside_value(0.5), -tr.jump_dn, 1e-14);
        EXPECT_NEAR(in.value(1.0), 0.0, 1e-15);

        const ModeProfile out = solve_mode_oracle(p, k, ModeKind::Outer);
        EXPECT_NEAR(out.outside_value(0.5), out.inside_value(0.5), 1e-14);
        EXPECT_NEAR(out.value(1.0), -tr.dn_u_boundary, 1e-15);
    }
}

TEST(ClosedForm, InnerVanishesAtUnitSigma)
{
    for (int k = 1; k <= 8; ++k) {
        const ModeProfile m = closed_form_mode(ProblemParams(2, 0.4, 1.0), k, ModeKind::Inner);
        EXPECT_EQ(m.inner_coeff, 0.0);
        EXPECT_EQ(m.outer_sing, 0.0);
        EXPECT_EQ(m.outer_reg, 0.0);
    }
}

TEST(ClosedForm, Substitution)
{
    const ProblemParams p(2, 0.5, 2.0);
    const double f = denom_F(p, 2);
    // (sigma - 1) k R^(1-k) = 1 * 2 * 2
    EXPECT_NEAR(closed_form_mode(p, 2, ModeKind::Inner).outer_sing, 4.0 / f, 1e-16);
}

TEST(ClosedForm, AnnulusCoefficientsMatchOracle)
{
    for (const ProblemParams& p : ParameterGrid{}.points())
        for (int k = 1; k <= 20; ++k) {
            const ModeProfile oi = solve_mode_oracle(p, k, ModeKind::Inner);
            const ModeProfile ci = closed_form_mode(p, k, ModeKind::Inner);
            const double scale_in = std::max(std::abs(oi.outer_sing), std::abs(oi.outer_reg));
            EXPECT_LE(std::abs(ci.outer_sing - oi.outer_sing), 1e-10 * scale_in) << describe_point(p, k);
            EXPECT_LE(std::abs(ci.outer_reg - oi.outer_reg), 1e-10 * scale_in) << describe_point(p, k);

            const ModeProfile oo = solve_mode_oracle(p, k, ModeKind::Outer);
            const ModeProfile co = closed_form_mode(p, k, ModeKind::Outer);
            const double scale_out = std::max(std::abs(oo.outer_sing), std::abs(oo.outer_reg));
            EXPECT_LE(std::abs(co.inner_coeff - oo.inner_coeff), 1e-10 * std::abs(oo.inner_coeff));
            EXPECT_LE(std::abs(co.outer_sing - oo.outer_sing), 1e-10 * scale_out) << describe_point(p, k);
            EXPECT_LE(std::abs(co.outer_reg - oo.outer_reg), 1e-10 * scale_out) << describe_point(p, k);
        }
}

TEST(ClosedForm, PrintedInnerCoefficientDisagreesWithOracle)
{
    // the printed interior coefficient is kept verbatim; it fails the value-jump condition
    const ProblemParams p(2, 0.5, 2.0);
    const ModeProfile printed = closed_form_mode(p, 2, ModeKind::Inner);
    const ModeProfile solved = solve_mode_oracle(p, 2, ModeKind::Inner);
    EXPECT_GT(std::abs(printed.inner_coeff - solved.inner_coeff), 1e-3 * std::abs(solved.inner_coeff));
    EXPECT_GT(transmission_residual(printed, p).value_jump, 1e-6);
}

TEST(ShapeDerivative, Examples)
{
    const ProblemParams p(2, 0.5, 2.0);
    const std::array<double, 2> dir{std::cos(0.3), std::sin(0.3)};
    EXPECT_EQ(u_prime_value(PerturbationSpec{}, p, 0.3, dir), 0.0);

    PerturbationSpec inner;
    inner.set(2, 1, 1.0, 0.0);
    EXPECT_EQ(u_prime_value(inner, ProblemParams(2, 0.5, 1.0), 0.7, dir), 0.0);
    EXPECT_NEAR(u_prime_value(inner, p, 1.0, dir), 0.0, 1e-15);

    const double expected = solve_mode_oracle(p, 2, ModeKind::Inner).value(0.3) * circular_harmonic({2, 1}, 0.3);
    EXPECT_DOUBLE_EQ(u_prime_value(inner, p, 0.3, dir), expected);

    const std::array<double, 3> dir3{0.0, 0.6, 0.8};
    EXPECT_NO_THROW(u_prime_value(inner, ProblemParams(3, 0.5, 2.0), 0.2, dir3));
    EXPECT_THROW(u_prime_value(inner, ProblemParams(4, 0.5, 2.0), 0.2, std::array<double, 4>{1, 0, 0, 0}),
                 std::invalid_argument);
    EXPECT_THROW(u_prime_value(inner, p, 1.5, dir), std::invalid_argument);
}
