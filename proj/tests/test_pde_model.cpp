#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mtrd/constraint.hpp"
#include "mtrd/expression.hpp"
#include "mtrd/pde.hpp"
#include "test_support.hpp"

using namespace mtrd;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

ScalarField pole_solution() {
    return ScalarField(1, FieldFunction([](auto tau, const auto& x) { return kSqrt2 / (x - kSqrt2 * tau[0] + 1.0); }),
                       "sqrt2 / (x - sqrt2 tau + 1)");
}

}  // namespace

TEST(Reaction, Definitions) {
    const ReactionTerm hux = ReactionTerm::huxley_normalized();
    const ReactionTerm cub = ReactionTerm::cubic(2.0, 3.0);
    const ReactionTerm fhn = ReactionTerm::fitzhugh_nagumo(0.25);
    for (double u : {-1.5, 0.0, 0.3, 1.0, 2.0}) {
        EXPECT_DOUBLE_EQ(hux(u), u * u - u * u * u);
        EXPECT_DOUBLE_EQ(cub(u), -2.0 * u * u * u + 3.0 * u * u);
        EXPECT_NEAR(fhn(u), u * (1.0 - u) * (u - 0.25), 1e-15);
    }
}

TEST(Reaction, HuxleyEquilibria) {
    EXPECT_EQ(reaction_eval(ReactionTerm::huxley_normalized(), 0.0), 0.0);
    EXPECT_EQ(reaction_eval(ReactionTerm::huxley_normalized(), 1.0), 0.0);
}

TEST(Reaction, FitzHughNagumoWithZeroThresholdIsHuxley) {
    const ReactionTerm fhn = ReactionTerm::fitzhugh_nagumo(0.0);
    const ReactionTerm hux = ReactionTerm::huxley_normalized();
    for (double u : {0.0, 0.5, 1.0}) EXPECT_DOUBLE_EQ(reaction_eval(fhn, u), reaction_eval(hux, u));
}

TEST(Reaction, CustomExpressionWithDerivatives) {
    const ReactionTerm f = ReactionTerm::custom("u^2 - u^3 + 0.5*ux");
    EXPECT_EQ(f.derivative_order(), 1);
    const double d[2] = {0.5, 2.0};
    EXPECT_DOUBLE_EQ(f(std::span<const double>(d, 2)), 0.25 - 0.125 + 1.0);
    EXPECT_DOUBLE_EQ(f.derivative(0.5), 2.0 * 0.5 - 3.0 * 0.25);
    EXPECT_EQ(ReactionTerm::custom("u*(1-u)").derivative_order(), 0);
}

TEST(Reaction, CustomParseErrorReported) {
    try {
        ReactionTerm::custom("u^2 + * 3");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
    }
    EXPECT_THROW(ReactionTerm::custom("v + 1"), Error);
}

TEST(Expression, ParsesAndDifferentiates) {
    const Expression e = Expression::parse("2*exp(-a) + sin(b)^2 - a/b + pi", {"a", "b"});
    const double v[2] = {0.3, 1.7};
    EXPECT_NEAR(e(std::span<const double>(v, 2)),
                2.0 * std::exp(-0.3) + std::pow(std::sin(1.7), 2) - 0.3 / 1.7 + std::numbers::pi, 1e-14);
    const D1 w[2] = {D1(0.3, 1.0), D1(1.7, 0.0)};
    EXPECT_NEAR(e(std::span<const D1>(w, 2)).eps, -2.0 * std::exp(-0.3) - 1.0 / 1.7, 1e-14);
    EXPECT_TRUE(e.uses(0));
    EXPECT_TRUE(e.uses(1));
    const double p[1] = {2.0};
    EXPECT_DOUBLE_EQ(Expression::parse("-x^2", {"x"})(std::span<const double>(p, 1)), -4.0);
    EXPECT_DOUBLE_EQ(Expression::parse("2^3^2", {"x"})(std::span<const double>(p, 1)), 512.0);
    EXPECT_DOUBLE_EQ(Expression::parse("1e-1 * 3", {"x"})(std::span<const double>(p, 1)), 0.30000000000000004);
}

TEST(Residual, ZeroAndOneAreSolutions) {
    const PDESpec pde = PDESpec::huxley(1);
    for (double x : {-2.0, 0.0, 1.5}) {
        EXPECT_EQ(residual(pde, constant_field(1, 0.0), Point{{0.3}, x}), 0.0);
        EXPECT_EQ(residual(pde, constant_field(1, 1.0), Point{{0.3}, x}), 0.0);
    }
}

TEST(Residual, PoleSolutionAtOrigin) {
    EXPECT_NEAR(residual(PDESpec::huxley(1), pole_solution(), Point{{0.0}, 0.0}), 0.0, 1e-10);
}

TEST(Residual, ConstantFieldGivesMinusReaction) {
    const std::vector<PDESpec> pdes = {PDESpec::huxley(2), PDESpec::canonical(1, 2.0, ReactionTerm::cubic(1.5, 0.5)),
                                       PDESpec::canonical(3, 0.7, ReactionTerm::fitzhugh_nagumo(0.3))};
    for (const PDESpec& pde : pdes) {
        for (double c : {-1.0, 0.0, 0.3, 1.0, 2.5}) {
            Point p{std::vector<double>(static_cast<std::size_t>(pde.m), 0.2), 0.4};
            EXPECT_NEAR(residual(pde, constant_field(static_cast<std::size_t>(pde.m), c), p), -pde.reaction(c), 1e-15);
        }
    }
}

TEST(Residual, LinearPartIsLinear) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const ScalarField u(2, FieldFunction([](auto tau, const auto& x) { return sin(x) * exp(tau[0]) + tau[1] * x * x; }),
                        "u");
    for (const Form form : {Form::Canonical, Form::CanonicalConvective, Form::General}) {
        PDESpec pde = PDESpec::canonical(2, 1.3, ReactionTerm::cubic(0.0, 0.0));
        if (form == Form::CanonicalConvective) pde = PDESpec::canonical_convective(2, 1.3, -0.4, ReactionTerm::cubic(0.0, 0.0));
        if (form == Form::General) {
            pde = PDESpec::general({VectorFunction([](auto t) { return 1.0 + t[0] * t[0]; }),
                                    VectorFunction([](auto t) { return exp(t[1]); })},
                                   1.3, ReactionTerm::cubic(0.0, 0.0));
        }
        for (int trial = 0; trial < 20; ++trial) {
            const double alpha = 3.0 * U(rng);
            const Point p{{U(rng), U(rng)}, U(rng)};
            EXPECT_NEAR(residual(pde, alpha * u, p), alpha * residual(pde, u, p), 1e-12);
        }
    }
}

TEST(Residual, GeneralFormUsesCoefficients) {
    // u = t1 + 2 t2 with h = (t2, 3) gives LHS = t2 + 6.
    const ScalarField u(2, FieldFunction([](auto tau, const auto&) { return tau[0] + 2.0 * tau[1]; }), "u");
    const PDESpec pde = PDESpec::general(
        {VectorFunction([](auto t) { return t[1]; }), VectorFunction([](auto t) {
             using T = std::decay_t<decltype(t[0])>;
             return T(3.0);
         })},
        1.0, ReactionTerm::cubic(0.0, 0.0));
    EXPECT_DOUBLE_EQ(residual(pde, u, Point{{1.0, 0.5}, 0.0}), 6.5);
}

TEST(Residual, ConvectiveSign) {
    // u = x: residual = 0 - 0 + k * 1 - 0
    const PDESpec pde = PDESpec::canonical_convective(1, 1.0, 0.75, ReactionTerm::cubic(0.0, 0.0));
    EXPECT_DOUBLE_EQ(residual(pde, x_coordinate(1), Point{{0.0}, 2.0}), 0.75);
}

TEST(Residual, HigherSpatialOrder) {
    // u = x^4 with n = 4, mu = 1: residual = -24
    PDESpec pde = PDESpec::canonical(1, 1.0, ReactionTerm::cubic(0.0, 0.0));
    pde.n = 4;
    const ScalarField u(1, FieldFunction([](auto, const auto& x) { return x * x * x * x; }), "x^4");
    EXPECT_NEAR(residual(pde, u, Point{{0.0}, 0.7}), -24.0, 1e-12);
}

TEST(Residual, MissingCoefficientRejected) {
    PDESpec pde = PDESpec::huxley(2);
    pde.form = Form::General;
    try {
        residual(pde, constant_field(2, 0.0), Point{{0.0, 0.0}, 0.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingCoefficient);
    }
}

TEST(Residual, SingularPointRejected) {
    const ScalarField u = pole_solution().with_singular_set([](const Point& p) {
        return std::abs(p.x - kSqrt2 * p.tau[0] + 1.0) < 1e-3;
    });
    try {
        residual(PDESpec::huxley(1), u, Point{{0.0}, -1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularPoint);
    }
}

TEST(PDESpec, InvariantsEnforced) {
    PDESpec p = PDESpec::huxley(1);
    p.mu = 0.0;
    EXPECT_THROW(p.validate(), Error);
    p = PDESpec::huxley(1);
    p.k = 0.5;
    EXPECT_THROW(p.validate(), Error);
    p = PDESpec::huxley(1);
    p.h.push_back(VectorFunction([](auto t) { return t[0]; }));
    EXPECT_THROW(p.validate(), Error);
    p = PDESpec::huxley(1);
    p.reaction = ReactionTerm::custom("uxx");
    EXPECT_THROW(p.validate(), Error);
    p.n = 3;
    EXPECT_NO_THROW(p.validate());
}

TEST(ResidualProperty, DualAndFiniteDifferenceAgree) {
    for (CatalogId id : kCatalogIds) {
        const CatalogEntry e = catalog(id, {});
        const ScalarField smooth = test_support::bounded_part(e.field, 5.0);
        for (const Point& p : test_support::random_unmasked_points(smooth, e.default_grid, 100, 99)) {
            const double a = residual(e.pde, e.field, p, JetMethod::Dual);
            const double b = residual(e.pde, e.field, p, JetMethod::FiniteDifference, 1e-5);
            EXPECT_NEAR(a, b, 1e-5) << to_string(id);
        }
    }
}
