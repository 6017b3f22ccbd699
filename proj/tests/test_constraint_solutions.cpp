#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mtrd/constraint.hpp"
#include "mtrd/verifier.hpp"
#include "test_support.hpp"

using namespace mtrd;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

/// One representative of every ArbitraryFunction kind over two omegas.
std::vector<ArbitraryFunction> p_kinds_any_sign() {
    return {ArbitraryFunction::constant(0.7),
            ArbitraryFunction::linear({1.0, 1.0}),
            ArbitraryFunction::sine(0.8, {1.5, -0.5}, 0.3),
            ArbitraryFunction::expquad({-0.3, -0.2}, 1.2),
            ArbitraryFunction::polynomial({{0.0, 0.5, -0.25}, {0.1, 0.0, 0.0, 0.2}})};
}

/// Same kinds, kept positive on the exp-family test box so 1 + P e^s has no zero.
std::vector<ArbitraryFunction> p_kinds_positive() {
    return {ArbitraryFunction::constant(0.7),
            ArbitraryFunction::linear({0.2, 0.3}, 1.5),
            ArbitraryFunction::constant(1.0) + ArbitraryFunction::sine(0.8, {1.5, -0.5}, 0.3),
            ArbitraryFunction::expquad({-0.3, -0.2}, 1.2),
            ArbitraryFunction::polynomial({{0.5, 0.0, 0.25}, {0.1, 0.0, 0.3}})};
}

}  // namespace

TEST(Omega, Examples) {
    EXPECT_TRUE(omega_coords(std::vector<double>{5.0}).empty());
    EXPECT_EQ(omega_coords(std::vector<double>{1.0, 2.0, 3.0}), (std::vector<double>{2.0, 1.0}));
    EXPECT_EQ(omega_coords(std::vector<double>{5.0, 5.0}), (std::vector<double>{0.0}));
}

TEST(ConstraintResidual, OmegaFieldIsAnnihilated) {
    FieldFunction psi([](auto omega, const auto& y) { return sin(omega[0]) * y; });
    const ScalarField u = build_constraint_solution(psi, 0.0, 2);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) EXPECT_NEAR(constraint_residual(u, Point{{U(rng), U(rng)}, U(rng)}), 0.0, 1e-12);
}

TEST(ConstraintResidual, CoordinateAndAverage) {
    EXPECT_EQ(constraint_residual(tau_coordinate(2, 0), Point{{0.4, 0.9}, 1.0}), 1.0);
    const ScalarField v = 0.5 * (tau_coordinate(2, 0) + tau_coordinate(2, 1));
    EXPECT_DOUBLE_EQ(constraint_residual(v, Point{{0.4, 0.9}, 1.0}), 1.0);
}

TEST(ConstraintResidual, SingularPointRejected) {
    const CatalogEntry e = catalog(CatalogId::RationalM1, {1, {}, 1.0, {}});
    try {
        constraint_residual(e.field, Point{{0.0}, -1.0});
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::SingularPoint);
    }
}

TEST(BuildConstraintSolution, PlaneWaveChainRule) {
    FieldFunction U([](auto, const auto& y) { return y; });
    const ScalarField u = build_constraint_solution(U, 1.0, 1);
    const Point p{{0.7}, -0.2};
    EXPECT_DOUBLE_EQ(u(p), 0.5);
    const JetValue j = eval_jet(u, p, 1);
    EXPECT_DOUBLE_EQ(j.d_tau[0], 1.0 * j.d_x());
}

TEST(BuildConstraintSolution, OmegaPlusY) {
    FieldFunction psi([](auto omega, const auto& y) { return omega[0] + y; });
    const ScalarField u = build_constraint_solution(psi, 0.0, 2);
    const Point p{{0.25, 1.5}, 2.0};
    EXPECT_DOUBLE_EQ(u(p), 1.25 + 2.0);
    EXPECT_EQ(constraint_residual(u, p), 0.0);
}

TEST(BuildConstraintSolution, RationalProfileInThreeTimes) {
    const CatalogEntry e = catalog(CatalogId::RationalFamily, {3, ArbitraryFunction::linear({1.0, 1.0}), {}, {}});
    const Report r = residual_report(e.pde, e.field, e.default_grid, 1e-8);
    EXPECT_TRUE(r.pass) << r.max_abs_residual;
    EXPECT_GE(r.points_evaluated + r.points_masked, 10000u);
}

TEST(PropositionForm, ZeroShiftLeavesFieldUnchanged) {
    const CatalogEntry e = catalog(CatalogId::ExpFamily, {2, {}, {}, {}});
    const ScalarField u = build_proposition_form(e.field, 0.0, ArbitraryFunction::constant(0.0), 2);
    for (const Point& p : test_support::random_unmasked_points(e.field, e.default_grid, 50, 3)) EXPECT_EQ(u(p), e.field(p));
}

TEST(PropositionForm, ExpFamilyWithSineShift) {
    const CatalogEntry e = catalog(CatalogId::ExpFamily, {2, ArbitraryFunction::constant(1.0), {}, {}});
    const ScalarField u = build_proposition_form(e.field, 0.0, ArbitraryFunction::sine(0.6, {2.0}, 0.1), 2);
    const Report r = residual_report(e.pde, u, e.default_grid, 1e-8);
    EXPECT_TRUE(r.pass) << r.max_abs_residual;
}

TEST(PropositionForm, ConstantShiftOfFrontMovesX0) {
    const double c = 0.8;
    const ScalarField base = catalog(CatalogId::TanhFront, {1, {}, 0.0, {}}).field;
    const ScalarField u = build_proposition_form(base, 0.0, ArbitraryFunction::constant(c), 1);
    const ScalarField shifted = catalog(CatalogId::TanhFront, {1, {}, c, {}}).field;
    for (double x = -5.0; x <= 5.0; x += 0.5) EXPECT_NEAR(u(Point{{0.3}, x}), shifted(Point{{0.3}, x}), 1e-15);
}

TEST(PropositionForm, DimensionMismatchRejected) {
    EXPECT_THROW(build_proposition_form(catalog(CatalogId::TanhFront).field, 0.0, ArbitraryFunction::constant(0.0), 2),
                 Error);
}

TEST(Catalog, PointValues) {
    EXPECT_NEAR(catalog(CatalogId::RationalM1, {1, {}, 1.0, {}}).field(Point{{0.0}, 0.0}), kSqrt2, 1e-15);
    EXPECT_DOUBLE_EQ(catalog(CatalogId::ExpM1, {1, {}, {}, 1.0}).field(Point{{0.0}, 0.0}), 0.5);
    EXPECT_DOUBLE_EQ(catalog(CatalogId::TanhFront, {1, {}, 0.0, {}}).field(Point{{0.0}, 0.0}), 0.5);
}

TEST(Catalog, ExpEqualsTanhAtUnitConstant) {
    const ScalarField a = catalog(CatalogId::ExpM1, {1, {}, {}, 1.0}).field;
    const ScalarField b = catalog(CatalogId::TanhFront, {1, {}, 0.0, {}}).field;
    std::mt19937 rng(50);
    std::uniform_real_distribution<double> T(0.0, 2.0), X(-10.0, 10.0);
    for (int i = 0; i < 50; ++i) {
        const Point p{{T(rng)}, X(rng)};
        EXPECT_NEAR(a(p), b(p), 1e-12);
    }
}

TEST(Catalog, ExpReparameterizationMatchesFronts) {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> T(0.0, 2.0), X(-10.0, 10.0);
    for (double C : {0.2, 1.0, 3.5}) {
        const ScalarField e = catalog(CatalogId::ExpM1, {1, {}, {}, C}).field;
        const ScalarField t = catalog(CatalogId::TanhFront, {1, {}, kSqrt2 * std::log(C), {}}).field;
        const ScalarField viaC = catalog(CatalogId::TanhFront, {1, {}, {}, C}).field;
        for (int i = 0; i < 100; ++i) {
            const Point p{{T(rng)}, X(rng)};
            EXPECT_NEAR(e(p), t(p), 1e-10);
            EXPECT_NEAR(e(p), viaC(p), 1e-10);
        }
    }
    for (double C : {-0.5, -2.0}) {
        const CatalogEntry e = catalog(CatalogId::ExpM1, {1, {}, {}, C});
        const CatalogEntry c = catalog(CatalogId::CothBranch, {1, {}, {}, C});
        EXPECT_TRUE(e.may_have_poles);
        for (int i = 0; i < 100; ++i) {
            const Point p{{T(rng)}, X(rng)};
            if (e.field.is_singular(p) || c.field.is_singular(p)) continue;
            EXPECT_NEAR(e.field(p), c.field(p), 1e-10 * std::max(1.0, std::abs(c.field(p))));
        }
    }
}

TEST(Catalog, BadParametersRejected) {
    auto code_of = [](auto fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::ConfigError;
    };
    EXPECT_EQ(code_of([] { catalog(CatalogId::TanhFront, {1, {}, {}, -1.0}); }), ErrorCode::BadParameter);
    EXPECT_EQ(code_of([] { catalog(CatalogId::TanhFront, {1, {}, {}, 0.0}); }), ErrorCode::BadParameter);
    EXPECT_EQ(code_of([] { catalog(CatalogId::CothBranch, {1, {}, {}, 2.0}); }), ErrorCode::BadParameter);
    EXPECT_EQ(code_of([] { catalog(CatalogId::TanhFront, {1, {}, 1.0, 1.0}); }), ErrorCode::BadParameter);
    EXPECT_EQ(code_of([] { catalog(CatalogId::RationalFamily, {0, {}, {}, {}}); }), ErrorCode::BadParameter);
    EXPECT_EQ(code_of([] { catalog(CatalogId::ExpFamily, {2, ArbitraryFunction::linear({1.0, 1.0}), {}, {}}); }),
              ErrorCode::BadParameter);
    EXPECT_EQ(code_of([] { catalog("no_such_entry"); }), ErrorCode::BadParameter);
}

TEST(Catalog, IdsAndSchemas) {
    std::vector<std::string> ids;
    for (CatalogId id : kCatalogIds) {
        ids.emplace_back(to_string(id));
        EXPECT_EQ(catalog_id(to_string(id)), id);
        EXPECT_FALSE(catalog_schema(id).empty());
    }
    EXPECT_EQ(ids, (std::vector<std::string>{"rational_family", "exp_family", "rational_m1", "exp_m1", "tanh_front",
                                             "coth_branch"}));
}

TEST(Catalog, ExpFamilyPoleDetection) {
    EXPECT_FALSE(catalog(CatalogId::ExpFamily, {3, ArbitraryFunction::expquad({0.1, 0.1}), {}, {}}).may_have_poles);
    EXPECT_TRUE(catalog(CatalogId::ExpFamily, {3, ArbitraryFunction::linear({1.0, 0.0}), {}, {}}).may_have_poles);
}

TEST(CatalogProperty, EveryEntryCertifiesOnItsMaskedGrid) {
    for (CatalogId id : kCatalogIds) {
        const CatalogEntry e = catalog(id, {});
        ASSERT_GE(e.default_grid.size(), 10000u);
        const Report r = residual_report(e.pde, e.field, e.default_grid, 1e-8);
        EXPECT_TRUE(r.pass) << to_string(id) << " " << r.max_abs_residual;
        EXPECT_GT(r.points_evaluated, e.default_grid.size() * 9 / 10) << to_string(id);
    }
}

TEST(CatalogProperty, FamiliesSolveForEveryArbitraryFunctionKind) {
    for (const ArbitraryFunction& P : p_kinds_any_sign()) {
        const CatalogEntry e = catalog(CatalogId::RationalFamily, {3, P, {}, {}});
        const Report r = residual_report(e.pde, e.field, e.default_grid, 1e-8);
        EXPECT_TRUE(r.pass) << P.describe() << " " << r.max_abs_residual;
    }
    for (const ArbitraryFunction& P : p_kinds_positive()) {
        const CatalogEntry e = catalog(CatalogId::ExpFamily, {3, P, {}, {}});
        EXPECT_FALSE(e.may_have_poles) << P.describe();
        const Report r = residual_report(e.pde, e.field, e.default_grid, 1e-8);
        EXPECT_TRUE(r.pass) << P.describe() << " " << r.max_abs_residual;
    }
}

TEST(CatalogProperty, OmegaBuiltFieldsAreAnnihilated) {
    for (CatalogId id : {CatalogId::RationalFamily, CatalogId::ExpFamily}) {
        for (const ArbitraryFunction& P : p_kinds_positive()) {
            // u depends on tau^m through y as well, so the sum of time derivatives is
            // k u_y; the profile itself (k = 0) is annihilated exactly.
            FieldFunction psi([P](auto omega, const auto& y) { return y * exp(-P(omega)); });
            const ScalarField u = build_constraint_solution(psi, 0.0, 3);
            const CatalogEntry e = catalog(id, {3, P, {}, {}});
            for (const Point& p : test_support::random_unmasked_points(e.field, e.default_grid, 40, 6)) {
                EXPECT_LE(std::abs(constraint_residual(u, p)), 1e-10);
                const JetValue j = eval_jet(e.field, p, 1);
                const double k = id == CatalogId::RationalFamily ? -kSqrt2 : -1.0 / kSqrt2;
                EXPECT_NEAR(constraint_residual(e.field, p), k * j.d_x(), 1e-10 * std::max(1.0, std::abs(j.d_x())));
            }
        }
    }
}

TEST(SymmetryOrbit, TrivialOrbitIsIdentity) {
    const CatalogEntry e = catalog(CatalogId::TanhFront);
    const ScalarField u = symmetry_orbit(e.field, {0.0}, 0.0, false);
    for (double x : {-4.0, 0.0, 3.0}) EXPECT_EQ(u(Point{{0.5}, x}), e.field(Point{{0.5}, x}));
}

TEST(SymmetryOrbit, ReflectedFrontStillSolves) {
    const CatalogEntry e = catalog(CatalogId::TanhFront);
    const ScalarField u = symmetry_orbit(e.field, {0.0}, 0.0, true);
    const Report r = residual_report(e.pde, u, e.default_grid, 1e-8);
    EXPECT_TRUE(r.pass) << r.max_abs_residual;
    // Moves the other way: the 1/2 level sits at x = -tau / sqrt2 instead of +tau / sqrt2.
    EXPECT_NEAR(u(Point{{1.0}, -1.0 / kSqrt2}), 0.5, 1e-15);
    EXPECT_NEAR(e.field(Point{{1.0}, 1.0 / kSqrt2}), 0.5, 1e-15);
}

TEST(SymmetryOrbit, ShiftAbsorbedIntoConstant) {
    const ScalarField base = catalog(CatalogId::RationalM1, {1, {}, 1.0, {}}).field;
    const ScalarField moved = symmetry_orbit(base, {0.0}, 3.0, false);
    const ScalarField direct = catalog(CatalogId::RationalM1, {1, {}, 4.0, {}}).field;
    for (double x = -3.0; x <= 3.0; x += 0.37) {
        const Point p{{0.2}, x};
        if (direct.is_singular(p)) continue;
        EXPECT_NEAR(moved(p), direct(p), 1e-12);
    }
}

TEST(SymmetryOrbitProperty, ResidualIsTransported) {
    for (CatalogId id : {CatalogId::TanhFront, CatalogId::ExpFamily, CatalogId::RationalFamily}) {
        const CatalogEntry e = catalog(id, {2, {}, {}, {}});
        const std::size_t m = e.field.m();
        const std::vector<double> tau0(m, 0.3);
        for (bool reflect : {false, true}) {
            const ScalarField u = symmetry_orbit(e.field, tau0, 0.7, reflect);
            for (const Point& p : test_support::random_unmasked_points(u, e.default_grid, 40, 10)) {
                Point q = p;
                for (std::size_t i = 0; i < m; ++i) q.tau[i] += tau0[i];
                q.x = (reflect ? -p.x : p.x) + 0.7;
                EXPECT_NEAR(residual(e.pde, u, p), residual(e.pde, e.field, q), 1e-10) << to_string(id);
            }
        }
    }
}

TEST(ArbitraryFunction, KindsEvaluate) {
    const std::vector<double> w{0.5, -1.0};
    EXPECT_DOUBLE_EQ(ArbitraryFunction::constant(2.0)(w), 2.0);
    EXPECT_DOUBLE_EQ(ArbitraryFunction::linear({2.0, 3.0}, 1.0)(w), 1.0 + 1.0 - 3.0);
    EXPECT_DOUBLE_EQ(ArbitraryFunction::sine(2.0, {1.0, 1.0}, 0.5)(w), 2.0 * std::sin(0.0));
    EXPECT_DOUBLE_EQ(ArbitraryFunction::expquad({1.0, 2.0}, 3.0)(w), 3.0 * std::exp(0.25 + 2.0));
    EXPECT_DOUBLE_EQ(ArbitraryFunction::polynomial({{1.0, 2.0}, {0.0, 0.0, 1.0}})(w), 1.0 + 1.0 + 1.0);
    EXPECT_DOUBLE_EQ((ArbitraryFunction::constant(2.0) * ArbitraryFunction::linear({1.0}))(w), 1.0);
    EXPECT_THROW(ArbitraryFunction::linear({1.0, 1.0, 1.0})(w), Error);
}
