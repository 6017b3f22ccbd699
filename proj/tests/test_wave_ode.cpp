#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "mtrd/report_io.hpp"
#include "mtrd/wave_ode.hpp"

using namespace mtrd;

namespace {

const double kSqrt2 = std::numbers::sqrt2;
const double kFrontSpeed = std::numbers::sqrt2 / 2.0;

/// Tanh front in its wave coordinate y = x + k tau with k = -1/sqrt2:
/// U(y) = (1 + tanh(-(sqrt2/4) y)) / 2.
double tanh_profile(double y) { return 0.5 * (1.0 + std::tanh(-(kSqrt2 / 4.0) * y)); }
double tanh_profile_slope(double y) {
    const double t = std::tanh(-(kSqrt2 / 4.0) * y);
    return -0.5 * (kSqrt2 / 4.0) * (1.0 - t * t);
}

double max_error(const Profile& p, double (*exact)(double)) {
    double e = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) e = std::max(e, std::abs(p.u[i] - exact(p.y[i])));
    return e;
}

double rational_profile(double y) { return kSqrt2 / y; }

Profile rational_run(double step) {
    const WaveProblem prob{1.0, -kSqrt2, ReactionTerm::huxley_normalized(), 2};
    return integrate_profile(prob, kSqrt2, -kSqrt2, {1.0, 5.0}, step);
}

Profile tanh_run(double step) {
    const WaveProblem prob{1.0, -1.0 / kSqrt2, ReactionTerm::huxley_normalized(), 2};
    return integrate_profile(prob, tanh_profile(0.0), tanh_profile_slope(0.0), {-5.0, 5.0}, step, 0.0);
}

}  // namespace

TEST(IntegrateProfile, LinearSolutionWithoutReaction) {
    const WaveProblem prob{1.0, 0.0, ReactionTerm::cubic(0.0, 0.0), 2};
    const Profile p = integrate_profile(prob, 1.0, 2.0, {0.0, 3.0}, 0.1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_NEAR(p.u[i], 1.0 + 2.0 * p.y[i], 1e-13);
        EXPECT_NEAR(p.du[i], 2.0, 1e-13);
    }
    EXPECT_FALSE(p.blew_up);
}

TEST(IntegrateProfile, RationalProfile) {
    const Profile p = rational_run(1e-3);
    EXPECT_EQ(p.y.front(), 1.0);
    EXPECT_EQ(p.y.back(), 5.0);
    EXPECT_LT(max_error(p, rational_profile), 1e-6);
}

TEST(IntegrateProfile, TanhFrontFromMidpoint) {
    const Profile p = tanh_run(1e-2);
    EXPECT_EQ(p.y.front(), -5.0);
    EXPECT_EQ(p.y.back(), 5.0);
    EXPECT_LT(max_error(p, tanh_profile), 1e-6);
}

TEST(IntegrateProfile, FourthOrderStepHalving) {
    // Steps large enough that the error is far above rounding.
    const double r1 = max_error(rational_run(0.1), rational_profile) / max_error(rational_run(0.05), rational_profile);
    EXPECT_GE(r1, 8.0);
    EXPECT_LE(r1, 32.0);
    const double r2 = max_error(tanh_run(0.4), tanh_profile) / max_error(tanh_run(0.2), tanh_profile);
    EXPECT_GE(r2, 8.0);
    EXPECT_LE(r2, 32.0);
}

TEST(IntegrateProfile, ResubstitutedResidualIsSmall) {
    const WaveProblem rational{1.0, -kSqrt2, ReactionTerm::huxley_normalized(), 2};
    EXPECT_LE(profile_residual(rational, rational_run(1e-2)), 1e-4);
    const WaveProblem front{1.0, -1.0 / kSqrt2, ReactionTerm::huxley_normalized(), 2};
    EXPECT_LE(profile_residual(front, tanh_run(1e-2)), 1e-4);
}

TEST(IntegrateProfile, BlowUpReturnsPartialProfile) {
    // mu u'' = u^3 - u^2 blows up in finite y for large data.
    const WaveProblem prob{1.0, 0.0, ReactionTerm::huxley_normalized(), 2};
    const Profile p = integrate_profile(prob, 5.0, 5.0, {0.0, 10.0}, 1e-3);
    EXPECT_TRUE(p.blew_up);
    EXPECT_LT(p.y.back(), 10.0);
    EXPECT_GE(p.size(), 4u);
    for (double u : p.u) EXPECT_LE(std::abs(u), kBlowUpBound);
}

TEST(IntegrateProfile, PreconditionsEnforced) {
    const WaveProblem ok{1.0, 0.0, ReactionTerm::huxley_normalized(), 2};
    EXPECT_THROW(integrate_profile(ok, 0.0, 0.0, {0.0, 1.0}, 0.0), Error);
    EXPECT_THROW(integrate_profile(ok, 0.0, 0.0, {1.0, 1.0}, 0.1), Error);
    EXPECT_THROW(integrate_profile(ok, 0.0, 0.0, {0.0, 1.0}, 0.1, 2.0), Error);
    WaveProblem third = ok;
    third.n = 3;
    try {
        integrate_profile(third, 0.0, 0.0, {0.0, 1.0}, 0.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedOrder);
    }
}

TEST(Profile, InterpolantReproducesNodes) {
    const Profile p = tanh_run(0.05);
    for (std::size_t i = 0; i < p.size(); i += 7) {
        EXPECT_EQ(p.value(p.y[i]), p.u[i]);
        EXPECT_NEAR(p.slope(p.y[i]), p.du[i], 1e-14);
    }
    EXPECT_NEAR(p.value(0.123), tanh_profile(0.123), 1e-7);
    EXPECT_THROW(p.value(6.0), Error);
}

TEST(Profile, CsvHasTwoColumns) {
    const Profile p = rational_run(0.5);
    std::ostringstream os;
    write_profile_csv(os, p);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "y,u");
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 1);
        ++rows;
    }
    EXPECT_EQ(rows, p.size());
}

TEST(FrontShoot, HuxleySpeed) {
    const ShootResult r = front_shoot(1.0, ReactionTerm::huxley_normalized(), 0.0, 1.0, {0.3, 1.0});
    EXPECT_NEAR(r.speed, kFrontSpeed, 1e-3);
    EXPECT_LE(r.landing_error, 1e-6);
    EXPECT_GE(r.profile.size(), 4u);
    // Monotone increasing front from 0 toward 1.
    for (std::size_t i = 1; i < r.profile.size(); ++i) EXPECT_GE(r.profile.u[i], r.profile.u[i - 1]);
}

TEST(FrontShoot, ProfileMatchesReflectedClosedForm) {
    const ShootResult r = front_shoot(1.0, ReactionTerm::huxley_normalized(), 0.0, 1.0, {0.3, 1.0});
    // The orbit is U(y) = (1 + tanh((sqrt2/4)(y - y_half))) / 2 for some shift y_half.
    std::size_t half = 0;
    while (half + 1 < r.profile.size() && r.profile.u[half] < 0.5) ++half;
    const double y_half = r.profile.y[half - 1] + (0.5 - r.profile.u[half - 1]) * (r.profile.y[half] - r.profile.y[half - 1]) /
                                                      (r.profile.u[half] - r.profile.u[half - 1]);
    for (std::size_t i = 0; i < r.profile.size(); i += 50) {
        EXPECT_NEAR(r.profile.u[i], 0.5 * (1.0 + std::tanh((kSqrt2 / 4.0) * (r.profile.y[i] - y_half))), 1e-3);
    }
}

TEST(FrontShoot, NoReactionHasNoConnection) {
    try {
        front_shoot(1.0, ReactionTerm::cubic(0.0, 0.0), 0.0, 1.0, {0.3, 1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoConnection);
    }
}

TEST(FrontShoot, BracketWithoutSignChange) {
    try {
        front_shoot(1.0, ReactionTerm::huxley_normalized(), 0.0, 1.0, {0.8, 1.2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoConnection);
    }
}

TEST(FrontShoot, NonEquilibriumRejected) {
    EXPECT_THROW(front_shoot(1.0, ReactionTerm::huxley_normalized(), 0.0, 0.5, {0.3, 1.0}), Error);
}

TEST(FrontShoot, FitzHughNagumoZeroThresholdMatchesHuxley) {
    const double a = front_shoot(1.0, ReactionTerm::huxley_normalized(), 0.0, 1.0, {0.3, 1.0}).speed;
    const double b = front_shoot(1.0, ReactionTerm::fitzhugh_nagumo(0.0), 0.0, 1.0, {0.3, 1.0}).speed;
    EXPECT_NEAR(b, kFrontSpeed, 1e-3);
    EXPECT_NEAR(a, b, 1e-3);
}

TEST(FrontShoot, FitzHughNagumoBistableSpeed) {
    // u_minus = 0, u_plus = 1: speed (1 - 2 delta) / sqrt2 in this orientation.
    const double delta = 0.25;
    const double c = front_shoot(1.0, ReactionTerm::fitzhugh_nagumo(delta), 0.0, 1.0, {-0.9, 0.9}).speed;
    EXPECT_NEAR(c, (1.0 - 2.0 * delta) / kSqrt2, 1e-3);
}

TEST(FrontShootProperty, SpeedStableUnderStepHalving) {
    ShootOptions coarse;
    coarse.step = 2e-2;
    ShootOptions fine = coarse;
    fine.step = 1e-2;
    const double a = front_shoot(1.0, ReactionTerm::huxley_normalized(), 0.0, 1.0, {0.3, 1.0}, coarse).speed;
    const double b = front_shoot(1.0, ReactionTerm::huxley_normalized(), 0.0, 1.0, {0.3, 1.0}, fine).speed;
    EXPECT_NEAR(a, b, 2e-3);
}
