#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "srp/intensity.hpp"

namespace srp {
namespace {

const double kPi = std::numbers::pi;

TEST(IntervalMass, HomogeneousIsLinear) {
    EXPECT_DOUBLE_EQ(interval_mass(IntensitySpec::homogeneous(2.0), 1.0, 3.0), 4.0);
}

TEST(IntervalMass, EmptyIntervalIsZero) {
    const auto sin_spec = IntensitySpec::common_profile(1.3, ActivityProfile::sinusoidal(0.7, 0.4));
    const auto pwl = IntensitySpec::piecewise_linear({{0.0, 0.0}, {2.0, 1.0}, {4.0, 5.0}});
    EXPECT_EQ(interval_mass(IntensitySpec::homogeneous(3.0), 5.0, 5.0), 0.0);
    EXPECT_EQ(interval_mass(sin_spec, 5.0, 5.0), 0.0);
    EXPECT_EQ(interval_mass(pwl, 5.0, 5.0), 0.0);
}

TEST(IntervalMass, SinusoidOverOnePeriod) {
    const auto spec = IntensitySpec::common_profile(1.0, ActivityProfile::sinusoidal(1.0, 0.5));
    EXPECT_NEAR(interval_mass(spec, 0.0, 1.0), 1.0, 1e-14);
}

TEST(IntervalMass, RejectsReversedOrNegative) {
    const auto spec = IntensitySpec::homogeneous(1.0);
    EXPECT_THROW(interval_mass(spec, 2.0, 1.0), std::invalid_argument);
    EXPECT_THROW(interval_mass(spec, -1.0, 1.0), std::invalid_argument);
}

TEST(ActivityProfile, SinusoidCumulativeMatchesTrapezoid) {
    const auto p = ActivityProfile::sinusoidal(0.8, 0.6);
    // composite Simpson with many panels on [0, 2.3]
    const int n = 20000;
    const double b = 2.3;
    double acc = p.density(0.0) + p.density(b);
    for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * p.density(b * k / n);
    EXPECT_NEAR(p.cumulative(b), acc * b / (3.0 * n), 1e-12);
}

TEST(ActivityProfile, InverseRoundTrips) {
    const auto p = ActivityProfile::sinusoidal(1.0, 0.9);
    for (double m : {0.0, 0.01, 0.3, 1.0, 2.75, 10.2}) {
        EXPECT_NEAR(p.cumulative(p.inverse_cumulative(m)), m, 1e-10) << m;
    }
}

TEST(ActivityProfile, PiecewiseConstantPeriodic) {
    const auto p = ActivityProfile::piecewise_constant({0.0, 0.5, 2.0}, {2.5, 0.5});
    EXPECT_DOUBLE_EQ(p.cumulative(2.0), 2.0);
    EXPECT_DOUBLE_EQ(p.cumulative(2.25), 2.0 + 0.25 * 2.5);
    EXPECT_DOUBLE_EQ(p.density(2.6), 0.5);
    EXPECT_NEAR(p.periodic_part(4.0), 0.0, 1e-12);
    EXPECT_THROW(ActivityProfile::piecewise_constant({0.0, 1.0}, {2.0}), std::invalid_argument);
}

TEST(ActivityProfile, PiecewiseConstantNearUnitMeanIsRescaled) {
    const auto p = ActivityProfile::piecewise_constant({0.0, 1.0, 2.0}, {1.5 + 1e-10, 0.5});
    EXPECT_NEAR(p.cumulative(2.0), 2.0, 1e-15);
}

TEST(ActivityProfile, SinusoidRejectsNonPositiveDensity) {
    EXPECT_THROW(ActivityProfile::sinusoidal(1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(ActivityProfile::sinusoidal(0.0, 0.5), std::invalid_argument);
}

TEST(IntensitySpec, PiecewiseLinearInverseIsLeftEdgeOfFlat) {
    const auto spec = IntensitySpec::piecewise_linear({{0.0, 0.0}, {1.0, 1.0}, {3.0, 1.0}, {4.0, 3.0}});
    EXPECT_DOUBLE_EQ(spec.inverse_cumulative(1.0), 1.0);
    EXPECT_DOUBLE_EQ(spec.inverse_cumulative(2.0), 3.5);
    EXPECT_DOUBLE_EQ(spec.cumulative(5.0), 5.0);  // last slope continues
    EXPECT_TRUE(spec.near_density_jump(3.0 + 1e-6, 1e-5));
    EXPECT_FALSE(spec.near_density_jump(2.0, 1e-5));
}

TEST(IntensitySpec, FlatCumulativeNeverReachedIsInfinite) {
    const auto flat = IntensitySpec::piecewise_linear({{0.0, 0.0}, {10.0, 0.0}});
    EXPECT_TRUE(std::isinf(flat.inverse_cumulative(0.5)));
}

TEST(SampleJumpTimes, ZeroIntensityGivesNoJumps) {
    Rng rng(3);
    const auto flat = IntensitySpec::piecewise_linear({{0.0, 0.0}, {20.0, 0.0}});
    EXPECT_TRUE(sample_jump_times(flat, 10.0, rng).empty());
}

TEST(SampleJumpTimes, HomogeneousMeanCount) {
    Rng rng(2024);
    const auto spec = IntensitySpec::homogeneous(1.0);
    const int replicas = 1000000;
    double total = 0.0;
    for (int r = 0; r < replicas; ++r) total += static_cast<double>(sample_jump_times(spec, 10.0, rng).size());
    // sd of the mean is sqrt(10/1e6) ~ 0.0032
    EXPECT_NEAR(total / replicas, 10.0, 0.01);
}

TEST(SampleJumpTimes, StrictlyIncreasingInsideHorizon) {
    Rng rng(11);
    const auto spec = IntensitySpec::common_profile(50.0, ActivityProfile::sinusoidal(0.3, 0.8));
    const auto times = sample_jump_times(spec, 4.0, rng);
    ASSERT_FALSE(times.empty());
    EXPECT_GT(times.front(), 0.0);
    EXPECT_LE(times.back(), 4.0);
    for (std::size_t k = 1; k < times.size(); ++k) EXPECT_LT(times[k - 1], times[k]);
}

TEST(SampleJumpTimes, CommonProfileIsTimeChangedUnitProcess) {
    const double w = 3.0;
    const auto profile = ActivityProfile::sinusoidal(1.0, 0.5);
    const auto spec = IntensitySpec::common_profile(w, profile);
    Rng a(99);
    Rng b(99);
    const auto times = sample_jump_times(spec, 5.0, a);
    const auto gamma = unit_poisson_points(w * profile.cumulative(5.0), b);
    ASSERT_EQ(times.size(), gamma.size());
    const auto cum = [&](double t) {
        return t + 0.5 / (2.0 * kPi) * (1.0 - std::cos(2.0 * kPi * t));
    };
    for (std::size_t j = 0; j < times.size(); ++j) {
        EXPECT_NEAR(times[j], oracle::invert_by_bisection(cum, gamma[j] / w, 0.0, 6.0), 1e-10);
    }
}

// Bins jump times from both samplers and runs a two-sample chi-square test.
TEST(SampleJumpTimes, MatchesThinningSamplerInDistribution) {
    const double w = 2.0;
    const double eps = 0.7;
    const double horizon = 3.0;
    const auto spec = IntensitySpec::common_profile(w, ActivityProfile::sinusoidal(1.0, eps));
    const auto density = [&](double t) { return w * (1.0 + eps * std::sin(2.0 * kPi * t)); };
    const int bins = 30;
    std::vector<double> ours(bins, 0.0);
    std::vector<double> theirs(bins, 0.0);
    Rng r1(5);
    Rng r2(6);
    for (int rep = 0; rep < 20000; ++rep) {
        for (double t : sample_jump_times(spec, horizon, r1)) ours[std::min(bins - 1, static_cast<int>(t / horizon * bins))] += 1;
        for (double t : oracle::thinning_sample(density, w * (1.0 + eps), horizon, r2)) {
            theirs[std::min(bins - 1, static_cast<int>(t / horizon * bins))] += 1;
        }
    }
    double n1 = 0.0;
    double n2 = 0.0;
    for (int k = 0; k < bins; ++k) {
        n1 += ours[k];
        n2 += theirs[k];
    }
    double stat = 0.0;
    for (int k = 0; k < bins; ++k) {
        const double a = ours[k] * std::sqrt(n2 / n1);
        const double b = theirs[k] * std::sqrt(n1 / n2);
        if (ours[k] + theirs[k] > 0) stat += (a - b) * (a - b) / (ours[k] + theirs[k]);
    }
    const boost::math::chi_squared dist(bins - 1);
    EXPECT_LT(stat, boost::math::quantile(dist, 0.999)) << "chi2 = " << stat;
    // total counts: both Poisson with mean 20000 * 6
    EXPECT_NEAR(n1 / 20000.0, w * horizon, 0.05);
    EXPECT_NEAR(n2 / 20000.0, w * horizon, 0.05);
}

TEST(BuildMixture, AcceptsUnitWeights) {
    EXPECT_EQ(build_mixture({{1.0, IntensitySpec::homogeneous(1.0)}}).size(), 1u);
    const auto m = build_mixture({{0.5, IntensitySpec::homogeneous(1.0)}, {0.5, IntensitySpec::homogeneous(2.0)}});
    EXPECT_EQ(m.size(), 2u);
    EXPECT_DOUBLE_EQ(m[0].weight + m[1].weight, 1.0);
}

TEST(BuildMixture, RejectsBadWeights) {
    EXPECT_THROW(build_mixture({{0.6, IntensitySpec::homogeneous(1.0)}, {0.6, IntensitySpec::homogeneous(1.0)}}),
                 std::invalid_argument);
    EXPECT_THROW(build_mixture({{1.5, IntensitySpec::homogeneous(1.0)}, {-0.5, IntensitySpec::homogeneous(1.0)}}),
                 std::invalid_argument);
    EXPECT_THROW(build_mixture({}), std::invalid_argument);
}

}  // namespace
}  // namespace srp
