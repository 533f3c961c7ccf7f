// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "swarmarray/array.hpp"
#include "swarmarray/errors.hpp"

using namespace swarmarray;

namespace {

const Frequency f300(300e6);

// Directivity of N isotropic sources by direct quadrature over the sphere.
// |AF| depends only on the angle psi from the array axis.
double brute_force_directivity_db(int n, double kd, double steer_plot_deg) {
    const double beta = kd * std::sin(deg_to_rad(steer_plot_deg));
    auto af2 = [&](double psi) {
        complex s = 0.0;
        for (int m = 0; m < n; ++m) s += std::polar(1.0, m * (kd * std::cos(psi) - beta));
        return std::norm(s);
    };
    const int steps = 400000;
    const double h = pi / steps;
    double integral = 0.0, peak = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double psi = i * h;
        const double v = af2(psi);
        peak = std::max(peak, v);
        const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        integral += w * v * std::sin(psi);
    }
    integral *= h / 3.0;
    return 10.0 * std::log10(2.0 * peak / integral);
}

}  // namespace

TEST(Steering, BroadsideIsExactlyZero) {
    const auto c = steering_phases(LinearArrayLayout::uniform(7, 0.5), f300, 0.0);
    for (double p : c.phases_deg) EXPECT_EQ(p, 0.0);
}

TEST(Steering, FortyFiveDegreesAtHalfWavelength) {
    const auto lay = LinearArrayLayout::uniform(2, 0.5 * f300.wavelength());
    EXPECT_NEAR(steering_phases(lay, f300, 45.0).phases_deg[1], 127.28, 0.01);
    EXPECT_NEAR(steering_phases(lay, f300, -45.0).phases_deg[1], -127.28, 0.01);
    EXPECT_THROW(steering_phases(lay, f300, 91.0), std::invalid_argument);
}

TEST(Steering, PhasesAreLinearInIndex) {
    const auto c = steering_phases(LinearArrayLayout::uniform(5, 0.4), f300, 30.0);
    for (std::size_t n = 2; n < c.phases_deg.size(); ++n) {
        EXPECT_NEAR(c.phases_deg[n] - c.phases_deg[n - 1], c.phases_deg[1], 1e-10);
    }
}

TEST(ArrayFactorTest, PhaseReferenceInvariance) {
    const auto lay = LinearArrayLayout::uniform(5, 0.5);
    auto c = steering_phases(lay, f300, 30.0);
    const auto grid = default_pattern_grid();
    const auto a = array_factor(c, lay, f300, grid);
    for (auto& p : c.phases_deg) p += 73.0;
    const auto b = array_factor(c, lay, f300, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(std::abs(a.samples[i]), std::abs(b.samples[i]), 1e-12);
    }
}

TEST(ArrayFactorTest, PeaksAtCommandWithFullCoherence) {
    const auto lay = LinearArrayLayout::uniform(4, 0.5 * f300.wavelength());
    for (double s : {-45.0, -20.0, 0.0, 33.0}) {
        const auto c = steering_phases(lay, f300, s);
        const std::vector<double> at{s};
        EXPECT_NEAR(std::abs(array_factor(c, lay, f300, at).samples[0]), 4.0, 1e-12);
    }
}

TEST(ArrayFactorTest, DirectivityMatchesQuadrature) {
    for (int n : {2, 4, 7}) {
        for (double s : {0.0, 45.0}) {
            const auto lay = LinearArrayLayout::uniform(n, 0.5 * f300.wavelength());
            const double got = array_factor_directivity_db(steering_phases(lay, f300, s), lay, f300);
            EXPECT_NEAR(got, brute_force_directivity_db(n, pi, s), 1e-4) << n << " " << s;
        }
    }
    const auto lay7 = LinearArrayLayout::uniform(7, 0.5 * f300.wavelength());
    EXPECT_NEAR(array_factor_directivity_db(steering_phases(lay7, f300, 0.0), lay7, f300), 8.451, 1e-3);
}

TEST(ArrayFactorTest, IsotropicSevenElementMetrics) {
    const auto lay = LinearArrayLayout::uniform(7, 0.5 * f300.wavelength());
    const auto grid = angle_grid(-90.0, 90.0, 0.05);
    const auto af = array_factor(steering_phases(lay, f300, 0.0), lay, f300, grid);
    const auto p = total_pattern(RadiationPattern::isotropic(grid), af);
    const auto m = pattern_metrics(p);
    EXPECT_NEAR(m.peak_angle_deg, 0.0, 1e-6);
    // Half power where |sin(7x/2) / (7 sin(x/2))|^2 = 1/2, x = pi sin(theta).
    auto af2 = [](double th) {
        const double x = pi * std::sin(deg_to_rad(th));
        const double r = std::sin(3.5 * x) / (7.0 * std::sin(0.5 * x));
        return r * r;
    };
    double lo = 1e-6, hi = 10.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (af2(mid) > 0.5 ? lo : hi) = mid;
    }
    EXPECT_NEAR(m.hpbw_deg, 2.0 * lo, 0.01);
    EXPECT_NEAR(m.sll_db, -12.65, 0.05);
    EXPECT_NEAR(m.peak_gain_dbi, 10.0 * std::log10(7.0), 1e-6);
}

TEST(ArrayFactorTest, FullCircleAfIsAmbiguous) {
    const auto lay = LinearArrayLayout::uniform(3, 0.5);
    const auto grid = default_pattern_grid();
    const auto p = total_pattern(RadiationPattern::isotropic(grid),
                                 array_factor(steering_phases(lay, f300, 0.0), lay, f300, grid));
    EXPECT_THROW(pattern_metrics(p), AmbiguousPeakError);
    EXPECT_THROW(pattern_metrics(RadiationPattern::isotropic(grid)), AmbiguousPeakError);
}

TEST(TotalPattern, GridMismatchThrows) {
    const auto lay = LinearArrayLayout::uniform(2, 0.5);
    const auto af = array_factor(steering_phases(lay, f300, 0.0), lay, f300, angle_grid(-90, 90, 1.0));
    EXPECT_THROW(total_pattern(RadiationPattern::isotropic(angle_grid(-90, 90, 2.0)), af), std::invalid_argument);
}

TEST(Metrics, HalfPowerWidthOfCosineSquared) {
    // cos^2 field -> half-power where cos^4 = 1/2.
    const auto grid = angle_grid(-90.0, 90.0, 0.1);
    std::vector<complex> field;
    for (double a : grid) field.push_back(std::pow(std::cos(deg_to_rad(a)), 2));
    const auto m = pattern_metrics(RadiationPattern(grid, field, 1.0));
    EXPECT_NEAR(m.hpbw_deg, 2.0 * rad_to_deg(std::acos(std::pow(0.5, 0.25))), 0.01);
    EXPECT_TRUE(std::isinf(m.sll_db));
}

TEST(SwarmPattern, MultiplicationTracksFullMomBroadside) {
    const auto cfg = make_swarm_config(f300, UavPlatform::reference(), 2);
    const auto grid = fine_pattern_grid();
    const auto full = pattern_metrics(swarm_pattern(cfg, 0.0, grid, ArrayMethod::full_mom));
    const auto mult = pattern_metrics(swarm_pattern(cfg, 0.0, grid, ArrayMethod::multiplication));
    EXPECT_NEAR(full.peak_gain_dbi, mult.peak_gain_dbi, 1.5);
    EXPECT_NEAR(full.peak_angle_deg, 0.0, 0.5);
}

TEST(SwarmPattern, SteeredPatternsMirror) {
    const auto cfg = make_swarm_config(f300, UavPlatform::reference(), 3);
    const auto grid = default_pattern_grid();
    const auto a = swarm_pattern(cfg, 30.0, grid);
    const auto b = swarm_pattern(cfg, -30.0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(a.gain_dbi(i), b.gain_dbi(grid.size() - 1 - i), 1e-9);
    }
}

TEST(GainVsCount, IncreasesAndValidatesCounts) {
    const auto base = make_swarm_config(f300, UavPlatform::reference(), 2);
    const std::vector<int> counts{2, 3, 4};
    const auto rows = gain_vs_count(base, counts, 0.0);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_LT(rows[0].metrics.peak_gain_dbi, rows[1].metrics.peak_gain_dbi);
    EXPECT_LT(rows[1].metrics.peak_gain_dbi, rows[2].metrics.peak_gain_dbi);
    const std::vector<int> bad{1};
    EXPECT_THROW(gain_vs_count(base, bad, 0.0), std::invalid_argument);
    SwarmConfig tight = base;
    tight.uav_spacing = 0.1;
    const std::vector<int> ok{2};
    EXPECT_THROW(gain_vs_count(tight, ok, 0.0), InfeasibleError);
}

TEST(GainVsCount, CsvHeader) {
    const std::vector<GainRow> rows{{2, 0.0, {7.5, 0.0, 60.0, -10.0}}};
    EXPECT_EQ(gain_table_csv(rows).rfind("n_uavs,theta_steer_deg,gain_dbi,hpbw_deg,sll_db\n", 0), 0u);
}
