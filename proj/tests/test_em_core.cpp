// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "swarmarray/em_core.hpp"
#include "swarmarray/errors.hpp"

using namespace swarmarray;

TEST(Frequency, WavelengthAt300MHz) {
    const Frequency f(300e6);
    EXPECT_NEAR(f.wavelength(), 0.99930819, 1e-8);
    EXPECT_NEAR(f.wavenumber() * f.wavelength(), 2.0 * pi, 1e-12);
    EXPECT_THROW(Frequency(0.0), std::invalid_argument);
    EXPECT_THROW(Frequency(-1.0), std::invalid_argument);
}

TEST(Angles, PlotAxisRoundTrip) {
    for (double p = -90.0; p <= 90.0; p += 7.5) EXPECT_NEAR(axis_to_plot(plot_to_axis(p)), p, 1e-12);
    EXPECT_DOUBLE_EQ(plot_to_axis(0.0), 90.0);
    EXPECT_DOUBLE_EQ(plot_to_axis(90.0), 0.0);
    EXPECT_DOUBLE_EQ(plot_to_axis(-90.0), 180.0);
    // Back half folds onto the front half about the array axis.
    EXPECT_DOUBLE_EQ(plot_to_axis(180.0), 90.0);
    EXPECT_DOUBLE_EQ(plot_to_axis(135.0), plot_to_axis(45.0));
    EXPECT_THROW(plot_to_axis(181.0), std::invalid_argument);
}

TEST(Angles, WrapDegrees) {
    EXPECT_DOUBLE_EQ(wrap_degrees(190.0), -170.0);
    EXPECT_DOUBLE_EQ(wrap_degrees(-180.0), 180.0);
    EXPECT_DOUBLE_EQ(wrap_degrees(720.0), 0.0);
}

TEST(Decibel, PowerAndMagnitudePolicies) {
    EXPECT_DOUBLE_EQ(power_to_db(100.0), 20.0);
    EXPECT_DOUBLE_EQ(magnitude_to_db(10.0), 20.0);
    EXPECT_NEAR(db_to_power(power_to_db(3.7)), 3.7, 1e-12);
    EXPECT_NEAR(db_to_magnitude(magnitude_to_db(0.37)), 0.37, 1e-12);
    EXPECT_TRUE(std::isinf(magnitude_to_db(0.0)));
}

namespace {

complex rnd(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return {u(g), u(g)};
}

Abcd random_abcd(std::mt19937_64& g) { return {rnd(g), rnd(g), rnd(g), rnd(g)}; }

// S-parameters of a two-port directly from port voltages and currents:
// terminate port 2 in z0, drive port 1, read off reflected and transmitted waves.
SParameters brute_force_s(const Abcd& m, double z0) {
    // V1 = A V2 + B I2, I1 = C V2 + D I2, with V2 = z0 I2 (load).
    const complex v2 = 1.0;
    const complex i2 = v2 / z0;
    const complex v1 = m.a * v2 + m.b * i2;
    const complex i1 = m.c * v2 + m.d * i2;
    const double k = 1.0 / (2.0 * std::sqrt(z0));
    const complex a1 = k * (v1 + z0 * i1), b1 = k * (v1 - z0 * i1);
    const complex b2 = k * (v2 + z0 * i2);
    SParameters s{};
    s.s11 = b1 / a1;
    s.s21 = b2 / a1;
    return s;
}

}  // namespace

TEST(TwoPort, SeriesImpedanceHasTwoThirdsTransmission) {
    // 50 ohm series element between 50 ohm ports.
    const auto s = abcd_to_s(Abcd::series_impedance(50.0), 50.0);
    EXPECT_NEAR(std::abs(s.s21), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(std::abs(s.s11), 1.0 / 3.0, 1e-12);
    const auto ref = brute_force_s(Abcd::series_impedance(50.0), 50.0);
    EXPECT_NEAR(std::abs(s.s21 - ref.s21), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.s11 - ref.s11), 0.0, 1e-12);
}

TEST(TwoPort, MatchesBruteForceOnRandomNetworks) {
    std::mt19937_64 g(7);
    for (int i = 0; i < 50; ++i) {
        const Abcd m = random_abcd(g);
        const auto s = abcd_to_s(m, 50.0);
        const auto ref = brute_force_s(m, 50.0);
        EXPECT_NEAR(std::abs(s.s11 - ref.s11), 0.0, 1e-9 * (1.0 + std::abs(ref.s11)));
        EXPECT_NEAR(std::abs(s.s21 - ref.s21), 0.0, 1e-9 * (1.0 + std::abs(ref.s21)));
    }
}

TEST(TwoPort, RoundTripThroughS) {
    std::mt19937_64 g(3);
    for (int i = 0; i < 50; ++i) {
        const Abcd m = random_abcd(g);
        const Abcd back = s_to_abcd(abcd_to_s(m, 50.0), 50.0);
        EXPECT_NEAR(std::abs(back.a - m.a) + std::abs(back.b - m.b) + std::abs(back.c - m.c) + std::abs(back.d - m.d),
                    0.0, 1e-8);
    }
}

TEST(TwoPort, CascadeIsAssociative) {
    std::mt19937_64 g(11);
    for (int i = 0; i < 30; ++i) {
        const Abcd a = random_abcd(g), b = random_abcd(g), c = random_abcd(g);
        const Abcd l = (a * b) * c, r = a * (b * c);
        EXPECT_NEAR(std::abs(l.a - r.a) + std::abs(l.b - r.b) + std::abs(l.c - r.c) + std::abs(l.d - r.d), 0.0, 1e-10);
    }
}

TEST(TwoPort, IdentityIsTransparent) {
    const auto s = abcd_to_s(Abcd::identity());
    EXPECT_NEAR(std::abs(s.s11), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.s21 - 1.0), 0.0, 1e-15);
}

TEST(TwoPort, DegenerateNetworkThrows) {
    // A z0 + B + C z0^2 + D z0 = 0.
    const Abcd m{1.0, -50.0, 0.0, 0.0};
    EXPECT_THROW(abcd_to_s(m, 50.0), DegenerateNetworkError);
}

TEST(TwoPort, LosslessLineIsUnitaryAndReciprocal) {
    const Abcd line = Abcd::transmission_line(75.0, complex(0.0, 3.0), 0.4);
    EXPECT_TRUE(line.is_reciprocal());
    const auto s = abcd_to_s(line, 50.0);
    EXPECT_NEAR(std::norm(s.s11) + std::norm(s.s21), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(s.s12 - s.s21), 0.0, 1e-12);
}

TEST(TwoPort, MatchedAttenuator) {
    const auto s = abcd_to_s(Abcd::matched_attenuator(6.0, 50.0), 50.0);
    EXPECT_NEAR(magnitude_to_db(std::abs(s.s21)), -6.0, 1e-12);
    EXPECT_NEAR(std::abs(s.s11), 0.0, 1e-12);
}

TEST(TwoPort, GridCascadeRequiresMatchingGrids) {
    ComplexTwoPort a({1e8, 2e8}, {Abcd::identity(), Abcd::identity()});
    ComplexTwoPort b({1e8, 3e8}, {Abcd::identity(), Abcd::identity()});
    EXPECT_THROW(a.cascade(b), std::invalid_argument);
    EXPECT_EQ(a.cascade(a).size(), 2u);
}

TEST(Reflection, ShortOpenMatched) {
    EXPECT_NEAR(std::abs(reflection_coefficient(0.0) + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(reflection_coefficient(50.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(reflection_coefficient(1e15) - 1.0), 0.0, 1e-12);
}

TEST(Pattern, IsotropicHasZeroDbi) {
    const auto p = RadiationPattern::isotropic(default_pattern_grid());
    EXPECT_EQ(p.size(), 361u);
    for (std::size_t i = 0; i < p.size(); i += 37) EXPECT_NEAR(p.gain_dbi(i), 0.0, 1e-12);
    EXPECT_NEAR(p.with_input_power(2.0).gain_dbi(0), -power_to_db(2.0), 1e-12);
}

TEST(Pattern, RejectsBadGrids) {
    EXPECT_THROW(RadiationPattern({0.0, 1.0}, {1.0}, 1.0), std::invalid_argument);
    EXPECT_THROW(RadiationPattern({1.0, 0.0}, {1.0, 1.0}, 1.0), std::invalid_argument);
    EXPECT_THROW(RadiationPattern({0.0, 1.0}, {1.0, 1.0}, 0.0), std::invalid_argument);
}

TEST(Pattern, AngleGrid) {
    const auto g = angle_grid(-90.0, 90.0, 0.5);
    ASSERT_EQ(g.size(), 361u);
    EXPECT_DOUBLE_EQ(g.front(), -90.0);
    EXPECT_DOUBLE_EQ(g.back(), 90.0);
    EXPECT_THROW(angle_grid(0.0, 1.0, 0.0), std::invalid_argument);
}
