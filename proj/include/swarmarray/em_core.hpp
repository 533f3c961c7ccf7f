// SPDX-License-Identifier: Apache-2.0
//
// Shared electromagnetic vocabulary: physical constants, frequency, angle
// conventions, decibel policy, two-port algebra and H-plane radiation patterns.
#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace swarmarray {

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light = 299'792'458.0;  // m/s
inline constexpr double mu0 = 1.25663706212e-6;          // H/m
inline constexpr double eps0 = 1.0 / (mu0 * speed_of_light * speed_of_light);
inline constexpr double eta0 = mu0 * speed_of_light;  // ~376.73 ohm

inline constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

class Frequency {
public:
    explicit Frequency(double hertz);
    static Frequency from_mhz(double mhz) { return Frequency(mhz * 1e6); }

    double hertz() const noexcept { return hertz_; }
    double wavelength() const noexcept { return speed_of_light / hertz_; }
    double wavenumber() const noexcept { return 2.0 * pi / wavelength(); }
    double angular() const noexcept { return 2.0 * pi * hertz_; }

    friend bool operator==(const Frequency&, const Frequency&) = default;

private:
    double hertz_;
};

// Angles shown to users are "plot" angles measured from broadside (the array
// normal, 0 deg = main beam of an unsteered array). The steering law and the
// array factor are written in terms of the "axis" angle measured from the
// array axis. plot = 90 - axis.

/// Converts a plot angle in [-180, 180] to an axis angle in [0, 180]. Outside
/// [-90, 90] the result is folded using the rotational symmetry of a linear
/// array about its axis. The same formula maps axis angles in [0, 180] back to
/// plot angles in [-90, 90], so the conversion is its own inverse there.
double plot_to_axis(double plot_deg);
double axis_to_plot(double axis_deg);

/// Wraps any angle to (-180, 180].
double wrap_degrees(double deg);

// Decibel policy: powers use 10*log10, field and S-parameter magnitudes 20*log10.
double power_to_db(double power_ratio);
double db_to_power(double db);
double magnitude_to_db(double magnitude);
double db_to_magnitude(double db);

struct SParameters {
    complex s11, s12, s21, s22;
};

/// ABCD (chain) matrix of a two-port at one frequency.
struct Abcd {
    complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static Abcd identity() { return {}; }
    static Abcd series_impedance(complex z) { return {1.0, z, 0.0, 1.0}; }
    static Abcd shunt_admittance(complex y) { return {1.0, 0.0, y, 1.0}; }
    /// Uniform line with characteristic impedance zc and propagation constant gamma (1/m).
    static Abcd transmission_line(complex zc, complex gamma, double length);
    /// Matched attenuator with the given loss in dB at reference impedance z0.
    static Abcd matched_attenuator(double loss_db, double z0);

    complex determinant() const { return a * d - b * c; }
    bool is_reciprocal(double rel_tol = 1e-9) const;

    friend Abcd operator*(const Abcd& lhs, const Abcd& rhs);
};

/// Converts a single ABCD matrix to S-parameters at real reference impedance z0.
/// Throws DegenerateNetworkError when A*Z0 + B + C*Z0^2 + D*Z0 vanishes.
SParameters abcd_to_s(const Abcd& abcd, double z0 = 50.0);
Abcd s_to_abcd(const SParameters& s, double z0 = 50.0);

/// A two-port sampled on a frequency grid.
class ComplexTwoPort {
public:
    ComplexTwoPort(std::vector<double> freqs_hz, std::vector<Abcd> abcd, double z0 = 50.0);

    std::span<const double> frequencies() const { return freqs_; }
    std::span<const Abcd> abcd() const { return abcd_; }
    double reference_impedance() const { return z0_; }
    std::size_t size() const { return freqs_.size(); }

    /// Cascade (this followed by other); grids must match.
    ComplexTwoPort cascade(const ComplexTwoPort& other) const;

private:
    std::vector<double> freqs_;
    std::vector<Abcd> abcd_;
    double z0_;
};

std::vector<SParameters> abcd_to_s(const ComplexTwoPort& network);

/// Reflection coefficient of a load against a real reference impedance.
complex reflection_coefficient(complex z_load, double z0 = 50.0);

/// Uniform angle grid from start to stop inclusive (degrees).
std::vector<double> angle_grid(double start_deg, double stop_deg, double step_deg);
std::vector<double> default_pattern_grid();  // -180..180 in 1 deg steps

/// H-plane cut of a far-field pattern. The field is the complex co-polar
/// component at a 1 m reference distance (the exp(-jkr)/r factor removed);
/// gains are referred to the total input power.
class RadiationPattern {
public:
    RadiationPattern(std::vector<double> angles_deg, std::vector<complex> field, double input_power);

    /// Pattern with unit gain everywhere.
    static RadiationPattern isotropic(std::vector<double> angles_deg, double input_power = 1.0);

    std::span<const double> angles() const { return angles_; }
    std::span<const complex> field() const { return field_; }
    double input_power() const { return power_; }
    std::size_t size() const { return angles_.size(); }
    double step() const;

    double gain(std::size_t i) const;
    double gain_dbi(std::size_t i) const;
    std::vector<double> gain_dbi() const;
    double phase_deg(std::size_t i) const;

    /// Index of the global peak (first one on ties).
    std::size_t peak_index() const;
    double peak_gain_dbi() const;
    double peak_angle() const;

    /// Gain interpolated linearly in dB at an arbitrary angle inside the grid.
    double gain_dbi_at(double angle_deg) const;

    /// Same pattern rescaled to another input power.
    RadiationPattern with_input_power(double input_power) const;

private:
    std::vector<double> angles_;
    std::vector<complex> field_;
    double power_;
};

}  // namespace swarmarray
