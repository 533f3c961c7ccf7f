// SPDX-License-Identifier: Apache-2.0
#include "swarmarray/em_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "swarmarray/errors.hpp"

namespace swarmarray {

Frequency::Frequency(double hertz) : hertz_(hertz) {
    if (!(hertz > 0.0) || !std::isfinite(hertz)) {
        throw std::invalid_argument("frequency must be positive and finite, got " + std::to_string(hertz));
    }
}

double wrap_degrees(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w <= -180.0) w += 360.0;
    if (w > 180.0) w -= 360.0;
    return w;
}

double plot_to_axis(double plot_deg) {
    if (!(plot_deg >= -180.0 && plot_deg <= 180.0)) {
        throw std::invalid_argument("plot angle must lie in [-180, 180] deg");
    }
    return std::abs(wrap_degrees(90.0 - plot_deg));
}

double axis_to_plot(double axis_deg) {
    if (!(axis_deg >= 0.0 && axis_deg <= 180.0)) {
        throw std::invalid_argument("axis angle must lie in [0, 180] deg");
    }
    return 90.0 - axis_deg;
}

double power_to_db(double power_ratio) {
    if (power_ratio <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(power_ratio);
}
double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
double magnitude_to_db(double magnitude) {
    if (magnitude <= 0.0) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(magnitude);
}
double db_to_magnitude(double db) { return std::pow(10.0, db / 20.0); }

// ---------------------------------------------------------------------------
// Two-port algebra

Abcd Abcd::transmission_line(complex zc, complex gamma, double length) {
    const complex gl = gamma * length;
    const complex ch = std::cosh(gl);
    const complex sh = std::sinh(gl);
    return {ch, zc * sh, sh / zc, ch};
}

Abcd Abcd::matched_attenuator(double loss_db, double z0) {
    // Symmetric matched pad: A = D = cosh(a), B = z0 sinh(a), C = sinh(a)/z0.
    const double a = loss_db * std::log(10.0) / 20.0;
    return {std::cosh(a), z0 * std::sinh(a), std::sinh(a) / z0, std::cosh(a)};
}

bool Abcd::is_reciprocal(double rel_tol) const {
    const double scale = std::max({std::abs(a * d), std::abs(b * c), 1.0});
    return std::abs(determinant() - 1.0) <= rel_tol * scale;
}

Abcd operator*(const Abcd& l, const Abcd& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

SParameters abcd_to_s(const Abcd& m, double z0) {
    if (!(z0 > 0.0)) throw std::invalid_argument("reference impedance must be positive");
    const complex den = m.a + m.b / z0 + m.c * z0 + m.d;
    const double scale = std::abs(m.a) + std::abs(m.b) / z0 + std::abs(m.c) * z0 + std::abs(m.d);
    if (!std::isfinite(scale)) throw std::invalid_argument("ABCD entries must be finite");
    if (std::abs(den) <= 1e-14 * scale) {
        throw DegenerateNetworkError("degenerate two-port: A*Z0 + B + C*Z0^2 + D*Z0 vanishes");
    }
    SParameters s;
    s.s11 = (m.a + m.b / z0 - m.c * z0 - m.d) / den;
    s.s12 = 2.0 * m.determinant() / den;
    s.s21 = 2.0 / den;
    s.s22 = (-m.a + m.b / z0 - m.c * z0 + m.d) / den;
    return s;
}

Abcd s_to_abcd(const SParameters& s, double z0) {
    if (std::abs(s.s21) == 0.0) throw DegenerateNetworkError("S21 = 0 has no ABCD representation");
    const complex p = s.s12 * s.s21;
    const complex den = 2.0 * s.s21;
    return {((1.0 + s.s11) * (1.0 - s.s22) + p) / den, z0 * ((1.0 + s.s11) * (1.0 + s.s22) - p) / den,
            ((1.0 - s.s11) * (1.0 - s.s22) - p) / (den * z0), ((1.0 - s.s11) * (1.0 + s.s22) + p) / den};
}

ComplexTwoPort::ComplexTwoPort(std::vector<double> freqs_hz, std::vector<Abcd> abcd, double z0)
    : freqs_(std::move(freqs_hz)), abcd_(std::move(abcd)), z0_(z0) {
    if (freqs_.size() != abcd_.size()) throw std::invalid_argument("one ABCD matrix per frequency sample");
    if (!(z0_ > 0.0)) throw std::invalid_argument("reference impedance must be positive");
}

ComplexTwoPort ComplexTwoPort::cascade(const ComplexTwoPort& other) const {
    if (other.freqs_ != freqs_) throw std::invalid_argument("cascade requires identical frequency grids");
    std::vector<Abcd> out(abcd_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = abcd_[i] * other.abcd_[i];
    return {freqs_, std::move(out), z0_};
}

std::vector<SParameters> abcd_to_s(const ComplexTwoPort& network) {
    std::vector<SParameters> out;
    out.reserve(network.size());
    for (const auto& m : network.abcd()) out.push_back(abcd_to_s(m, network.reference_impedance()));
    return out;
}

complex reflection_coefficient(complex z_load, double z0) { return (z_load - z0) / (z_load + z0); }

// ---------------------------------------------------------------------------
// Angle grids and patterns

std::vector<double> angle_grid(double start_deg, double stop_deg, double step_deg) {
    if (!(step_deg > 0.0) || stop_deg < start_deg) throw std::invalid_argument("invalid angle grid");
    const auto n = static_cast<std::size_t>(std::llround((stop_deg - start_deg) / step_deg)) + 1;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = start_deg + static_cast<double>(i) * step_deg;
    return grid;
}

std::vector<double> default_pattern_grid() { return angle_grid(-180.0, 180.0, 1.0); }

RadiationPattern::RadiationPattern(std::vector<double> angles_deg, std::vector<complex> field, double input_power)
    : angles_(std::move(angles_deg)), field_(std::move(field)), power_(input_power) {
    if (angles_.empty()) throw std::invalid_argument("radiation pattern needs a non-empty angle grid");
    if (angles_.size() != field_.size()) throw std::invalid_argument("one field sample per angle");
    if (!(power_ > 0.0)) throw std::invalid_argument("input power must be positive");
    if (angles_.size() > 1) {
        const double h = angles_[1] - angles_[0];
        for (std::size_t i = 1; i < angles_.size(); ++i) {
            if (std::abs((angles_[i] - angles_[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)) || h <= 0.0) {
                throw std::invalid_argument("pattern angle grid must be uniform and increasing");
            }
        }
    }
}

RadiationPattern RadiationPattern::isotropic(std::vector<double> angles_deg, double input_power) {
    // gain = 2*pi*|E|^2 / (eta0 * P) == 1
    const double e = std::sqrt(eta0 * input_power / (2.0 * pi));
    std::vector<complex> field(angles_deg.size(), complex(e, 0.0));
    return {std::move(angles_deg), std::move(field), input_power};
}

double RadiationPattern::step() const { return angles_.size() > 1 ? angles_[1] - angles_[0] : 0.0; }

double RadiationPattern::gain(std::size_t i) const {
    return 2.0 * pi * std::norm(field_.at(i)) / (eta0 * power_);
}

double RadiationPattern::gain_dbi(std::size_t i) const { return power_to_db(gain(i)); }

std::vector<double> RadiationPattern::gain_dbi() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = gain_dbi(i);
    return out;
}

double RadiationPattern::phase_deg(std::size_t i) const { return rad_to_deg(std::arg(field_.at(i))); }

std::size_t RadiationPattern::peak_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < field_.size(); ++i) {
        if (std::norm(field_[i]) > std::norm(field_[best])) best = i;
    }
    return best;
}

double RadiationPattern::peak_gain_dbi() const { return gain_dbi(peak_index()); }
double RadiationPattern::peak_angle() const { return angles_[peak_index()]; }

double RadiationPattern::gain_dbi_at(double angle_deg) const {
    if (angles_.size() == 1 || angle_deg <= angles_.front()) return gain_dbi(0);
    if (angle_deg >= angles_.back()) return gain_dbi(size() - 1);
    const double pos = (angle_deg - angles_.front()) / step();
    const auto i = std::min(static_cast<std::size_t>(pos), size() - 2);
    const double t = pos - static_cast<double>(i);
    return (1.0 - t) * gain_dbi(i) + t * gain_dbi(i + 1);
}

RadiationPattern RadiationPattern::with_input_power(double input_power) const {
    return {angles_, field_, input_power};
}

}  // namespace swarmarray
