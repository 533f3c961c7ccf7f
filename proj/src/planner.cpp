// SPDX-License-Identifier: Apache-2.0
#include "swarmarray/planner.hpp"

#include <cmath>
#include <sstream>

#include "swarmarray/errors.hpp"
#include "swarmarray/io.hpp"

namespace swarmarray {

UavPlatform UavPlatform::reference() { return {0.175, 0.127, 4}; }
UavPlatform UavPlatform::compact() { return {0.0875, 0.0635, 4}; }

void UavPlatform::validate() const {
    if (!(body_length > 0.0)) throw std::invalid_argument("UAV body length must be positive");
    if (!(propeller_diameter > 0.0)) throw std::invalid_argument("propeller diameter must be positive");
    if (max_elements < 1) throw std::invalid_argument("a UAV must be able to carry at least one element");
}

double min_uav_spacing(const UavPlatform& platform) { return 2.0 * platform.propeller_diameter; }

std::vector<PlacedElement> SwarmConfig::placed_elements() const {
    const int total = total_elements();
    std::vector<PlacedElement> out;
    out.reserve(static_cast<std::size_t>(std::max(total, 0)));
    for (int i = 0; i < total; ++i) {
        const double x = (i - 0.5 * (total - 1)) * element_spacing;
        out.push_back({element, Vec3(x, 0.0, 0.0)});
    }
    return out;
}

ElementsPerUav elements_per_uav(Frequency f, const UavPlatform& platform) {
    platform.validate();
    const double half_wave = 0.5 * f.wavelength();
    const double required = min_uav_spacing(platform);
    for (int m = 1; m <= platform.max_elements; ++m) {
        if (m * half_wave >= required) {
            ElementsPerUav out;
            out.count = m;
            out.element_spacing = half_wave;
            out.uav_spacing = m * half_wave;
            std::ostringstream why;
            if (m == 1) {
                why << "aerodynamic spacing satisfied by a single element (" << fmt_fixed(half_wave * 1e3, 1)
                    << " mm >= " << fmt_fixed(required * 1e3, 1) << " mm)";
            } else {
                why << "aerodynamic spacing: " << m - 1 << " element(s) span " << fmt_fixed((m - 1) * half_wave * 1e3, 1)
                    << " mm < " << fmt_fixed(required * 1e3, 1) << " mm";
            }
            out.binding_constraint = why.str();
            return out;
        }
    }
    const double shrink = platform.max_elements * half_wave / required;
    std::ostringstream msg;
    msg << "no feasible element count: " << platform.max_elements << " elements at lambda/2 span "
        << fmt_fixed(platform.max_elements * half_wave * 1e3, 1) << " mm < " << fmt_fixed(required * 1e3, 1)
        << " mm; shrink the platform (propeller diameter) by a factor of " << fmt_fixed(shrink, 3);
    throw InfeasibleError(msg.str());
}

SwarmConfig make_swarm_config(Frequency f, const UavPlatform& platform, int n_uavs) {
    const ElementsPerUav e = elements_per_uav(f, platform);
    SwarmConfig c;
    c.platform = platform;
    c.frequency = f;
    c.elements_per_uav = e.count;
    c.element_spacing = e.element_spacing;
    c.uav_spacing = e.uav_spacing;
    c.n_uavs = n_uavs;
    // 1 mm rod radius at 300 MHz, scaled with wavelength.
    c.element = WireAntenna::reflector_element(f, 1e-3 * 300e6 / f.hertz());
    return c;
}

std::vector<Violation> validate_formation(const SwarmConfig& c) {
    std::vector<Violation> out;
    if (c.n_uavs < 1) out.push_back({"swarm must contain at least one UAV", double(c.n_uavs), 1.0});
    if (c.elements_per_uav < 1) out.push_back({"each UAV carries at least one element", double(c.elements_per_uav), 1.0});
    if (c.elements_per_uav > c.platform.max_elements) {
        out.push_back({"elements per UAV within support capacity", double(c.elements_per_uav),
                       double(c.platform.max_elements)});
    }
    if (!(c.platform.propeller_diameter > 0.0)) out.push_back({"propeller diameter positive", c.platform.propeller_diameter, 0.0});
    if (!(c.platform.body_length > 0.0)) out.push_back({"body length positive", c.platform.body_length, 0.0});
    if (!(c.element_spacing > 0.0)) out.push_back({"element spacing positive", c.element_spacing, 0.0});
    const double min_spacing = min_uav_spacing(c.platform);
    if (c.uav_spacing < min_spacing) {
        out.push_back({"UAV centre spacing >= 2 x propeller diameter", c.uav_spacing, min_spacing});
    }
    const double expected = c.elements_per_uav * c.element_spacing;
    if (std::abs(c.uav_spacing - expected) > 1e-9 * std::max(1.0, expected)) {
        out.push_back({"UAV centre spacing = elements per UAV x element spacing", c.uav_spacing, expected});
    }
    return out;
}

double predicted_gain_dbi(int total_elements, double theta_steer_deg, const GainAnchors& anchors) {
    if (total_elements < 1) throw std::invalid_argument("element count must be positive");
    const double g2 =
        std::abs(theta_steer_deg) > anchors.steered_threshold_deg ? anchors.steered_two : anchors.broadside_two;
    return g2 + 10.0 * std::log10(total_elements / 2.0);
}

SwarmConfig plan_swarm(double target_gain_dbi, double theta_steer_deg, Frequency f, const UavPlatform& platform,
                       int max_uavs, const GainAnchors& anchors) {
    SwarmConfig c = make_swarm_config(f, platform, 1);
    for (int n = 1; n <= max_uavs; ++n) {
        if (predicted_gain_dbi(n * c.elements_per_uav, theta_steer_deg, anchors) >= target_gain_dbi) {
            c.n_uavs = n;
            if (const auto v = validate_formation(c); !v.empty()) {
                throw InfeasibleError("planned formation violates: " + v.front().constraint);
            }
            return c;
        }
    }
    std::ostringstream msg;
    msg << "target gain " << fmt_fixed(target_gain_dbi, 2) << " dBi is unachievable with at most " << max_uavs
        << " UAVs (predicted maximum " << fmt_fixed(predicted_gain_dbi(max_uavs * c.elements_per_uav, theta_steer_deg, anchors), 2)
        << " dBi)";
    throw InfeasibleError(msg.str());
}

std::string plan_report(const SwarmConfig& c, double theta_steer_deg) {
    std::ostringstream out;
    out << "frequency_hz: " << fmt_fixed(c.frequency.hertz(), 0) << '\n'
        << "theta_steer_deg: " << fmt_fixed(theta_steer_deg, 2) << '\n'
        << "uav_body_length_m: " << fmt_fixed(c.platform.body_length, 4) << '\n'
        << "propeller_diameter_m: " << fmt_fixed(c.platform.propeller_diameter, 4) << '\n'
        << "n_uavs: " << c.n_uavs << '\n'
        << "elements_per_uav: " << c.elements_per_uav << '\n'
        << "total_elements: " << c.total_elements() << '\n'
        << "element_spacing_m: " << fmt_fixed(c.element_spacing, 4) << '\n'
        << "uav_spacing_m: " << fmt_fixed(c.uav_spacing, 4) << '\n'
        << "min_uav_spacing_m: " << fmt_fixed(min_uav_spacing(c.platform), 4) << '\n'
        << "predicted_gain_dbi: " << fmt_fixed(predicted_gain_dbi(std::max(c.total_elements(), 1), theta_steer_deg), 2)
        << '\n';
    const auto v = validate_formation(c);
    if (v.empty()) {
        out << "violations: none\n";
    } else {
        for (const auto& x : v) {
            out << "violation: " << x.constraint << " (actual " << fmt_fixed(x.actual, 4) << ", bound "
                << fmt_fixed(x.bound, 4) << ")\n";
        }
    }
    return out.str();
}

std::string plan_csv_header() {
    return "freq_hz,theta_steer_deg,n_uavs,elements_per_uav,element_spacing_m,uav_spacing_m,predicted_gain_dbi,"
           "feasible";
}

std::string plan_csv_row(const SwarmConfig& c, double theta_steer_deg) {
    std::ostringstream out;
    out << fmt_fixed(c.frequency.hertz(), 0) << ',' << fmt_fixed(theta_steer_deg, 2) << ',' << c.n_uavs << ','
        << c.elements_per_uav << ',' << fmt_fixed(c.element_spacing, 4) << ',' << fmt_fixed(c.uav_spacing, 4) << ','
        << fmt_fixed(predicted_gain_dbi(std::max(c.total_elements(), 1), theta_steer_deg), 2) << ','
        << (validate_formation(c).empty() ? "true" : "false");
    return out.str();
}

}  // namespace swarmarray
