// SPDX-License-Identifier: Apache-2.0
//
// Swarm scalability planning: how many elements each UAV carries at a given
// frequency, whether a formation respects the aerodynamic spacing rule, and
// how many UAVs a target gain needs.
#pragma once

#include <string>
#include <vector>

#include "swarmarray/em_core.hpp"
#include "swarmarray/mom.hpp"

namespace swarmarray {

struct UavPlatform {
    double body_length = 0.175;         // m
    double propeller_diameter = 0.127;  // m
    int max_elements = 4;               // elements the support structure can carry

    /// 175 mm body, 127 mm propellers.
    static UavPlatform reference();
    /// 87.5 mm body with propellers scaled by the same factor (63.5 mm).
    static UavPlatform compact();

    void validate() const;
};

/// Minimum UAV centre spacing: twice the propeller diameter.
double min_uav_spacing(const UavPlatform& platform);

struct SwarmConfig {
    UavPlatform platform;
    Frequency frequency{300e6};
    int elements_per_uav = 1;
    double element_spacing = 0.0;  // d_ele, m
    double uav_spacing = 0.0;      // UAV centre spacing, m
    int n_uavs = 0;
    WireAntenna element;

    int total_elements() const { return n_uavs * elements_per_uav; }
    /// Elements along +x, centred on the origin, in feed order.
    std::vector<PlacedElement> placed_elements() const;
};

struct ElementsPerUav {
    int count = 0;
    double element_spacing = 0.0;
    double uav_spacing = 0.0;
    std::string binding_constraint;
};

/// Fewest elements per UAV (at lambda/2 spacing) whose span reaches the
/// aerodynamic minimum UAV spacing. Throws InfeasibleError naming the platform
/// shrink factor when even max_elements does not suffice.
ElementsPerUav elements_per_uav(Frequency f, const UavPlatform& platform);

/// Default configuration for n UAVs at frequency f on the given platform.
SwarmConfig make_swarm_config(Frequency f, const UavPlatform& platform, int n_uavs);

struct Violation {
    std::string constraint;
    double actual = 0.0;
    double bound = 0.0;
};

/// Empty iff the configuration satisfies every formation invariant.
std::vector<Violation> validate_formation(const SwarmConfig& config);

/// Coherent-scaling anchors: gain of a two-element array broadside and steered.
struct GainAnchors {
    double broadside_two = 8.7;
    double steered_two = 6.01;
    double steered_threshold_deg = 22.5;
};

/// G(N) = G(2) + 10 log10(N / 2) using the steered anchor when |steer| exceeds the threshold.
double predicted_gain_dbi(int total_elements, double theta_steer_deg, const GainAnchors& anchors = {});

inline constexpr int max_swarm_uavs = 32;

/// Smallest swarm whose predicted gain reaches the target.
/// Throws InfeasibleError when more than max_uavs UAVs would be required.
SwarmConfig plan_swarm(double target_gain_dbi, double theta_steer_deg, Frequency f, const UavPlatform& platform,
                       int max_uavs = max_swarm_uavs, const GainAnchors& anchors = {});

/// "key: value" report, one item per line.
std::string plan_report(const SwarmConfig& config, double theta_steer_deg);
std::string plan_csv_header();
std::string plan_csv_row(const SwarmConfig& config, double theta_steer_deg);

}  // namespace swarmarray
