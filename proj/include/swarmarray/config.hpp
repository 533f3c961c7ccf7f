// SPDX-License-Identifier: Apache-2.0
//
// JSON run configuration shared by the CLI subcommands.
//
//   {
//     "platform":  {"body_length_m", "propeller_diameter_m", "max_elements"},
//     "array":     {"frequency_hz", "n_uavs", "elements_per_uav", "element_spacing_m",
//                   "uav_spacing_m", "steer_deg", "driven_length_m",
//                   "reflector_length_m", "reflector_separation_m", "rod_radius_m"},
//     "connector": {"stage", "gap_m", "eps_r", "loss_tangent", "thickness_m"},
//     "jitter":    {"sigma_m", "phase_deg", "seed"}
//   }
//
// Every key is optional. Missing array geometry follows the planner defaults
// for the given frequency and platform. Unknown keys are rejected.
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "swarmarray/connector.hpp"
#include "swarmarray/experiments.hpp"
#include "swarmarray/planner.hpp"

namespace swarmarray {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    SwarmConfig swarm;
    double steer_deg = 0.0;
    ConnectorDesign connector;
    FlightJitterModel jitter{calibrated_jitter_sigma, 0.0, 1};
};

/// Reference platform, two UAVs at 300 MHz, final connector design.
RunConfig default_run_config();

/// Throws ConfigError naming the offending key path.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace swarmarray
