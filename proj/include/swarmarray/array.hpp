// SPDX-License-Identifier: Apache-2.0
//
// Uniform linear arrays: steering phases, array factor, pattern
// multiplication, pattern metrics and the gain-vs-count study.
//
// Sign convention: element n is driven with a phase lag Phi_n, i.e. its
// complex weight is exp(-j Phi_n). With Phi_n = (n-1) k d cos(psi_steer) the
// array factor peaks at the commanded direction.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "swarmarray/em_core.hpp"
#include "swarmarray/mom.hpp"
#include "swarmarray/planner.hpp"

namespace swarmarray {

struct LinearArrayLayout {
    int count = 1;
    double spacing = 0.0;  // d_ele, m

    static LinearArrayLayout uniform(int count, double spacing);
    /// Element positions along the array axis, first element at 0.
    std::vector<double> positions() const;
    void validate() const;
};

struct SteeringCommand {
    double theta_steer_deg = 0.0;    // plot convention
    std::vector<double> phases_deg;  // Phi_n, Phi_1 = 0
};

/// Phi_n = (n-1) k d cos(psi), psi = plot_to_axis(theta). Requires |theta| <= 90.
SteeringCommand steering_phases(const LinearArrayLayout& layout, Frequency f, double theta_steer_plot_deg);

struct ArrayFactor {
    std::vector<double> angles_deg;
    std::vector<complex> samples;
    double weight_power = 0.0;  // sum |w_n|^2
};

/// AF(theta) = sum_n exp(j[(n-1) k d cos(psi) - Phi_n]) over the plot-angle grid.
ArrayFactor array_factor(const SteeringCommand& command, const LinearArrayLayout& layout, Frequency f,
                         std::span<const double> angles_deg);

/// Directivity of the array of isotropic point sources (closed-form sphere
/// integral of |AF|^2), dB.
double array_factor_directivity_db(const SteeringCommand& command, const LinearArrayLayout& layout, Frequency f);

/// Pointwise product E_el * AF; the input power is scaled by sum |w|^2.
/// Throws std::invalid_argument when the grids differ.
RadiationPattern total_pattern(const RadiationPattern& element, const ArrayFactor& af);

struct PatternMetrics {
    double peak_gain_dbi = 0.0;
    double peak_angle_deg = 0.0;  // refined by a parabola through the three top samples
    double hpbw_deg = 0.0;
    double sll_db = 0.0;  // highest lobe outside the first nulls, relative to peak (-inf if none)
};

/// Throws AmbiguousPeakError when samples within 0.01 dB of the maximum are
/// not a single contiguous run or cover the whole grid.
PatternMetrics pattern_metrics(const RadiationPattern& pattern);

/// "angle_deg,gain_dbi,phase_deg" with a header row.
std::string pattern_csv(const RadiationPattern& pattern);

/// 0.25 deg grid over the full circle.
std::vector<double> fine_pattern_grid();

enum class ArrayMethod { full_mom, multiplication };

struct GainRow {
    int n_uavs = 0;
    double theta_steer_deg = 0.0;
    PatternMetrics metrics;
};

/// Peak gain per UAV count, counts within [2, 16]. Formation violations raise InfeasibleError.
std::vector<GainRow> gain_vs_count(const SwarmConfig& base, std::span<const int> counts, double theta_steer_deg,
                                   ArrayMethod method = ArrayMethod::full_mom);

/// Steered pattern of a swarm configuration.
RadiationPattern swarm_pattern(const SwarmConfig& config, double theta_steer_deg, std::span<const double> angles_deg,
                               ArrayMethod method = ArrayMethod::full_mom);

std::string gain_table_csv(std::span<const GainRow> rows);

}  // namespace swarmarray
