// SPDX-License-Identifier: Apache-2.0
//
// End-to-end studies: chamber patterns of the two-UAV prototype, the
// three-receiver flight study, and the one-command reproduction harness.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmarray/array.hpp"
#include "swarmarray/connector.hpp"
#include "swarmarray/planner.hpp"

namespace swarmarray {

/// Two UAVs, one element each: 510 mm driven, 530 mm reflector, 1 mm radius
/// rods 0.29 lambda apart, 500 mm element spacing, 300 MHz.
SwarmConfig chamber_config();

/// Full-MoM steered pattern. Requires |theta| <= 60 and a valid formation.
RadiationPattern chamber_pattern(const SwarmConfig& config, double theta_steer_deg,
                                 std::span<const double> angles_deg);
RadiationPattern chamber_pattern(const SwarmConfig& config, double theta_steer_deg);

struct ReceiverProbe {
    double angle_deg = 0.0;  // plot convention
    double distance = 10.0;  // m
};

/// Rx1..Rx3 at -45, 0, +45 deg, 10 m from the array centre.
std::vector<ReceiverProbe> standard_probes();

struct FlightJitterModel {
    double sigma = 0.0;      // m, per axis, per element, per time step
    double phase_deg = 0.0;  // per element, per time step
    std::uint64_t seed = 1;
};

/// Positional jitter that keeps the worst probe's peak-to-peak fluctuation
/// under 1.5 dB across the three steering angles -45, 0, +45 (default seed and
/// duration). calibrate_jitter_sigma gives 3.40 mm; frozen with margin.
inline constexpr double calibrated_jitter_sigma = 0.003;

struct ReceiverSeries {
    ReceiverProbe probe;
    std::vector<double> power_db;
    double mean_db = 0.0;
    double peak_to_peak_db = 0.0;
};

struct ReceiverStudy {
    double theta_steer_deg = 0.0;
    std::vector<double> times;
    std::vector<ReceiverSeries> series;

    /// Index of the probe with the highest mean power.
    std::size_t strongest() const;
    /// Mean power of the strongest probe minus the next best.
    double margin_db() const;
    double max_peak_to_peak_db() const;
};

inline constexpr double receiver_transmit_power_dbm = 0.0;

/// Received power per probe per time step: gain at the probe angle plus the
/// common free-space term. Throws std::invalid_argument for duplicate probe
/// angles, unequal distances or non-positive duration.
ReceiverStudy receiver_power_study(const SwarmConfig& config, std::span<const ReceiverProbe> probes,
                                   double theta_steer_deg, const FlightJitterModel& jitter, double duration = 10.0,
                                   double dt = 0.1);

/// Largest sigma (bisection) whose worst peak-to-peak fluctuation over the
/// given steering angles stays at or below target_db.
double calibrate_jitter_sigma(const SwarmConfig& config, std::span<const double> steer_deg, double target_db = 1.5,
                              std::uint64_t seed = 1, double duration = 10.0);

std::string receiver_study_csv(std::span<const ReceiverStudy> studies);

struct StudyCheck {
    std::string study;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ReproduceOptions {
    std::uint64_t seed = 1;
    double jitter_sigma = calibrated_jitter_sigma;
    /// Optional replacement for the built-in connector stage table
    /// (CSV: stage,s12_ref_db,bw_ref_pct).
    std::optional<std::filesystem::path> golden_stage_file;
};

struct ReproduceReport {
    std::vector<StudyCheck> checks;
    std::vector<std::filesystem::path> artifacts;
    bool all_passed() const;
    std::string summary() const;
};

/// Writes the eight study CSVs, summary.txt and plots.gp into out_dir.
/// Study failures are recorded as failed checks rather than thrown.
ReproduceReport reproduce_all(const std::filesystem::path& out_dir, const ReproduceOptions& options = {});

/// Reads a golden stage table; throws std::invalid_argument on malformed input.
std::vector<std::pair<StageId, double>> read_golden_stage_table(const std::string& csv_text);

/// gnuplot command file plotting each known CSV in the directory to PNG.
std::string gnuplot_script(std::span<const std::filesystem::path> csv_files);

}  // namespace swarmarray
