// SPDX-License-Identifier: Apache-2.0
//
// Equivalent-circuit surrogate of the docking RF connector.
//
// Each half of the connector is a microstrip patch on FR4 treated as a series
// transmission-line section between the feed and the mating face. The two
// halves meet at a contact interface:
//   feed -- patch line (L) -- [radiation shunt if open] -- contact -- mirror -- out
// The contact is a series overlap capacitance C(o) = C0 o / (1 - o) that
// becomes a short at full overlap. The slot of the final design is a shunt
// capacitor at the mating face. A nonzero air gap replaces the contact with
// the plate capacitance eps0 W L / d and the free-space path attenuation.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmarray/em_core.hpp"

namespace swarmarray {

enum class StageId { square_patch, stage1, stage2, stage3, final_design };

std::string to_string(StageId id);
StageId stage_from_string(const std::string& name);

struct ConnectorDesign {
    StageId stage = StageId::final_design;
    double width = 0.0;      // W, m
    double length = 0.0;     // L, m
    double gap = 0.0;        // d, m
    double eps_r = 4.4;
    double loss_tangent = 0.02;
    double thickness = 1.6e-3;  // substrate, m
    bool via = false;
    bool slot = false;
    double slot_capacitance = 0.0;  // F

    void validate() const;
};

/// Quasi-static effective permittivity of a microstrip of width w over
/// substrate thickness h (Hammerstad).
double microstrip_eps_eff(double width, double thickness, double eps_r);
/// Characteristic impedance of the same line, ohms.
double microstrip_impedance(double width, double thickness, double eps_r);
/// Strip width giving impedance z on the substrate (bisection).
double microstrip_width_for(double z, double thickness, double eps_r);

/// lambda / sqrt(eps_eff). Throws GeometryError when W or thickness <= 0.
double effective_wavelength(Frequency f, const ConnectorDesign& design);
/// lambda / sqrt(eps_eff) for a known effective permittivity.
double effective_wavelength(Frequency f, double eps_eff);

struct StageEntry {
    ConnectorDesign design;
    double s12_ref_db = 0.0;           // golden reference, not model output
    std::optional<double> bw_ref_pct;  // golden 3 dB bandwidth
};

inline constexpr double connector_design_frequency_hz = 300e6;

/// The five design stages at the design frequency, in evolution order.
std::vector<StageEntry> stage_catalog(Frequency f0 = Frequency(connector_design_frequency_hz));
const StageEntry& catalog_entry(const std::vector<StageEntry>& catalog, StageId id);

/// Golden table as CSV: stage,s12_ref_db,bw_ref_pct.
std::string golden_stage_csv(std::span<const StageEntry> catalog);

struct PathLossModel {
    double dielectric_db_per_m = 0.0;
    double gap_db_per_m = 0.0;

    /// Attenuation constants fitted to the stage table: 2 p alpha_diel = 0.55 dB
    /// for the lambda_e/2 strip, and the square-patch excess over stage 1 spread
    /// across its 0.2 lambda_e gap.
    static PathLossModel calibrated(Frequency f0 = Frequency(connector_design_frequency_hz));
};

/// Total signal path d + 2p.
inline double path_length(double gap, double dielectric_path) { return gap + 2.0 * dielectric_path; }

/// alpha_gap d + 2 alpha_diel p, dB. Throws on negative lengths.
double insertion_loss_path(double gap, double dielectric_path, const PathLossModel& model);

struct ContactModel {
    double c0 = 10e-12;           // F, overlap capacitance scale
    double contact_length = 0.0;  // m, offset at which overlap vanishes

    double overlap(double d_mis) const;
};

/// Contact length calibrated once so the final design reads -10.5 dB at 6 mm
/// offset and 300 MHz. The slot capacitance in the catalog is calibrated so the
/// aligned final design reads -0.2 dB at 300 MHz.
const ContactModel& calibrated_contact();

/// S-parameters of the full connector pair at each frequency.
std::vector<SParameters> model_s12(const ConnectorDesign& design, std::span<const double> freqs_hz,
                                   double d_mis = 0.0);
SParameters model_s12_at(const ConnectorDesign& design, Frequency f, double d_mis = 0.0);

inline constexpr double max_misalignment = 10e-3;

/// S12 of the final design at lateral offset d_mis, dB. Throws std::out_of_range
/// outside [0, 10 mm].
double misalignment_s12(double d_mis, Frequency f = Frequency(connector_design_frequency_hz));

struct FrequencyEstimate {
    double hertz = 0.0;
    bool extrapolated = false;
    std::string warning;
};

/// Patch length to highest usable frequency under the 0.1 dB loss budget,
/// piecewise log-log through (3.02 mm, 2.0 GHz), (7.42 mm, 1.4 GHz), (24.70 mm, 0.7 GHz).
FrequencyEstimate max_operating_frequency(double patch_length, double loss_budget_db = 0.1);

struct FrequencyAnchor {
    double patch_length;
    double hertz;
};
std::span<const FrequencyAnchor> frequency_anchors();

/// "freq_hz,s11_db,s12_db" preceded by a "# design: <id>" line.
std::string sweep_csv(const ConnectorDesign& design, std::span<const double> freqs_hz, double d_mis = 0.0);

}  // namespace swarmarray
