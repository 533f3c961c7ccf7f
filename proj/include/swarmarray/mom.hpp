// SPDX-License-Identifier: Apache-2.0
//
// Thin-wire method-of-moments solver.
//
// Each wire is split into an odd number of equal segments. One unknown is
// attached to every segment: a piecewise-linear (triangular) basis function
// peaking at the segment midpoint and vanishing at the neighbouring midpoints,
// or at the wire end for the two outermost segments. Testing is Galerkin on
// the mixed-potential EFIE with the reduced kernel exp(-jkR)/(4 pi R),
// R = sqrt(|r - r'|^2 + a^2), so the impedance matrix is symmetric.
// Excitation is a delta gap at the midpoint of the feed segment.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmarray/em_core.hpp"

namespace swarmarray {

using Vec3 = Eigen::Vector3d;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr int default_segments_per_wire = 31;

/// One array element: a driven rod with an optional parasitic reflector behind
/// it. Rods are parallel to z; the reflector sits at -y so the forward
/// direction is +y (broadside, plot angle 0).
struct WireAntenna {
    double driven_length = 0.0;
    std::optional<double> reflector_length;
    double separation = 0.0;  // reflector to driven, along y
    double radius = 1e-3;

    /// Two-rod element: driven 0.51 lambda, reflector 0.53 lambda, 0.29 lambda apart, 1 mm radius.
    static WireAntenna reflector_element(Frequency f, double radius = 1e-3);
    /// Same element with absolute dimensions (metres).
    static WireAntenna reflector_element(double driven, double reflector, double separation, double radius);
    static WireAntenna dipole(double length, double radius);

    /// Throws GeometryError when an invariant is violated.
    void validate() const;
};

struct PlacedElement {
    WireAntenna antenna;
    Vec3 center = Vec3::Zero();  // midpoint of the driven rod
};

struct Segment {
    Vec3 start;
    Vec3 end;
    double radius = 0.0;
    int wire = 0;
    Vec3 midpoint() const { return 0.5 * (start + end); }
    double length() const { return (end - start).norm(); }
};

struct Wire {
    std::string name;
    Vec3 start;
    Vec3 end;
    double radius = 0.0;
    int first_segment = 0;
    int segment_count = 0;
};

class WireMesh {
public:
    WireMesh() = default;

    /// Appends a straight wire split into `segments` equal segments.
    /// Returns the wire index. Throws MeshError when segment length <= 4 radius.
    int add_wire(std::string name, const Vec3& start, const Vec3& end, double radius, int segments);
    /// Marks the centre segment of `wire` as a delta-gap port. Returns the port index.
    int add_feed(int wire);

    std::span<const Segment> segments() const { return segments_; }
    std::span<const Wire> wires() const { return wires_; }
    std::span<const int> feeds() const { return feeds_; }
    std::size_t size() const { return segments_.size(); }
    int feed_segment(std::size_t port = 0) const { return feeds_.at(port); }

    /// Longest segment, used for the lambda/10 sampling rule.
    double max_segment_length() const;

    /// Same mesh with segments i and j exchanged (basis relabelling).
    WireMesh with_swapped_segments(int i, int j) const;

    /// Piecewise-linear pieces: every wire contributes segments+1 pieces whose
    /// nodes are the wire ends and the segment midpoints.
    struct Piece {
        Vec3 start;
        Vec3 end;
        double radius;
        int start_basis;  // basis equal to 1 at start, -1 when the start is a wire end
        int end_basis;    // basis equal to 1 at end
    };
    std::vector<Piece> pieces() const;

private:
    std::vector<Wire> wires_;
    std::vector<Segment> segments_;
    std::vector<int> feeds_;
    std::vector<int> order_;  // basis index of each segment slot (identity unless relabelled)
};

/// Meshes one element; total segments = 2 * segments_per_wire with a reflector.
/// segments_per_wire must be odd and >= 11.
WireMesh mesh_antenna(const WireAntenna& antenna, int segments_per_wire = default_segments_per_wire);

/// Meshes several placed elements; one feed per driven rod, in element order.
/// Throws GeometryError when rods overlap.
WireMesh mesh_array(std::span<const PlacedElement> elements, int segments_per_wire = default_segments_per_wire);

struct FillOptions {
    unsigned workers = 0;  // 0 = hardware concurrency
};

/// Galerkin impedance matrix. Throws MeshError when any segment is >= lambda/10.
ComplexMatrix fill_impedance_matrix(const WireMesh& mesh, Frequency f, FillOptions options = {});

/// Reference evaluation of a single matrix entry by brute-force quadrature,
/// independent of the fill path (no singularity extraction, heavy subdivision).
complex impedance_entry_reference(const WireMesh& mesh, Frequency f, int row, int col, int subdivisions = 64);

struct CurrentSolution {
    ComplexVector currents;    // amperes, one per segment
    ComplexVector excitation;  // volts, one per segment (delta gaps)
    std::vector<int> feeds;    // segment index per port
    double frequency_hz = 0.0;
    double relative_residual = 0.0;

    complex feed_voltage(std::size_t port = 0) const { return excitation(feeds.at(port)); }
    complex feed_current(std::size_t port = 0) const { return currents(feeds.at(port)); }
    /// Total input power 1/2 Re(sum V conj(I)) over all ports.
    double input_power() const;
};

/// Delta-gap excitation: given voltage at each port, zero elsewhere.
ComplexVector delta_gap_excitation(const WireMesh& mesh, std::span<const complex> port_voltages);

/// Dense LU solve. Throws ConditioningError when the reciprocal condition
/// estimate falls below 1e-13.
CurrentSolution solve_currents(const ComplexMatrix& z, const ComplexVector& excitation, std::vector<int> feeds = {},
                               double frequency_hz = 0.0);

/// Z_in = V_feed / I_feed at one port. Throws std::domain_error when |I_feed| < 1e-12 A.
complex input_impedance(const CurrentSolution& solution, std::size_t port = 0);

/// Far-field H-plane cut (xy plane, plot angle measured from +y toward +x).
RadiationPattern far_field(const CurrentSolution& solution, const WireMesh& mesh, std::span<const double> angles_deg);

/// Co-polar (theta-hat) and cross-polar far fields in an arbitrary direction,
/// 1 m reference distance.
struct FarFieldSample {
    complex e_theta;
    complex e_phi;
};
FarFieldSample far_field_at(const CurrentSolution& solution, const WireMesh& mesh, double theta_rad, double phi_rad);

/// Radiated power from numerical integration of the far field over the sphere.
double radiated_power(const CurrentSolution& solution, const WireMesh& mesh, int polar_points = 48,
                      int azimuth_points = 96);

/// Full single-element solve at 1 V.
struct ElementSolution {
    WireMesh mesh;
    CurrentSolution currents;
    complex impedance;
    RadiationPattern pattern;
};
ElementSolution solve_element(const WireAntenna& antenna, Frequency f, std::span<const double> angles_deg,
                              int segments_per_wire = default_segments_per_wire, double feed_voltage = 1.0);

/// How commanded element phases reach the array.
///  - current: delta-gap voltages are solved so every driven rod carries a unit
///    feed current with the commanded phase lag (array-factor weights are
///    element currents; mutual coupling is compensated at the ports).
///  - voltage: every driven rod gets a 1 V delta gap lagging by the phase; the
///    feed currents then absorb the mutual-coupling perturbation.
enum class FeedModel { current, voltage };

struct ArraySolution {
    WireMesh mesh;
    CurrentSolution currents;
    RadiationPattern pattern;
    std::vector<complex> active_impedances;  // V/I at each port
};

/// Drives the given ports so their feed currents equal `feed_currents`.
CurrentSolution solve_with_feed_currents(const ComplexMatrix& z, const WireMesh& mesh,
                                         std::span<const complex> feed_currents, double frequency_hz);

/// Full MoM solve of several elements including mutual coupling.
ArraySolution solve_array(std::span<const PlacedElement> elements, std::span<const double> phases_deg, Frequency f,
                          std::span<const double> angles_deg, FeedModel feed = FeedModel::current,
                          int segments_per_wire = default_segments_per_wire);

RadiationPattern solve_full_array(std::span<const PlacedElement> elements, std::span<const double> phases_deg,
                                  Frequency f, std::span<const double> angles_deg, FeedModel feed = FeedModel::current,
                                  int segments_per_wire = default_segments_per_wire);

/// Input reflection of a single element over a frequency sweep.
std::vector<double> s11_sweep_db(const WireAntenna& antenna, std::span<const double> freqs_hz, double z_ref = 50.0,
                                 int segments_per_wire = default_segments_per_wire);

/// Adjusts the driven rod length until the input reactance vanishes at f.
WireAntenna tune_driven_length(const WireAntenna& antenna, Frequency f,
                               int segments_per_wire = default_segments_per_wire);

}  // namespace swarmarray
