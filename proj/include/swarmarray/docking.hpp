// SPDX-License-Identifier: Apache-2.0
//
// Kinematic docking and undocking of UAVs carrying the RF connector.
//
// UAVs fly along velocity setpoints. Every unordered pair runs its own phase
// machine. The docking axis is x: the gap is |dx| minus the docked centre
// distance and the misalignment d_mis is the lateral offset hypot(dy, dz).
// Docked UAVs form a rigid body moving with the mean of its members' commands.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "swarmarray/em_core.hpp"
#include "swarmarray/mom.hpp"

namespace swarmarray {

enum class DockPhase { separated, approaching, capturing, docked, undocking };

std::string to_string(DockPhase phase);
DockPhase dock_phase_from_string(const std::string& name);

/// True for self-loops and for the forward cycle
/// separated -> approaching -> capturing -> docked -> undocking -> separated.
bool is_legal_transition(DockPhase from, DockPhase to);

struct DockingParams {
    double capture_radius = 0.02;      // m
    double capture_speed = 0.5;        // m/s, closing speed limit for capture
    double capture_time = 0.1;         // s, bracket funnel duration
    double funnel_width = 0.02;        // m, lateral offset the brackets can correct
    double engage_range = 5.0;         // m, closing pairs within this gap are approaching
    double docked_length = 0.5;        // m, centre distance when docked
    double max_speed = 2.0;            // m/s, commands are clamped to this
    double jitter_sigma = 0.0;         // m, per-axis rigid-body jitter of docked groups
    double frequency_hz = 300e6;       // for the link budget
    std::uint64_t seed = 0;
};

struct UavState {
    int id = 0;
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();  // last applied (clamped) velocity
    std::optional<int> docked_to;  // one docked neighbour, lowest id
};

struct LinkState {
    DockPhase phase = DockPhase::separated;
    double gap = 0.0;    // m
    double d_mis = 0.0;  // m
    double s12_db = 0.0;
    bool rf_path_continuous = false;
};

/// Docked -> aligned connector S12; Capturing -> S12 at the current offset;
/// otherwise -inf.
double link_budget(const LinkState& link, Frequency f);

struct Event {
    double time = 0.0;
    std::vector<int> uav_ids;
    std::string type;
    std::string payload;
};

struct Command {
    enum class Kind { velocity, separate };
    Kind kind = Kind::velocity;
    int uav = 0;
    int other = 0;  // separate only
    Vec3 velocity = Vec3::Zero();
};

class World {
public:
    World() = default;
    explicit World(DockingParams params);

    void add_uav(int id, const Vec3& position);

    double time() const { return time_; }
    const DockingParams& params() const { return params_; }
    const std::vector<UavState>& uavs() const { return uavs_; }
    const UavState& uav(int id) const;
    bool has_uav(int id) const;

    /// Current link state of the pair (order-insensitive).
    LinkState link(int a, int b) const;
    DockPhase phase(int a, int b) const;

    /// Distance between the centres of two UAVs.
    double distance(int a, int b) const;

    /// Advances by dt in (0, 0.1] s. Velocity commands persist until replaced.
    /// Clamped or rejected commands are reported in `events`.
    World step(double dt, const std::vector<Command>& commands, std::vector<Event>* events = nullptr) const;

private:
    struct PairState {
        DockPhase phase = DockPhase::separated;
        double capture_elapsed = 0.0;
        bool rejected_reported = false;
    };
    using Key = std::pair<int, int>;
    static Key key(int a, int b) { return a < b ? Key{a, b} : Key{b, a}; }

    std::size_t index(int id) const;
    double gap(const Key& k) const;
    double misalignment(const Key& k) const;
    std::vector<int> body_roots() const;

    DockingParams params_;
    double time_ = 0.0;
    std::int64_t steps_ = 0;
    std::vector<UavState> uavs_;
    std::map<int, Vec3> setpoints_;
    std::map<Key, PairState> pairs_;
    std::mt19937_64 rng_;
};

struct TimedCommand {
    double time = 0.0;
    Command command;
};

struct DockingScenario {
    DockingParams params;
    double dt = 0.01;
    double duration = -1.0;  // negative: run until the last command
    std::vector<std::pair<int, Vec3>> uavs;
    std::vector<TimedCommand> commands;
};

/// Line-based scenario text:
///   seed N | dt S | duration S | param NAME VALUE
///   uav ID X Y Z
///   at T velocity ID VX VY VZ
///   at T separate ID ID
/// '#' starts a comment. Throws ScenarioError with the line number.
DockingScenario parse_scenario(const std::string& text);
std::string format_scenario(const DockingScenario& scenario);

struct ScenarioResult {
    std::vector<Event> events;
    double max_docked_distance_drift = 0.0;  // m, over all docked intervals
};

/// Throws ScenarioError when commands reference undefined UAVs.
ScenarioResult run_scenario(const DockingScenario& scenario);

/// Two UAVs closing at 0.2 m/s from a 1 m gap, separated on command at 13 s.
DockingScenario reference_timeline_scenario();

/// Random 2-4 UAV script with random velocity and separate commands, for
/// fuzzing the phase machine.
DockingScenario random_scenario(std::uint64_t seed);

/// "time_s,uav_ids,event,payload" with a header row; ids joined by ';'.
std::string event_log_csv(const std::vector<Event>& events);

/// First illegal phase transition in a log, or std::nullopt.
std::optional<std::string> find_illegal_transition(const std::vector<Event>& events);

/// Time of the first event of the given type, or std::nullopt.
std::optional<double> first_event_time(const std::vector<Event>& events, const std::string& type);

}  // namespace swarmarray
