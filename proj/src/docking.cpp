// SPDX-License-Identifier: Apache-2.0
#include "swarmarray/docking.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "swarmarray/connector.hpp"
#include "swarmarray/errors.hpp"
#include "swarmarray/io.hpp"

namespace swarmarray {

namespace {
constexpr std::array<const char*, 5> phase_names{"separated", "approaching", "capturing", "docked", "undocking"};
}

std::string to_string(DockPhase phase) { return phase_names[static_cast<std::size_t>(phase)]; }

DockPhase dock_phase_from_string(const std::string& name) {
    for (std::size_t i = 0; i < phase_names.size(); ++i) {
        if (name == phase_names[i]) return static_cast<DockPhase>(i);
    }
    throw std::invalid_argument("unknown dock phase '" + name + "'");
}

bool is_legal_transition(DockPhase from, DockPhase to) {
    if (from == to) return true;
    const auto f = static_cast<int>(from);
    return static_cast<int>(to) == (f + 1) % 5;
}

double link_budget(const LinkState& link, Frequency f) {
    switch (link.phase) {
    case DockPhase::docked:
        return misalignment_s12(0.0, f);
    case DockPhase::capturing:
        return misalignment_s12(std::min(link.d_mis, max_misalignment), f);
    default:
        return -std::numeric_limits<double>::infinity();
    }
}

World::World(DockingParams params) : params_(params), rng_(params.seed) {}

void World::add_uav(int id, const Vec3& position) {
    if (has_uav(id)) throw ScenarioError("duplicate UAV id " + std::to_string(id));
    UavState u;
    u.id = id;
    u.position = position;
    const auto it = std::lower_bound(uavs_.begin(), uavs_.end(), id, [](const UavState& s, int v) { return s.id < v; });
    uavs_.insert(it, u);
    for (const auto& other : uavs_) {
        if (other.id != id) pairs_[key(id, other.id)] = PairState{};
    }
}

bool World::has_uav(int id) const {
    return std::any_of(uavs_.begin(), uavs_.end(), [id](const UavState& u) { return u.id == id; });
}

std::size_t World::index(int id) const {
    for (std::size_t i = 0; i < uavs_.size(); ++i) {
        if (uavs_[i].id == id) return i;
    }
    throw ScenarioError("unknown UAV id " + std::to_string(id));
}

const UavState& World::uav(int id) const { return uavs_[index(id)]; }

double World::distance(int a, int b) const { return (uav(b).position - uav(a).position).norm(); }

double World::gap(const Key& k) const {
    const Vec3 rel = uav(k.second).position - uav(k.first).position;
    return std::abs(rel.x()) - params_.docked_length;
}

double World::misalignment(const Key& k) const {
    const Vec3 rel = uav(k.second).position - uav(k.first).position;
    return std::hypot(rel.y(), rel.z());
}

DockPhase World::phase(int a, int b) const {
    const auto it = pairs_.find(key(a, b));
    if (it == pairs_.end()) throw ScenarioError("no such UAV pair");
    return it->second.phase;
}

LinkState World::link(int a, int b) const {
    const Key k = key(a, b);
    LinkState s;
    s.phase = phase(a, b);
    if (s.phase == DockPhase::docked) {
        s.gap = 0.0;
        s.d_mis = 0.0;
    } else {
        s.gap = gap(k);
        s.d_mis = misalignment(k);
    }
    s.rf_path_continuous = s.phase == DockPhase::docked;
    s.s12_db = link_budget(s, Frequency(params_.frequency_hz));
    return s;
}

// Union-find root per UAV index over docked pairs.
std::vector<int> World::body_roots() const {
    std::vector<int> parent(uavs_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (const auto& [k, p] : pairs_) {
        if (p.phase != DockPhase::docked) continue;
        const int a = find(static_cast<int>(index(k.first)));
        const int b = find(static_cast<int>(index(k.second)));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = find(static_cast<int>(i));
    return parent;
}

namespace {

std::string link_payload(const LinkState& s) {
    std::ostringstream o;
    o << "gap_m=" << fmt_fixed(s.gap, 4) << ";d_mis_m=" << fmt_fixed(s.d_mis, 4) << ";s12_db=" << fmt_fixed(s.s12_db, 3);
    return o.str();
}

}  // namespace

World World::step(double dt, const std::vector<Command>& commands, std::vector<Event>* events) const {
    if (!(dt > 0.0 && dt <= 0.1)) throw std::invalid_argument("time step must lie in (0, 0.1] s");
    World next = *this;
    auto emit = [&](double t, std::vector<int> ids, std::string type, std::string payload) {
        if (events) events->push_back({t, std::move(ids), std::move(type), std::move(payload)});
    };

    for (const auto& c : commands) {
        if (c.kind == Command::Kind::velocity) {
            next.index(c.uav);
            Vec3 v = c.velocity;
            if (!v.allFinite()) {
                emit(time_, {c.uav}, "command_rejected", "reason=non-finite");
                continue;
            }
            const double speed = v.norm();
            if (speed > params_.max_speed) {
                v *= params_.max_speed / speed;
                emit(time_, {c.uav}, "command_clamped",
                     "requested_mps=" + fmt_fixed(speed, 4) + ";applied_mps=" + fmt_fixed(params_.max_speed, 4));
            }
            next.setpoints_[c.uav] = v;
        } else {
            next.index(c.uav);
            next.index(c.other);
            if (c.uav == c.other) {
                emit(time_, {c.uav}, "command_rejected", "reason=self-separate");
                continue;
            }
            const Key k = key(c.uav, c.other);
            auto& p = next.pairs_.at(k);
            if (p.phase != DockPhase::docked) {
                emit(time_, {k.first, k.second}, "command_rejected", "reason=not-docked");
                continue;
            }
            p.phase = DockPhase::undocking;
            const LinkState s = next.link(k.first, k.second);
            emit(time_, {k.first, k.second}, "undocking", link_payload(s));
            emit(time_, {k.first, k.second}, "link_down", "rf_path_continuous=false");
        }
    }

    // Rigid bodies move with the mean command of their members.
    const auto roots = next.body_roots();
    const std::size_t n = next.uavs_.size();
    std::vector<Vec3> body_velocity(n, Vec3::Zero());
    std::vector<int> body_size(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = next.setpoints_.find(next.uavs_[i].id);
        if (it != next.setpoints_.end()) body_velocity[roots[i]] += it->second;
        ++body_size[roots[i]];
    }
    std::vector<Vec3> shift(n, Vec3::Zero());
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t r = 0; r < n; ++r) {
        if (body_size[r] == 0) continue;
        body_velocity[r] /= body_size[r];
        shift[r] = body_velocity[r] * dt;
        if (body_size[r] > 1 && params_.jitter_sigma > 0.0) {
            shift[r] += params_.jitter_sigma * Vec3(noise(next.rng_), noise(next.rng_), noise(next.rng_));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        next.uavs_[i].position += shift[roots[i]];
        next.uavs_[i].velocity = body_velocity[roots[i]];
    }

    const double t_end = time_ + dt;

    // Bracket funnel: drive each capturing pair toward the docked pose.
    for (auto& [k, p] : next.pairs_) {
        if (p.phase != DockPhase::capturing) continue;
        const auto ia = next.index(k.first), ib = next.index(k.second);
        const auto cur_roots = next.body_roots();
        const Vec3 rel = next.uavs_[ib].position - next.uavs_[ia].position;
        const Vec3 target(rel.x() >= 0.0 ? params_.docked_length : -params_.docked_length, 0.0, 0.0);
        const double remaining = params_.capture_time - p.capture_elapsed;
        p.capture_elapsed += dt;
        const bool done = p.capture_elapsed >= params_.capture_time - 1e-12;
        const double frac = done ? 1.0 : std::min(1.0, dt / remaining);
        const Vec3 correction = (target - rel) * frac;
        if (cur_roots[ia] != cur_roots[ib]) {
            for (std::size_t i = 0; i < n; ++i) {
                if (cur_roots[i] == cur_roots[ib]) next.uavs_[i].position += correction;
            }
        }
        if (done) {
            p.phase = DockPhase::docked;
            const LinkState s = next.link(k.first, k.second);
            emit(t_end, {k.first, k.second}, "docked", link_payload(s));
            emit(t_end, {k.first, k.second}, "link_up", "rf_path_continuous=true;s12_db=" + fmt_fixed(s.s12_db, 3));
        }
    }

    const auto final_roots = next.body_roots();
    for (auto& [k, p] : next.pairs_) {
        const auto ia = next.index(k.first), ib = next.index(k.second);
        const double g = next.gap(k);
        const double m = next.misalignment(k);
        const Vec3 rel = next.uavs_[ib].position - next.uavs_[ia].position;
        const double rel_vx = next.uavs_[ib].velocity.x() - next.uavs_[ia].velocity.x();
        const double closing = rel.x() >= 0.0 ? -rel_vx : rel_vx;
        const bool same_body = final_roots[ia] == final_roots[ib];
        switch (p.phase) {
        case DockPhase::separated:
            if (!same_body && closing > 1e-12 && g <= params_.engage_range && g >= -params_.capture_radius &&
                m <= params_.engage_range) {
                p.phase = DockPhase::approaching;
                p.rejected_reported = false;
                emit(t_end, {k.first, k.second}, "approaching", link_payload(next.link(k.first, k.second)));
            }
            break;
        case DockPhase::approaching:
            // The cycle has no way back to separated: an abandoned approach
            // stays here until the pair closes into the capture zone again.
            if (std::abs(g) > params_.capture_radius) p.rejected_reported = false;
            if (!same_body && closing > 1e-12 && std::abs(g) <= params_.capture_radius && m <= params_.funnel_width) {
                if (closing <= params_.capture_speed) {
                    p.phase = DockPhase::capturing;
                    p.capture_elapsed = 0.0;
                    emit(t_end, {k.first, k.second}, "capturing", link_payload(next.link(k.first, k.second)));
                } else if (!p.rejected_reported) {
                    p.rejected_reported = true;
                    emit(t_end, {k.first, k.second}, "capture_rejected", "closing_mps=" + fmt_fixed(closing, 4));
                }
            }
            break;
        case DockPhase::undocking:
            if (g > params_.capture_radius) {
                p.phase = DockPhase::separated;
                emit(t_end, {k.first, k.second}, "separated", link_payload(next.link(k.first, k.second)));
            }
            break;
        default:
            break;
        }
    }

    for (auto& u : next.uavs_) {
        u.docked_to.reset();
        for (const auto& [k, p] : next.pairs_) {
            if (p.phase != DockPhase::docked) continue;
            if (k.first == u.id || k.second == u.id) {
                const int other = k.first == u.id ? k.second : k.first;
                if (!u.docked_to || other < *u.docked_to) u.docked_to = other;
            }
        }
    }
    next.time_ = t_end;
    ++next.steps_;
    return next;
}

// ---------------------------------------------------------------------------
// Scenario scripts

namespace {

double parse_number(const std::string& token, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw ScenarioError("line " + std::to_string(line) + ": expected a number, got '" + token + "'");
    }
}

int parse_id(const std::string& token, int line) {
    const double v = parse_number(token, line);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw ScenarioError("line " + std::to_string(line) + ": UAV id must be an integer");
    }
    return static_cast<int>(v);
}

struct ParamField {
    const char* name;
    double DockingParams::*field;
};
constexpr std::array<ParamField, 9> param_fields{{{"capture_radius", &DockingParams::capture_radius},
                                                  {"capture_speed", &DockingParams::capture_speed},
                                                  {"capture_time", &DockingParams::capture_time},
                                                  {"funnel_width", &DockingParams::funnel_width},
                                                  {"engage_range", &DockingParams::engage_range},
                                                  {"docked_length", &DockingParams::docked_length},
                                                  {"max_speed", &DockingParams::max_speed},
                                                  {"jitter_sigma", &DockingParams::jitter_sigma},
                                                  {"frequency_hz", &DockingParams::frequency_hz}}};

}  // namespace

DockingScenario parse_scenario(const std::string& text) {
    DockingScenario s;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string where = "line " + std::to_string(line) + ": ";
        auto need = [&](std::size_t count) {
            if (tok.size() != count) throw ScenarioError(where + "'" + tok[0] + "' expects " + std::to_string(count - 1) + " fields");
        };
        if (tok[0] == "seed") {
            need(2);
            const double v = parse_number(tok[1], line);
            if (v < 0 || v != std::floor(v)) throw ScenarioError(where + "seed must be a non-negative integer");
            s.params.seed = static_cast<std::uint64_t>(v);
        } else if (tok[0] == "dt") {
            need(2);
            s.dt = parse_number(tok[1], line);
            if (!(s.dt > 0.0 && s.dt <= 0.1)) throw ScenarioError(where + "dt must lie in (0, 0.1]");
        } else if (tok[0] == "duration") {
            need(2);
            s.duration = parse_number(tok[1], line);
            if (s.duration < 0.0) throw ScenarioError(where + "duration must be non-negative");
        } else if (tok[0] == "param") {
            need(3);
            const auto it = std::find_if(param_fields.begin(), param_fields.end(),
                                         [&](const ParamField& f) { return tok[1] == f.name; });
            if (it == param_fields.end()) throw ScenarioError(where + "unknown parameter '" + tok[1] + "'");
            s.params.*(it->field) = parse_number(tok[2], line);
        } else if (tok[0] == "uav") {
            need(5);
            const int id = parse_id(tok[1], line);
            for (const auto& [other, _] : s.uavs) {
                if (other == id) throw ScenarioError(where + "duplicate UAV id " + std::to_string(id));
            }
            s.uavs.emplace_back(id,
                                Vec3(parse_number(tok[2], line), parse_number(tok[3], line), parse_number(tok[4], line)));
        } else if (tok[0] == "at") {
            if (tok.size() < 3) throw ScenarioError(where + "'at' needs a time and a command");
            TimedCommand tc;
            tc.time = parse_number(tok[1], line);
            if (tc.time < 0.0) throw ScenarioError(where + "command time must be non-negative");
            if (tok[2] == "velocity") {
                if (tok.size() != 7) throw ScenarioError(where + "'velocity' expects ID VX VY VZ");
                tc.command.kind = Command::Kind::velocity;
                tc.command.uav = parse_id(tok[3], line);
                tc.command.velocity =
                    Vec3(parse_number(tok[4], line), parse_number(tok[5], line), parse_number(tok[6], line));
            } else if (tok[2] == "separate") {
                if (tok.size() != 5) throw ScenarioError(where + "'separate' expects two UAV ids");
                tc.command.kind = Command::Kind::separate;
                tc.command.uav = parse_id(tok[3], line);
                tc.command.other = parse_id(tok[4], line);
            } else {
                throw ScenarioError(where + "unknown command '" + tok[2] + "'");
            }
            s.commands.push_back(tc);
        } else {
            throw ScenarioError(where + "unknown directive '" + tok[0] + "'");
        }
    }
    return s;
}

std::string format_scenario(const DockingScenario& s) {
    std::ostringstream o;
    o << "seed " << s.params.seed << '\n' << "dt " << fmt_fixed(s.dt, 6) << '\n';
    if (s.duration >= 0.0) o << "duration " << fmt_fixed(s.duration, 6) << '\n';
    for (const auto& f : param_fields) o << "param " << f.name << ' ' << fmt_fixed(s.params.*(f.field), 6) << '\n';
    for (const auto& [id, p] : s.uavs) {
        o << "uav " << id << ' ' << fmt_fixed(p.x(), 6) << ' ' << fmt_fixed(p.y(), 6) << ' ' << fmt_fixed(p.z(), 6) << '\n';
    }
    for (const auto& c : s.commands) {
        o << "at " << fmt_fixed(c.time, 6) << ' ';
        if (c.command.kind == Command::Kind::velocity) {
            o << "velocity " << c.command.uav << ' ' << fmt_fixed(c.command.velocity.x(), 6) << ' '
              << fmt_fixed(c.command.velocity.y(), 6) << ' ' << fmt_fixed(c.command.velocity.z(), 6) << '\n';
        } else {
            o << "separate " << c.command.uav << ' ' << c.command.other << '\n';
        }
    }
    return o.str();
}

ScenarioResult run_scenario(const DockingScenario& scenario) {
    World world(scenario.params);
    for (const auto& [id, p] : scenario.uavs) world.add_uav(id, p);
    double last = 0.0;
    for (const auto& c : scenario.commands) {
        if (!world.has_uav(c.command.uav) ||
            (c.command.kind == Command::Kind::separate && !world.has_uav(c.command.other))) {
            throw ScenarioError("command at t=" + fmt_fixed(c.time, 3) + " references an undefined UAV");
        }
        last = std::max(last, c.time);
    }
    const double duration = scenario.duration >= 0.0 ? scenario.duration : last;
    if (!(scenario.dt > 0.0 && scenario.dt <= 0.1)) throw ScenarioError("dt must lie in (0, 0.1]");

    std::vector<std::size_t> order(scenario.commands.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scenario.commands[a].time < scenario.commands[b].time; });

    ScenarioResult result;
    if (scenario.uavs.empty()) return result;
    const auto steps = static_cast<std::int64_t>(std::ceil(duration / scenario.dt - 1e-9));
    std::size_t next_cmd = 0;
    std::map<std::pair<int, int>, double> docked_distance;
    for (std::int64_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * scenario.dt;
        std::vector<Command> due;
        while (next_cmd < order.size() && scenario.commands[order[next_cmd]].time <= t + 1e-9) {
            due.push_back(scenario.commands[order[next_cmd]].command);
            ++next_cmd;
        }
        world = world.step(scenario.dt, due, &result.events);
        const auto& u = world.uavs();
        for (std::size_t i = 0; i < u.size(); ++i) {
            for (std::size_t j = i + 1; j < u.size(); ++j) {
                const std::pair<int, int> key{u[i].id, u[j].id};
                if (world.phase(key.first, key.second) == DockPhase::docked) {
                    const double dist = world.distance(key.first, key.second);
                    const auto [it, fresh] = docked_distance.emplace(key, dist);
                    if (!fresh) {
                        result.max_docked_distance_drift =
                            std::max(result.max_docked_distance_drift, std::abs(dist - it->second));
                    }
                } else {
                    docked_distance.erase(key);
                }
            }
        }
    }
    return result;
}

DockingScenario reference_timeline_scenario() {
    DockingScenario s;
    s.dt = 0.01;
    s.duration = 16.0;
    s.uavs = {{1, Vec3(0.0, 0.0, 0.0)}, {2, Vec3(s.params.docked_length + 1.0, 0.0, 0.0)}};
    auto vel = [](double t, int id, double vx) {
        TimedCommand c;
        c.time = t;
        c.command.kind = Command::Kind::velocity;
        c.command.uav = id;
        c.command.velocity = Vec3(vx, 0.0, 0.0);
        return c;
    };
    s.commands.push_back(vel(0.0, 1, 0.1));
    s.commands.push_back(vel(0.0, 2, -0.1));
    TimedCommand sep;
    sep.time = 13.0;
    sep.command.kind = Command::Kind::separate;
    sep.command.uav = 1;
    sep.command.other = 2;
    s.commands.push_back(sep);
    s.commands.push_back(vel(13.0, 1, -0.1));
    s.commands.push_back(vel(13.0, 2, 0.1));
    return s;
}

DockingScenario random_scenario(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> n_uavs(2, 4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    DockingScenario s;
    s.params.seed = seed;
    s.dt = 0.02;
    s.duration = 20.0;
    const int n = n_uavs(rng);
    for (int i = 1; i <= n; ++i) {
        // Roughly on a line so pairs can meet, with small lateral offsets.
        s.uavs.emplace_back(i, Vec3(1.2 * (i - 1) + 0.4 * unit(rng), 0.01 * (unit(rng) - 0.5), 0.0));
    }
    std::uniform_int_distribution<int> pick(1, n);
    std::uniform_int_distribution<int> n_cmds(5, 40);
    const int m = n_cmds(rng);
    for (int i = 0; i < m; ++i) {
        TimedCommand c;
        c.time = std::round(20.0 * unit(rng) * 100.0) / 100.0;
        if (unit(rng) < 0.8) {
            c.command.kind = Command::Kind::velocity;
            c.command.uav = pick(rng);
            c.command.velocity = Vec3(0.6 * (unit(rng) - 0.5), 0.004 * (unit(rng) - 0.5), 0.0);
            if (unit(rng) < 0.05) c.command.velocity.x() *= 20.0;
        } else {
            c.command.kind = Command::Kind::separate;
            c.command.uav = pick(rng);
            c.command.other = pick(rng);
        }
        s.commands.push_back(c);
    }
    return s;
}

std::string event_log_csv(const std::vector<Event>& events) {
    CsvTable t({"time_s", "uav_ids", "event", "payload"});
    for (const auto& e : events) {
        std::string ids;
        for (std::size_t i = 0; i < e.uav_ids.size(); ++i) ids += (i ? ";" : "") + std::to_string(e.uav_ids[i]);
        t.add_row({fmt_fixed(e.time, 3), ids, e.type, e.payload});
    }
    return t.str();
}

std::optional<std::string> find_illegal_transition(const std::vector<Event>& events) {
    std::map<std::vector<int>, DockPhase> state;
    for (const auto& e : events) {
        const auto it = std::find(phase_names.begin(), phase_names.end(), e.type);
        if (it == phase_names.end()) continue;
        const auto to = static_cast<DockPhase>(it - phase_names.begin());
        const auto [pos, fresh] = state.emplace(e.uav_ids, DockPhase::separated);
        if (!is_legal_transition(pos->second, to)) {
            return to_string(pos->second) + " -> " + to_string(to) + " at t=" + fmt_fixed(e.time, 3);
        }
        pos->second = to;
    }
    return std::nullopt;
}

std::optional<double> first_event_time(const std::vector<Event>& events, const std::string& type) {
    for (const auto& e : events) {
        if (e.type == type) return e.time;
    }
    return std::nullopt;
}

}  // namespace swarmarray
