// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "swarmarray/docking.hpp"
#include "swarmarray/errors.hpp"
#include "swarmarray/io.hpp"

using namespace swarmarray;

TEST(PhaseMachine, LegalTransitions) {
    using P = DockPhase;
    EXPECT_TRUE(is_legal_transition(P::separated, P::approaching));
    EXPECT_TRUE(is_legal_transition(P::undocking, P::separated));
    EXPECT_TRUE(is_legal_transition(P::docked, P::docked));
    EXPECT_FALSE(is_legal_transition(P::separated, P::docked));
    EXPECT_FALSE(is_legal_transition(P::docked, P::separated));
    EXPECT_FALSE(is_legal_transition(P::capturing, P::approaching));
    for (auto p : {P::separated, P::approaching, P::capturing, P::docked, P::undocking}) {
        EXPECT_EQ(dock_phase_from_string(to_string(p)), p);
    }
}

TEST(Timeline, DockAndUndockTimes) {
    const auto r = run_scenario(reference_timeline_scenario());
    const auto dock = first_event_time(r.events, "docked");
    const auto undock = first_event_time(r.events, "undocking");
    ASSERT_TRUE(dock && undock);
    EXPECT_NEAR(*dock, 5.0, 0.5);
    EXPECT_NEAR(*undock, 13.0, 0.5);
    EXPECT_FALSE(find_illegal_transition(r.events));
    EXPECT_LE(r.max_docked_distance_drift, 1e-12);
    EXPECT_TRUE(first_event_time(r.events, "link_up"));
    EXPECT_TRUE(first_event_time(r.events, "separated"));
}

TEST(Timeline, ShippedScenarioFileMatchesBuiltIn) {
    const auto s = parse_scenario(read_text(std::string(SWARMARRAY_DATA_DIR) + "/scenarios/reference_timeline.txt"));
    EXPECT_EQ(event_log_csv(run_scenario(s).events), event_log_csv(run_scenario(reference_timeline_scenario()).events));
}

TEST(Timeline, Deterministic) {
    const auto a = event_log_csv(run_scenario(random_scenario(42)).events);
    const auto b = event_log_csv(run_scenario(random_scenario(42)).events);
    EXPECT_EQ(a, b);
}

TEST(Fuzz, ThousandRandomScriptsStayLegal) {
    int docked = 0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        const auto r = run_scenario(random_scenario(seed));
        const auto bad = find_illegal_transition(r.events);
        ASSERT_FALSE(bad) << "seed " << seed << ": " << *bad;
        ASSERT_LE(r.max_docked_distance_drift, 1e-12) << "seed " << seed;
        docked += first_event_time(r.events, "docked") ? 1 : 0;
    }
    // The fuzzer must actually reach the docked phase often enough to matter.
    EXPECT_GT(docked, 50);
}

TEST(Scenario, EmptyScriptGivesEmptyLog) {
    const auto r = run_scenario(parse_scenario("# nothing\n"));
    EXPECT_TRUE(r.events.empty());
    EXPECT_EQ(event_log_csv(r.events), "time_s,uav_ids,event,payload\n");
}

TEST(Scenario, FormatParseRoundTrip) {
    const auto s = random_scenario(7);
    const auto t = parse_scenario(format_scenario(s));
    EXPECT_EQ(format_scenario(t), format_scenario(s));
}

TEST(Scenario, ErrorsCarryLineNumbers) {
    try {
        parse_scenario("uav 1 0 0 0\nat 1 velocity 1 x 0 0\n");
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    EXPECT_THROW(parse_scenario("bogus 1\n"), ScenarioError);
    EXPECT_THROW(parse_scenario("param warp 3\n"), ScenarioError);
    EXPECT_THROW(run_scenario(parse_scenario("uav 1 0 0 0\nat 1 velocity 9 0 0 0\n")), ScenarioError);
    EXPECT_THROW(parse_scenario("uav 1 0 0 0\nuav 1 1 0 0\n"), ScenarioError);
}

TEST(World, ClampsOversizedCommands) {
    World w;
    w.add_uav(1, Vec3::Zero());
    std::vector<Event> ev;
    Command c;
    c.uav = 1;
    c.velocity = Vec3(10.0, 0.0, 0.0);
    w = w.step(0.1, {c}, &ev);
    EXPECT_LE(w.uav(1).velocity.norm(), w.params().max_speed + 1e-12);
    ASSERT_FALSE(ev.empty());
    EXPECT_EQ(ev.front().type, "command_clamped");
    EXPECT_THROW(w.step(0.2, {}), std::invalid_argument);
    EXPECT_THROW(w.step(0.0, {}), std::invalid_argument);
}

TEST(World, FastClosingIsRejectedAtCapture) {
    DockingScenario s;
    s.uavs = {{1, Vec3::Zero()}, {2, Vec3(1.5, 0, 0)}};
    s.commands = {{0.0, {Command::Kind::velocity, 1, 0, Vec3(0.4, 0, 0)}},
                  {0.0, {Command::Kind::velocity, 2, 0, Vec3(-0.4, 0, 0)}}};
    s.duration = 3.0;
    const auto r = run_scenario(s);
    EXPECT_TRUE(first_event_time(r.events, "capture_rejected"));
    EXPECT_FALSE(first_event_time(r.events, "docked"));
    EXPECT_FALSE(find_illegal_transition(r.events));
}

TEST(World, LateralOffsetBeyondFunnelNeverDocks) {
    DockingScenario s;
    s.uavs = {{1, Vec3::Zero()}, {2, Vec3(1.5, 0.05, 0)}};
    s.commands = {{0.0, {Command::Kind::velocity, 1, 0, Vec3(0.1, 0, 0)}},
                  {0.0, {Command::Kind::velocity, 2, 0, Vec3(-0.1, 0, 0)}}};
    s.duration = 8.0;
    EXPECT_FALSE(first_event_time(run_scenario(s).events, "docked"));
}

TEST(World, SmallOffsetIsCorrectedByFunnel) {
    DockingScenario s;
    s.uavs = {{1, Vec3::Zero()}, {2, Vec3(1.5, 0.01, 0.005)}};
    s.commands = {{0.0, {Command::Kind::velocity, 1, 0, Vec3(0.1, 0, 0)}},
                  {0.0, {Command::Kind::velocity, 2, 0, Vec3(-0.1, 0, 0)}}};
    s.duration = 6.0;
    const auto r = run_scenario(s);
    ASSERT_TRUE(first_event_time(r.events, "docked"));
}

TEST(World, DockedGroupMovesRigidlyWithJitter) {
    DockingScenario s = reference_timeline_scenario();
    s.params.jitter_sigma = 0.01;
    s.params.seed = 3;
    const auto r = run_scenario(s);
    EXPECT_LE(r.max_docked_distance_drift, 1e-12);
}

TEST(World, LinkBudget) {
    LinkState l;
    l.phase = DockPhase::docked;
    EXPECT_NEAR(link_budget(l, Frequency(300e6)), -0.2, 1e-6);
    l.phase = DockPhase::separated;
    EXPECT_TRUE(std::isinf(link_budget(l, Frequency(300e6))));
}

TEST(World, SeparateRequiresDockedPair) {
    DockingScenario s;
    s.uavs = {{1, Vec3::Zero()}, {2, Vec3(3.0, 0, 0)}};
    s.commands = {{0.5, {Command::Kind::separate, 1, 2, Vec3::Zero()}}};
    s.duration = 1.0;
    const auto r = run_scenario(s);
    EXPECT_TRUE(first_event_time(r.events, "command_rejected"));
}
