// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "swarmarray/errors.hpp"
#include "swarmarray/experiments.hpp"
#include "swarmarray/io.hpp"

using namespace swarmarray;

namespace {
const std::vector<double> steers{-45.0, 0.0, 45.0};
}

TEST(Chamber, ConfigurationDimensions) {
    const auto c = chamber_config();
    EXPECT_EQ(c.n_uavs, 2);
    EXPECT_DOUBLE_EQ(c.element.driven_length, 0.510);
    EXPECT_DOUBLE_EQ(*c.element.reflector_length, 0.530);
    EXPECT_DOUBLE_EQ(c.element_spacing, 0.5);
    EXPECT_TRUE(validate_formation(c).empty());
}

TEST(Chamber, SteeredPeaksAndMirror) {
    const auto c = chamber_config();
    const auto grid = fine_pattern_grid();
    const auto m0 = pattern_metrics(chamber_pattern(c, 0.0, grid));
    EXPECT_NEAR(m0.peak_angle_deg, 0.0, 3.0);
    const auto pm = chamber_pattern(c, -45.0, grid);
    const auto pp = chamber_pattern(c, 45.0, grid);
    EXPECT_NEAR(pattern_metrics(pm).peak_angle_deg, -45.0, 5.0);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(pm.gain_dbi(i), pp.gain_dbi(grid.size() - 1 - i), 1e-9);
    EXPECT_THROW(chamber_pattern(c, 61.0, grid), std::invalid_argument);
    SwarmConfig bad = c;
    bad.uav_spacing = 0.1;
    EXPECT_THROW(chamber_pattern(bad, 0.0, grid), InfeasibleError);
}

TEST(Receiver, SteeredProbeDominatesWithoutJitter) {
    const auto c = chamber_config();
    const auto probes = standard_probes();
    for (std::size_t i = 0; i < steers.size(); ++i) {
        const auto st = receiver_power_study(c, probes, steers[i], {0.0, 0.0, 1}, 2.0);
        EXPECT_EQ(st.strongest(), i);
        EXPECT_GE(st.margin_db(), 4.0);
        EXPECT_EQ(st.max_peak_to_peak_db(), 0.0);
        for (const auto& s : st.series) {
            for (double p : s.power_db) EXPECT_EQ(p, s.power_db.front());
        }
    }
}

TEST(Receiver, CalibratedJitterBoundsFluctuation) {
    const auto c = chamber_config();
    const auto probes = standard_probes();
    for (std::size_t i = 0; i < steers.size(); ++i) {
        const auto st = receiver_power_study(c, probes, steers[i], {calibrated_jitter_sigma, 0.0, 1});
        EXPECT_EQ(st.strongest(), i);
        EXPECT_GE(st.margin_db(), 4.0);
        EXPECT_LE(st.max_peak_to_peak_db(), 1.5);
        EXPECT_GT(st.max_peak_to_peak_db(), 0.0);
    }
}

TEST(Receiver, FluctuationGrowsWithSigma) {
    const auto c = chamber_config();
    const auto probes = standard_probes();
    double prev = 0.0;
    for (double sigma : {0.0, 0.002, 0.004, 0.008}) {
        const auto st = receiver_power_study(c, probes, 0.0, {sigma, 0.0, 1}, 3.0);
        double mean = 0.0;
        for (const auto& s : st.series) mean += s.peak_to_peak_db / st.series.size();
        EXPECT_GE(mean, prev);
        prev = mean;
    }
}

TEST(Receiver, EquidistanceShiftLeavesDeltasUnchanged) {
    const auto c = chamber_config();
    auto near = standard_probes();
    auto far = near;
    for (auto& p : far) p.distance += 15.0;
    const auto a = receiver_power_study(c, near, 45.0, {0.0, 0.0, 1}, 0.5);
    const auto b = receiver_power_study(c, far, 45.0, {0.0, 0.0, 1}, 0.5);
    const double shift = a.series[0].mean_db - b.series[0].mean_db;
    EXPECT_NEAR(shift, 20.0 * std::log10(25.0 / 10.0), 1e-9);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(a.series[i].mean_db - b.series[i].mean_db, shift, 1e-9);
}

TEST(Receiver, RejectsDegenerateInput) {
    const auto c = chamber_config();
    std::vector<ReceiverProbe> dup{{0.0, 10.0}, {0.0, 10.0}};
    EXPECT_THROW(receiver_power_study(c, dup, 0.0, {}), std::invalid_argument);
    std::vector<ReceiverProbe> uneven{{0.0, 10.0}, {45.0, 11.0}};
    EXPECT_THROW(receiver_power_study(c, uneven, 0.0, {}), std::invalid_argument);
    EXPECT_THROW(receiver_power_study(c, standard_probes(), 0.0, {}, 0.0), std::invalid_argument);
    EXPECT_THROW(receiver_power_study(c, standard_probes(), 0.0, {-0.1, 0.0, 1}), std::invalid_argument);
}

TEST(Receiver, SameSeedSameSeries) {
    const auto c = chamber_config();
    const auto a = receiver_power_study(c, standard_probes(), 0.0, {0.004, 1.0, 9}, 1.0);
    const auto b = receiver_power_study(c, standard_probes(), 0.0, {0.004, 1.0, 9}, 1.0);
    const std::vector<ReceiverStudy> va{a}, vb{b};
    EXPECT_EQ(receiver_study_csv(va), receiver_study_csv(vb));
}

TEST(Golden, ReadsShippedTable) {
    const auto g = read_golden_stage_table(read_text(std::string(SWARMARRAY_DATA_DIR) + "/connector_stages_golden.csv"));
    ASSERT_EQ(g.size(), 5u);
    EXPECT_EQ(g.front().first, StageId::square_patch);
    EXPECT_DOUBLE_EQ(g.back().second, -0.06);
    EXPECT_THROW(read_golden_stage_table("nope\n"), std::invalid_argument);
    EXPECT_THROW(read_golden_stage_table("stage,s12_ref_db,bw_ref_pct\nstage1,abc,\n"), std::invalid_argument);
}

TEST(Reproduce, PerturbedGoldenDataIsFlagged) {
    const auto dir = std::filesystem::temp_directory_path() / "swarmarray_golden_test";
    std::filesystem::create_directories(dir);
    // Swap stage2 and stage3 so the reference ordering no longer matches the model.
    write_text(dir / "golden.csv",
               "stage,s12_ref_db,bw_ref_pct\nsquare,-84.09,\nstage1,-1.86,0.31\nstage2,-0.47,41.29\n"
               "stage3,-0.55,59.78\nfinal,-0.06,\n");
    ReproduceOptions opt;
    opt.golden_stage_file = dir / "golden.csv";
    const auto rep = reproduce_all(dir / "out", opt);
    bool flagged = false;
    for (const auto& c : rep.checks) {
        if (c.study == "connector_stages" && c.name.find("golden") != std::string::npos) flagged = !c.passed;
    }
    EXPECT_TRUE(flagged);
    EXPECT_EQ(rep.artifacts.size(), 10u);
    EXPECT_NE(rep.summary().find("FAIL [connector_stages]"), std::string::npos);
}

TEST(Plot, ScriptReferencesEveryCsv) {
    const std::vector<std::filesystem::path> files{"gain_vs_count.csv", "other.csv"};
    const auto s = gnuplot_script(files);
    EXPECT_NE(s.find("set datafile separator ','"), std::string::npos);
    EXPECT_NE(s.find("'gain_vs_count.csv'"), std::string::npos);
    EXPECT_NE(s.find("'other.csv'"), std::string::npos);
}
