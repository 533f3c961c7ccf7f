// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "swarmarray/connector.hpp"
#include "swarmarray/errors.hpp"

using namespace swarmarray;

namespace {
const Frequency f300(300e6);
double s12_db(const ConnectorDesign& d, double d_mis = 0.0) {
    return magnitude_to_db(std::abs(model_s12_at(d, f300, d_mis).s21));
}
}  // namespace

TEST(Microstrip, FiftyOhmLineOnFr4) {
    // Textbook: W/h ~ 1.91 gives 50 ohm on eps_r 4.4.
    const double w = microstrip_width_for(50.0, 1.6e-3, 4.4);
    EXPECT_NEAR(w / 1.6e-3, 1.91, 0.03);
    EXPECT_NEAR(microstrip_impedance(w, 1.6e-3, 4.4), 50.0, 1e-6);
    const double ee = microstrip_eps_eff(w, 1.6e-3, 4.4);
    EXPECT_GT(ee, 1.0);
    EXPECT_LT(ee, 4.4);
    EXPECT_NEAR(ee, 3.32, 0.05);
}

TEST(Microstrip, EffectiveWavelength) {
    EXPECT_NEAR(effective_wavelength(f300, 4.0), 0.5 * f300.wavelength(), 1e-12);
    ConnectorDesign d;
    d.width = 0.0;
    d.length = 0.01;
    EXPECT_THROW(effective_wavelength(f300, d), GeometryError);
}

TEST(Catalog, StrictOrderingAtDesignFrequency) {
    const auto cat = stage_catalog();
    ASSERT_EQ(cat.size(), 5u);
    double prev = -1e9;
    for (const auto& e : cat) {
        const double s = s12_db(e.design);
        EXPECT_GT(s, prev) << to_string(e.design.stage);
        prev = s;
    }
    EXPECT_GE(prev, -0.3);
}

TEST(Catalog, GoldenValuesAreReferenceData) {
    const auto cat = stage_catalog();
    EXPECT_DOUBLE_EQ(catalog_entry(cat, StageId::square_patch).s12_ref_db, -84.09);
    EXPECT_DOUBLE_EQ(catalog_entry(cat, StageId::stage1).s12_ref_db, -1.86);
    EXPECT_DOUBLE_EQ(catalog_entry(cat, StageId::stage2).s12_ref_db, -0.55);
    EXPECT_DOUBLE_EQ(catalog_entry(cat, StageId::stage3).s12_ref_db, -0.47);
    EXPECT_DOUBLE_EQ(catalog_entry(cat, StageId::final_design).s12_ref_db, -0.06);
    EXPECT_DOUBLE_EQ(*catalog_entry(cat, StageId::stage3).bw_ref_pct, 59.78);
    const auto csv = golden_stage_csv(cat);
    EXPECT_EQ(csv.rfind("stage,s12_ref_db,bw_ref_pct\n", 0), 0u);
    EXPECT_NE(csv.find("final,-0.06"), std::string::npos);
}

TEST(Catalog, StageNamesRoundTrip) {
    for (auto id : {StageId::square_patch, StageId::stage1, StageId::stage2, StageId::stage3, StageId::final_design}) {
        EXPECT_EQ(stage_from_string(to_string(id)), id);
    }
    EXPECT_THROW(stage_from_string("stage9"), std::invalid_argument);
}

TEST(Network, PassiveAndReciprocalOverBand) {
    std::vector<double> freqs;
    for (double f = 100e6; f <= 600e6; f += 25e6) freqs.push_back(f);
    for (const auto& e : stage_catalog()) {
        for (double dm : {0.0, 3e-3}) {
            const auto s = model_s12(e.design, freqs, dm);
            for (const auto& p : s) {
                EXPECT_LE(std::norm(p.s11) + std::norm(p.s21), 1.0 + 1e-12);
                EXPECT_NEAR(std::abs(p.s12 - p.s21), 0.0, 1e-10);
            }
        }
    }
}

TEST(Network, LosslessSubstrateStillOrdersGalvanicStages) {
    auto cat = stage_catalog();
    for (auto& e : cat) e.design.loss_tangent = 0.0;
    EXPECT_LT(s12_db(catalog_entry(cat, StageId::stage2).design), 0.0);
}

TEST(Network, RequiresAscendingGrid) {
    const auto d = catalog_entry(stage_catalog(), StageId::final_design).design;
    const std::vector<double> bad{3e8, 2e8};
    EXPECT_THROW(model_s12(d, bad), std::invalid_argument);
}

TEST(Network, GapAddsLoss) {
    auto d = catalog_entry(stage_catalog(), StageId::stage1).design;
    const double touching = s12_db(d);
    d.gap = 1e-3;
    EXPECT_LT(s12_db(d), touching);
    d.gap = -1e-3;
    EXPECT_THROW(d.validate(), std::invalid_argument);
}

TEST(PathLoss, CalibratedModel) {
    const auto m = PathLossModel::calibrated();
    EXPECT_GT(m.dielectric_db_per_m, 0.0);
    EXPECT_GT(m.gap_db_per_m, m.dielectric_db_per_m);
    EXPECT_DOUBLE_EQ(path_length(0.01, 0.2), 0.41);
    EXPECT_NEAR(insertion_loss_path(0.0, 0.1, m), 0.2 * m.dielectric_db_per_m, 1e-12);
    EXPECT_THROW(insertion_loss_path(-1.0, 0.1, m), std::invalid_argument);
}

TEST(Misalignment, AnchorsAndMonotonicity) {
    EXPECT_GE(misalignment_s12(0.0), -0.3);
    EXPECT_LE(misalignment_s12(6e-3), -10.0);
    double prev = misalignment_s12(0.0);
    for (int i = 1; i <= 12; ++i) {
        const double s = misalignment_s12(i * 0.5e-3);
        EXPECT_LT(s, prev) << i;
        prev = s;
    }
    // Fine grid: never increases anywhere in range.
    prev = misalignment_s12(0.0);
    for (int i = 1; i <= 1000; ++i) {
        const double s = misalignment_s12(i * 1e-5);
        EXPECT_LE(s, prev);
        prev = s;
    }
    EXPECT_TRUE(std::isinf(misalignment_s12(10e-3)));
    EXPECT_THROW(misalignment_s12(-1e-4), std::out_of_range);
    EXPECT_THROW(misalignment_s12(10.1e-3), std::out_of_range);
}

TEST(Misalignment, ContactOverlap) {
    const auto& c = calibrated_contact();
    EXPECT_DOUBLE_EQ(c.overlap(0.0), 1.0);
    EXPECT_DOUBLE_EQ(c.overlap(c.contact_length), 0.0);
    EXPECT_DOUBLE_EQ(c.overlap(2.0 * c.contact_length), 0.0);
    EXPECT_GT(c.contact_length, 6e-3);
}

TEST(FrequencyAnchors, ExactAtAnchors) {
    const auto a = frequency_anchors();
    ASSERT_EQ(a.size(), 3u);
    for (const auto& p : a) {
        const auto e = max_operating_frequency(p.patch_length);
        EXPECT_EQ(e.hertz, p.hertz);
        EXPECT_FALSE(e.extrapolated);
    }
    EXPECT_EQ(max_operating_frequency(24.70e-3).hertz, 0.7e9);
    EXPECT_EQ(max_operating_frequency(7.42e-3).hertz, 1.4e9);
    EXPECT_EQ(max_operating_frequency(3.02e-3).hertz, 2.0e9);
}

TEST(FrequencyAnchors, MonotoneAndFlagsExtrapolation) {
    double prev = 1e30;
    for (double l = 1e-3; l < 40e-3; l += 0.25e-3) {
        const auto e = max_operating_frequency(l);
        EXPECT_LT(e.hertz, prev);
        prev = e.hertz;
        const bool outside = l < 3.02e-3 || l > 24.70e-3;
        EXPECT_EQ(e.extrapolated, outside) << l;
        EXPECT_EQ(e.warning.empty(), !outside);
    }
    EXPECT_THROW(max_operating_frequency(0.0), std::invalid_argument);
    EXPECT_THROW(max_operating_frequency(5e-3, 0.2), std::invalid_argument);
}

TEST(Sweep, CsvLayout) {
    const auto d = catalog_entry(stage_catalog(), StageId::final_design).design;
    const std::vector<double> f{2e8, 3e8};
    const auto csv = sweep_csv(d, f);
    EXPECT_EQ(csv.rfind("# design: final\nfreq_hz,s11_db,s12_db\n", 0), 0u);
}

TEST(Sweep, FinalDesignMatchedNearDesignFrequency) {
    const auto d = catalog_entry(stage_catalog(), StageId::final_design).design;
    const auto s = model_s12_at(d, f300);
    EXPECT_LT(magnitude_to_db(std::abs(s.s11)), -10.0);
}
