// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>

#include "swarmarray/array.hpp"
#include "swarmarray/docking.hpp"
#include "swarmarray/experiments.hpp"
#include "swarmarray/io.hpp"

using namespace swarmarray;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool ok = true;
    std::string detail;
    void add(bool pass, const std::string& what) {
        ok = ok && pass;
        if (!detail.empty()) detail += "; ";
        detail += (pass ? "" : "FAILED ") + what;
    }
};

// Folds the harness checks of one study into a verdict.
void add_study(Verdict& v, const ReproduceReport& rep, const std::string& study) {
    bool seen = false;
    for (const auto& c : rep.checks) {
        if (c.study != study) continue;
        seen = true;
        v.add(c.passed, c.name + " (" + c.detail + ")");
    }
    if (!seen) v.add(false, "no checks recorded for " + study);
}

std::map<std::string, std::string> read_csvs(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".csv") out[e.path().filename().string()] = read_text(e.path());
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const auto suite_start = Clock::now();
    const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "swarmarray_acceptance";
    fs::remove_all(out);
    const Frequency f300(300e6);

    const auto rep_start = Clock::now();
    const auto rep = reproduce_all(out / "run1");
    const double rep_secs = seconds_since(rep_start);
    std::map<int, Verdict> v;

    {
        const auto t0 = Clock::now();
        const double lambda = f300.wavelength();
        const std::vector<double> grid{0.0};
        (void)solve_element(WireAntenna::dipole(0.5 * lambda, 1e-5 * lambda), f300, grid, 61);
        const double secs = seconds_since(t0);
        add_study(v[1], rep, "dipole");
        v[1].add(secs < 5.0, "runtime " + fmt_fixed(secs, 2) + " s < 5 s");
    }
    {
        const auto t0 = Clock::now();
        const std::vector<int> counts{2, 3, 4, 5, 6, 7};
        (void)gain_vs_count(make_swarm_config(f300, UavPlatform::reference(), 2), counts, 45.0);
        const double secs = seconds_since(t0);
        for (const auto& c : rep.checks) {
            if (c.study == "gain_vs_count" && c.name.find("increases") == std::string::npos) {
                v[2].add(c.passed, c.name + " (" + c.detail + ")");
            }
        }
        v[2].add(secs < 120.0, "7-UAV sweep runtime " + fmt_fixed(secs, 2) + " s < 120 s");
    }
    for (const auto& c : rep.checks) {
        if (c.study != "steered_patterns") continue;
        (c.name.rfind("Phi2", 0) == 0 ? v[4] : v[3]).add(c.passed, c.name + " (" + c.detail + ")");
    }
    {
        const auto lay = LinearArrayLayout::uniform(7, 0.5 * f300.wavelength());
        auto cmd = steering_phases(lay, f300, 45.0);
        const auto grid = fine_pattern_grid();
        const auto a = array_factor(cmd, lay, f300, grid);
        for (auto& p : cmd.phases_deg) p += 61.3;
        const auto b = array_factor(cmd, lay, f300, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            worst = std::max(worst, std::abs(std::abs(a.samples[i]) - std::abs(b.samples[i])));
        }
        v[4].add(worst <= 1e-12, "phase-reference invariance of |AF| (max diff " + fmt_fixed(worst * 1e12, 3) + "e-12)");
    }
    add_study(v[5], rep, "connector_stages");
    add_study(v[6], rep, "misalignment_sweep");
    add_study(v[7], rep, "frequency_anchors");
    add_study(v[8], rep, "planner_table");
    add_study(v[9], rep, "docking_log");
    {
        int illegal = 0;
        double drift = 0.0;
        for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
            const auto r = run_scenario(random_scenario(seed));
            illegal += find_illegal_transition(r.events) ? 1 : 0;
            drift = std::max(drift, r.max_docked_distance_drift);
        }
        v[9].add(illegal == 0, "1000 fuzzed scripts, " + std::to_string(illegal) + " with illegal transitions");
        v[9].add(drift <= 1e-12, "fuzzed docked drift " + fmt_fixed(drift, 15) + " m");
    }
    add_study(v[10], rep, "receiver_study");
    {
        const auto rep2 = reproduce_all(out / "run2");
        const auto a = read_csvs(out / "run1");
        const auto b = read_csvs(out / "run2");
        v[11].add(a.size() == 8 && a == b, std::to_string(a.size()) + " CSVs byte-identical across two runs");
        v[11].add(rep2.all_passed() == rep.all_passed(), "same verdicts on rerun");
        const double total = seconds_since(suite_start);
        v[11].add(total < 600.0, "acceptance runtime " + fmt_fixed(total, 1) + " s < 600 s (one harness run " +
                                     fmt_fixed(rep_secs, 1) + " s)");
    }

    int failed = 0;
    for (int k = 1; k <= 11; ++k) {
        const auto& r = v[k];
        std::printf("criterion %2d: %s - %s\n", k, r.ok ? "PASS" : "FAIL", r.detail.c_str());
        failed += r.ok ? 0 : 1;
    }
    std::printf("%d/11 criteria passed\n", 11 - failed);
    return failed == 0 ? 0 : 1;
}
