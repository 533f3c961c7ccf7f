// SPDX-License-Identifier: Apache-2.0
//
// swarmarray: command-line front end. Every subcommand writes CSV with a
// header row to --out (default stdout); --plot-script writes a gnuplot file
// referencing that CSV.
#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>

#include "swarmarray/array.hpp"
#include "swarmarray/config.hpp"
#include "swarmarray/connector.hpp"
#include "swarmarray/docking.hpp"
#include "swarmarray/experiments.hpp"
#include "swarmarray/io.hpp"
#include "swarmarray/planner.hpp"

using namespace swarmarray;

namespace {

struct Output {
    std::string out;
    std::string plot;

    void attach(CLI::App* cmd) {
        cmd->add_option("--out", out, "CSV output file (default stdout)");
        cmd->add_option("--plot-script", plot, "Write a gnuplot command file for the CSV")->needs("--out");
    }
    void emit(const std::string& csv) const {
        if (out.empty()) {
            std::cout << csv;
            return;
        }
        write_text(out, csv);
        if (!plot.empty()) {
            const std::vector<std::filesystem::path> files{std::filesystem::path(out).filename()};
            write_text(plot, gnuplot_script(files));
        }
    }
};

UavPlatform platform_named(const std::string& name) {
    if (name == "reference") return UavPlatform::reference();
    if (name == "compact") return UavPlatform::compact();
    throw CLI::ValidationError("--platform", "expected 'reference' or 'compact'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV swarm phased-array and docking-connector toolkit"};
    app.require_subcommand(1);
    std::string config_file;
    app.add_option("--config", config_file, "JSON run configuration")->check(CLI::ExistingFile);

    auto config = [&] { return config_file.empty() ? default_run_config() : load_run_config(config_file); };

    // pattern
    auto* pattern = app.add_subcommand("pattern", "Steered H-plane pattern of the swarm array");
    Output pattern_out;
    std::optional<int> n_uavs;
    std::optional<double> steer, freq;
    std::string method = "full";
    pattern->add_option("--n-uavs", n_uavs, "Number of UAVs")->check(CLI::Range(1, 16));
    pattern->add_option("--steer-deg", steer, "Steering angle, deg")->check(CLI::Range(-90.0, 90.0));
    pattern->add_option("--freq-hz", freq, "Frequency, Hz")->check(CLI::PositiveNumber);
    pattern->add_option("--method", method, "full or multiplication")
        ->check(CLI::IsMember({"full", "multiplication"}));
    pattern_out.attach(pattern);
    pattern->callback([&] {
        RunConfig rc = config();
        if (freq || n_uavs) {
            const auto f = Frequency(freq.value_or(rc.swarm.frequency.hertz()));
            rc.swarm = make_swarm_config(f, rc.swarm.platform, n_uavs.value_or(rc.swarm.n_uavs));
        }
        const auto p = swarm_pattern(rc.swarm, steer.value_or(rc.steer_deg), default_pattern_grid(),
                                     method == "full" ? ArrayMethod::full_mom : ArrayMethod::multiplication);
        pattern_out.emit(pattern_csv(p));
    });

    // gain-sweep
    auto* sweep = app.add_subcommand("gain-sweep", "Peak gain, HPBW and SLL versus UAV count");
    Output sweep_out;
    std::vector<int> counts{2, 3, 4, 5, 6, 7};
    std::optional<double> sweep_steer;
    sweep->add_option("--counts", counts, "UAV counts")->delimiter(',');
    sweep->add_option("--steer-deg", sweep_steer, "Steering angle, deg")->check(CLI::Range(-90.0, 90.0));
    sweep_out.attach(sweep);
    sweep->callback([&] {
        const RunConfig rc = config();
        const auto rows = gain_vs_count(rc.swarm, counts, sweep_steer.value_or(rc.steer_deg));
        sweep_out.emit(gain_table_csv(rows));
    });

    // connector
    auto* conn = app.add_subcommand("connector", "Docking connector surrogate");
    Output conn_out;
    std::string stage;
    bool misalign = false;
    std::optional<double> max_freq_mm;
    auto* o_stage = conn->add_option("--stage", stage, "square, stage1, stage2, stage3 or final: S-parameter sweep");
    auto* o_mis = conn->add_flag("--misalign-sweep", misalign, "S12 of the final design versus lateral offset");
    auto* o_max = conn->add_option("--max-freq", max_freq_mm, "Highest usable frequency for patch length L (mm)")
                      ->check(CLI::PositiveNumber);
    o_stage->excludes(o_mis)->excludes(o_max);
    o_mis->excludes(o_max);
    conn_out.attach(conn);
    conn->callback([&] {
        if (!stage.empty()) {
            const auto design = catalog_entry(stage_catalog(), stage_from_string(stage)).design;
            conn_out.emit(sweep_csv(design, angle_grid(200e6, 400e6, 1e6)));
        } else if (misalign) {
            CsvTable t({"d_mis_mm", "s12_db"});
            for (int i = 0; i <= 20; ++i) t.add_row({fmt_fixed(i * 0.5, 1), fmt_fixed(misalignment_s12(i * 0.5e-3), 4)});
            conn_out.emit(t.str());
        } else if (max_freq_mm) {
            const auto est = max_operating_frequency(*max_freq_mm * 1e-3);
            if (!est.warning.empty()) std::cerr << "warning: " << est.warning << '\n';
            CsvTable t({"patch_length_mm", "max_freq_hz", "extrapolated"});
            t.add_row({fmt_fixed(*max_freq_mm, 3), fmt_fixed(est.hertz, 0), est.extrapolated ? "true" : "false"});
            conn_out.emit(t.str());
        } else {
            conn_out.emit(golden_stage_csv(stage_catalog()));
        }
    });

    // plan
    auto* plan = app.add_subcommand("plan", "Smallest swarm reaching a target gain");
    Output plan_out;
    double target = 0.0, plan_freq = 300e6, plan_steer = 0.0;
    std::string platform = "reference";
    bool report = false;
    plan->add_option("--target-gain", target, "Target gain, dBi")->required();
    plan->add_option("--freq-hz", plan_freq, "Frequency, Hz")->check(CLI::PositiveNumber);
    plan->add_option("--platform", platform, "reference or compact")
        ->check(CLI::IsMember({"reference", "compact"}));
    plan->add_option("--steer-deg", plan_steer, "Steering angle, deg")->check(CLI::Range(-90.0, 90.0));
    plan->add_flag("--report", report, "Also print a key: value report to stderr");
    plan_out.attach(plan);
    plan->callback([&] {
        const auto cfg = plan_swarm(target, plan_steer, Frequency(plan_freq), platform_named(platform));
        if (report) std::cerr << plan_report(cfg, plan_steer);
        plan_out.emit(plan_csv_header() + '\n' + plan_csv_row(cfg, plan_steer) + '\n');
    });

    // dock
    auto* dock = app.add_subcommand("dock", "Run a docking scenario and log phase events");
    Output dock_out;
    std::string scenario;
    dock->add_option("--scenario", scenario, "Scenario script")->required()->check(CLI::ExistingFile);
    dock_out.attach(dock);
    dock->callback([&] {
        const auto r = run_scenario(parse_scenario(read_text(scenario)));
        dock_out.emit(event_log_csv(r.events));
    });

    // rx-study
    auto* rx = app.add_subcommand("rx-study", "Received power at three probes under flight jitter");
    Output rx_out;
    std::optional<double> rx_steer, sigma;
    double duration = 10.0;
    rx->add_option("--steer-deg", rx_steer, "Steering angle, deg")->check(CLI::Range(-60.0, 60.0));
    rx->add_option("--sigma", sigma, "Positional jitter per axis, m")->check(CLI::NonNegativeNumber);
    rx->add_option("--duration", duration, "Seconds")->check(CLI::PositiveNumber);
    rx_out.attach(rx);
    rx->callback([&] {
        const RunConfig rc = config();
        FlightJitterModel j = rc.jitter;
        if (sigma) j.sigma = *sigma;
        const auto cfg = config_file.empty() ? chamber_config() : rc.swarm;
        const std::vector<ReceiverStudy> s{
            receiver_power_study(cfg, standard_probes(), rx_steer.value_or(rc.steer_deg), j, duration)};
        rx_out.emit(receiver_study_csv(s));
    });

    // reproduce-all
    auto* rep = app.add_subcommand("reproduce-all", "Run every study and write CSVs, plots.gp and summary.txt");
    std::string out_dir;
    std::string golden;
    ReproduceOptions ropt;
    rep->add_option("--out", out_dir, "Output directory")->required();
    rep->add_option("--seed", ropt.seed, "Jitter seed");
    rep->add_option("--golden", golden, "Replacement connector golden table")->check(CLI::ExistingFile);
    int rep_status = 0;
    rep->callback([&] {
        if (!golden.empty()) ropt.golden_stage_file = golden;
        const auto r = reproduce_all(out_dir, ropt);
        std::cout << r.summary();
        rep_status = r.all_passed() ? 0 : 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return rep_status;
}
