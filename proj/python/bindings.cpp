// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "swarmarray/array.hpp"
#include "swarmarray/connector.hpp"
#include "swarmarray/docking.hpp"
#include "swarmarray/errors.hpp"
#include "swarmarray/experiments.hpp"
#include "swarmarray/planner.hpp"

namespace py = pybind11;
using namespace swarmarray;

namespace {

UavPlatform platform_named(const std::string& name) {
    if (name == "reference") return UavPlatform::reference();
    if (name == "compact") return UavPlatform::compact();
    throw std::invalid_argument("platform must be 'reference' or 'compact'");
}

ArrayMethod method_named(const std::string& name) {
    if (name == "full") return ArrayMethod::full_mom;
    if (name == "multiplication") return ArrayMethod::multiplication;
    throw std::invalid_argument("method must be 'full' or 'multiplication'");
}

py::dict config_dict(const SwarmConfig& c) {
    py::dict d;
    d["frequency_hz"] = c.frequency.hertz();
    d["n_uavs"] = c.n_uavs;
    d["elements_per_uav"] = c.elements_per_uav;
    d["element_spacing_m"] = c.element_spacing;
    d["uav_spacing_m"] = c.uav_spacing;
    return d;
}

py::dict metrics_dict(const PatternMetrics& m) {
    py::dict d;
    d["peak_gain_dbi"] = m.peak_gain_dbi;
    d["peak_angle_deg"] = m.peak_angle_deg;
    d["hpbw_deg"] = m.hpbw_deg;
    d["sll_db"] = m.sll_db;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "UAV swarm phased-array antenna, docking connector and formation simulator";

    py::register_exception<InfeasibleError>(m, "InfeasibleError");
    py::register_exception<AmbiguousPeakError>(m, "AmbiguousPeakError");

    m.def(
        "steering_phases",
        [](int count, double spacing_m, double freq_hz, double steer_deg) {
            return steering_phases(LinearArrayLayout::uniform(count, spacing_m), Frequency(freq_hz), steer_deg)
                .phases_deg;
        },
        py::arg("count"), py::arg("spacing_m"), py::arg("freq_hz"), py::arg("steer_deg"),
        "Per-element phase lags in degrees, first element 0.");

    m.def(
        "array_factor_directivity_db",
        [](int count, double spacing_m, double freq_hz, double steer_deg) {
            const auto lay = LinearArrayLayout::uniform(count, spacing_m);
            const Frequency f(freq_hz);
            return array_factor_directivity_db(steering_phases(lay, f, steer_deg), lay, f);
        },
        py::arg("count"), py::arg("spacing_m"), py::arg("freq_hz"), py::arg("steer_deg") = 0.0);

    m.def(
        "dipole",
        [](double freq_hz, double radius_wavelengths, int segments) {
            const Frequency f(freq_hz);
            const std::vector<double> grid{0.0};
            const auto e = solve_element(WireAntenna::dipole(0.5 * f.wavelength(), radius_wavelengths * f.wavelength()),
                                         f, grid, segments);
            return py::make_tuple(e.impedance, e.pattern.gain_dbi(0));
        },
        py::arg("freq_hz") = 300e6, py::arg("radius_wavelengths") = 1e-5, py::arg("segments") = 61,
        "Half-wave dipole: (input impedance, broadside gain dBi).");

    m.def(
        "pattern",
        [](int n_uavs, double steer_deg, double freq_hz, const std::string& method, const std::string& platform) {
            const auto cfg = make_swarm_config(Frequency(freq_hz), platform_named(platform), n_uavs);
            const auto p = swarm_pattern(cfg, steer_deg, fine_pattern_grid(), method_named(method));
            std::vector<double> angles(p.angles().begin(), p.angles().end());
            py::dict d;
            d["angle_deg"] = angles;
            d["gain_dbi"] = p.gain_dbi();
            d["metrics"] = metrics_dict(pattern_metrics(p));
            return d;
        },
        py::arg("n_uavs"), py::arg("steer_deg") = 0.0, py::arg("freq_hz") = 300e6, py::arg("method") = "full",
        py::arg("platform") = "reference");

    m.def(
        "gain_vs_count",
        [](const std::vector<int>& counts, double steer_deg, double freq_hz, const std::string& method) {
            const auto base = make_swarm_config(Frequency(freq_hz), UavPlatform::reference(), 2);
            py::list out;
            for (const auto& r : gain_vs_count(base, counts, steer_deg, method_named(method))) {
                py::dict d = metrics_dict(r.metrics);
                d["n_uavs"] = r.n_uavs;
                out.append(d);
            }
            return out;
        },
        py::arg("counts"), py::arg("steer_deg") = 0.0, py::arg("freq_hz") = 300e6, py::arg("method") = "full");

    m.def(
        "connector_s12_db",
        [](const std::string& stage, double freq_hz, double d_mis_m) {
            const auto d = catalog_entry(stage_catalog(), stage_from_string(stage)).design;
            return magnitude_to_db(std::abs(model_s12_at(d, Frequency(freq_hz), d_mis_m).s21));
        },
        py::arg("stage"), py::arg("freq_hz") = 300e6, py::arg("d_mis_m") = 0.0);

    m.def(
        "misalignment_s12_db", [](double d_mis_m) { return misalignment_s12(d_mis_m); }, py::arg("d_mis_m"));

    m.def(
        "max_operating_frequency",
        [](double patch_length_m) {
            const auto e = max_operating_frequency(patch_length_m);
            return py::make_tuple(e.hertz, e.extrapolated);
        },
        py::arg("patch_length_m"), "(frequency Hz, extrapolated flag).");

    m.def(
        "plan_swarm",
        [](double target_gain_dbi, double freq_hz, const std::string& platform, double steer_deg) {
            return config_dict(plan_swarm(target_gain_dbi, steer_deg, Frequency(freq_hz), platform_named(platform)));
        },
        py::arg("target_gain_dbi"), py::arg("freq_hz") = 300e6, py::arg("platform") = "reference",
        py::arg("steer_deg") = 0.0);

    m.def(
        "validate_formation",
        [](double freq_hz, int n_uavs, const std::string& platform, std::optional<double> uav_spacing_m) {
            auto cfg = make_swarm_config(Frequency(freq_hz), platform_named(platform), n_uavs);
            if (uav_spacing_m) cfg.uav_spacing = *uav_spacing_m;
            std::vector<std::string> out;
            for (const auto& v : validate_formation(cfg)) out.push_back(v.constraint);
            return out;
        },
        py::arg("freq_hz"), py::arg("n_uavs") = 2, py::arg("platform") = "reference",
        py::arg("uav_spacing_m") = py::none(), "Names of violated constraints; empty when valid.");

    m.def("reference_timeline_scenario", [] { return format_scenario(reference_timeline_scenario()); });

    m.def(
        "run_docking",
        [](const std::string& scenario_text) {
            const auto r = run_scenario(parse_scenario(scenario_text));
            py::list events;
            for (const auto& e : r.events) events.append(py::make_tuple(e.time, e.uav_ids, e.type, e.payload));
            return py::make_tuple(events, r.max_docked_distance_drift);
        },
        py::arg("scenario_text"), "([(time_s, uav_ids, event, payload)], docked distance drift m).");

    m.def(
        "receiver_study",
        [](double steer_deg, double sigma_m, double duration_s, std::uint64_t seed) {
            const auto st = receiver_power_study(chamber_config(), standard_probes(), steer_deg, {sigma_m, 0.0, seed},
                                                 duration_s);
            py::dict d;
            std::vector<double> means, p2p;
            for (const auto& s : st.series) {
                means.push_back(s.mean_db);
                p2p.push_back(s.peak_to_peak_db);
            }
            d["mean_dbm"] = means;
            d["peak_to_peak_db"] = p2p;
            d["strongest"] = st.strongest();
            d["margin_db"] = st.margin_db();
            return d;
        },
        py::arg("steer_deg"), py::arg("sigma_m") = calibrated_jitter_sigma, py::arg("duration_s") = 10.0,
        py::arg("seed") = 1);

    m.def(
        "reproduce_all",
        [](const std::filesystem::path& out_dir, std::uint64_t seed) {
            ReproduceOptions o;
            o.seed = seed;
            ReproduceReport r;
            {
                py::gil_scoped_release release;
                r = reproduce_all(out_dir, o);
            }
            return py::make_tuple(r.all_passed(), r.summary());
        },
        py::arg("out_dir"), py::arg("seed") = 1, "(all checks passed, summary text).");

    m.attr("calibrated_jitter_sigma") = calibrated_jitter_sigma;
}
