// SPDX-License-Identifier: Apache-2.0
#include "swarmarray/array.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "swarmarray/errors.hpp"
#include "swarmarray/io.hpp"

namespace swarmarray {

LinearArrayLayout LinearArrayLayout::uniform(int count, double spacing) {
    LinearArrayLayout l{count, spacing};
    l.validate();
    return l;
}

std::vector<double> LinearArrayLayout::positions() const {
    std::vector<double> p(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) p[n] = n * spacing;
    return p;
}

void LinearArrayLayout::validate() const {
    if (count < 1) throw std::invalid_argument("array needs at least one element");
    if (count > 1 && !(spacing > 0.0)) throw std::invalid_argument("element spacing must be positive");
}

SteeringCommand steering_phases(const LinearArrayLayout& layout, Frequency f, double theta_steer_plot_deg) {
    layout.validate();
    if (!(std::abs(theta_steer_plot_deg) <= 90.0)) {
        throw std::invalid_argument("steering angle must lie within [-90, 90] deg");
    }
    // cos(psi) = sin(theta) for |theta| <= 90; sin keeps broadside exactly zero.
    const double cos_psi = std::sin(deg_to_rad(theta_steer_plot_deg));
    const double kd = f.wavenumber() * layout.spacing;
    SteeringCommand cmd;
    cmd.theta_steer_deg = theta_steer_plot_deg;
    cmd.phases_deg.resize(static_cast<std::size_t>(layout.count));
    for (int n = 0; n < layout.count; ++n) cmd.phases_deg[n] = rad_to_deg(n * kd * cos_psi);
    return cmd;
}

ArrayFactor array_factor(const SteeringCommand& command, const LinearArrayLayout& layout, Frequency f,
                         std::span<const double> angles_deg) {
    layout.validate();
    if (command.phases_deg.size() != static_cast<std::size_t>(layout.count)) {
        throw std::invalid_argument("one phase per element required");
    }
    if (angles_deg.empty()) throw std::invalid_argument("array factor needs a non-empty angle grid");
    const double kd = f.wavenumber() * layout.spacing;
    ArrayFactor af;
    af.angles_deg.assign(angles_deg.begin(), angles_deg.end());
    af.samples.resize(angles_deg.size());
    af.weight_power = layout.count;
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        // cos(psi) of the observation direction equals sin(theta_plot) on the whole circle.
        const double u = kd * std::sin(deg_to_rad(angles_deg[i]));
        complex sum = 0.0;
        for (int n = 0; n < layout.count; ++n) sum += std::polar(1.0, n * u - deg_to_rad(command.phases_deg[n]));
        af.samples[i] = sum;
    }
    return af;
}

double array_factor_directivity_db(const SteeringCommand& command, const LinearArrayLayout& layout, Frequency f) {
    layout.validate();
    const int n = layout.count;
    const double k = f.wavenumber();
    // (1/4pi) * integral |AF|^2 dOmega = sum_mn w_m conj(w_n) sinc(k (x_m - x_n))
    double mean = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double x = k * (a - b) * layout.spacing;
            const double sinc = a == b ? 1.0 : std::sin(x) / x;
            mean += std::cos(deg_to_rad(command.phases_deg[a] - command.phases_deg[b])) * sinc;
        }
    }
    double peak = 0.0;
    const double kd = k * layout.spacing;
    for (int i = 0; i <= 72000; ++i) {
        const double u = kd * std::cos(pi * i / 72000.0);
        complex sum = 0.0;
        for (int m = 0; m < n; ++m) sum += std::polar(1.0, m * u - deg_to_rad(command.phases_deg[m]));
        peak = std::max(peak, std::norm(sum));
    }
    return power_to_db(peak / mean);
}

RadiationPattern total_pattern(const RadiationPattern& element, const ArrayFactor& af) {
    if (element.size() != af.samples.size()) throw std::invalid_argument("element and array-factor grids differ");
    for (std::size_t i = 0; i < element.size(); ++i) {
        if (std::abs(element.angles()[i] - af.angles_deg[i]) > 1e-9) {
            throw std::invalid_argument("element and array-factor grids differ");
        }
    }
    std::vector<complex> field(element.size());
    for (std::size_t i = 0; i < field.size(); ++i) field[i] = element.field()[i] * af.samples[i];
    return {std::vector<double>(element.angles().begin(), element.angles().end()), std::move(field),
            element.input_power() * af.weight_power};
}

namespace {

// Ring or segment view of a pattern grid. A full-circle grid whose last angle
// repeats the first is treated as periodic without the duplicate.
struct GridView {
    std::vector<double> g;
    std::vector<double> angles;
    bool circular = false;
    double step = 0.0;

    std::size_t size() const { return g.size(); }
    std::ptrdiff_t wrap(std::ptrdiff_t i) const {
        const auto n = static_cast<std::ptrdiff_t>(g.size());
        return ((i % n) + n) % n;
    }
    bool valid(std::ptrdiff_t i) const {
        return circular || (i >= 0 && i < static_cast<std::ptrdiff_t>(g.size()));
    }
    double at(std::ptrdiff_t i) const { return g[static_cast<std::size_t>(wrap(i))]; }
};

GridView view_of(const RadiationPattern& p) {
    GridView v;
    v.g = p.gain_dbi();
    v.angles.assign(p.angles().begin(), p.angles().end());
    v.step = p.step();
    if (p.size() > 2 && std::abs(p.angles().back() - p.angles().front() - 360.0) < 1e-9) {
        v.circular = true;
        v.g.pop_back();
        v.angles.pop_back();
    }
    return v;
}

// Offset (in samples) of the -3 dB crossing walking from the peak in direction dir.
double half_power_offset(const GridView& v, std::ptrdiff_t peak, int dir, double level) {
    const auto n = static_cast<std::ptrdiff_t>(v.size());
    for (std::ptrdiff_t s = 1; s < n; ++s) {
        const std::ptrdiff_t j = peak + dir * s;
        if (!v.valid(j)) break;
        if (v.at(j) < level) {
            const double prev = v.at(j - dir);
            const double cur = v.at(j);
            const double t = std::isfinite(cur) ? (prev - level) / (prev - cur) : 0.0;
            return static_cast<double>(s - 1) + t;
        }
    }
    return std::numeric_limits<double>::infinity();
}

std::ptrdiff_t first_null(const GridView& v, std::ptrdiff_t peak, int dir) {
    const auto n = static_cast<std::ptrdiff_t>(v.size());
    std::ptrdiff_t j = peak;
    for (std::ptrdiff_t s = 1; s < n; ++s) {
        const std::ptrdiff_t next = peak + dir * s;
        if (!v.valid(next) || v.at(next) > v.at(j)) break;
        j = next;
    }
    return j;
}

}  // namespace

PatternMetrics pattern_metrics(const RadiationPattern& pattern) {
    const GridView v = view_of(pattern);
    const auto n = static_cast<std::ptrdiff_t>(v.size());
    const auto peak = static_cast<std::ptrdiff_t>(std::max_element(v.g.begin(), v.g.end()) - v.g.begin());
    const double gmax = v.g[static_cast<std::size_t>(peak)];

    std::vector<bool> near(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) near[i] = v.g[i] >= gmax - 0.01;
    if (std::all_of(near.begin(), near.end(), [](bool b) { return b; })) {
        throw AmbiguousPeakError("pattern is flat: no unique peak within 0.01 dB");
    }
    int runs = 0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const bool prev = v.circular ? near[static_cast<std::size_t>(v.wrap(i - 1))] : (i > 0 && near[i - 1]);
        if (near[i] && !prev) ++runs;
    }
    if (runs != 1) throw AmbiguousPeakError("pattern has several peaks within 0.01 dB of the maximum");

    PatternMetrics m;
    m.peak_gain_dbi = gmax;
    m.peak_angle_deg = v.angles[static_cast<std::size_t>(peak)];
    if (v.valid(peak - 1) && v.valid(peak + 1)) {
        const double gl = v.at(peak - 1), gr = v.at(peak + 1);
        const double den = gl - 2.0 * gmax + gr;
        if (std::isfinite(gl) && std::isfinite(gr) && den < 0.0) {
            const double off = std::clamp(0.5 * (gl - gr) / den, -0.5, 0.5);
            m.peak_angle_deg = wrap_degrees(m.peak_angle_deg + off * v.step);
            m.peak_gain_dbi = gmax - 0.25 * (gl - gr) * off;
        }
    }

    const double level = gmax + power_to_db(0.5);
    m.hpbw_deg = (half_power_offset(v, peak, -1, level) + half_power_offset(v, peak, +1, level)) * v.step;

    const std::ptrdiff_t left = first_null(v, peak, -1);
    const std::ptrdiff_t right = first_null(v, peak, +1);
    double side = -std::numeric_limits<double>::infinity();
    const std::ptrdiff_t width = right - left + 1;
    if (width < n) {
        if (v.circular) {
            for (std::ptrdiff_t s = right + 1; s < left + n; ++s) side = std::max(side, v.at(s));
        } else {
            for (std::ptrdiff_t i = 0; i < n; ++i) {
                if (i < left || i > right) side = std::max(side, v.g[static_cast<std::size_t>(i)]);
            }
        }
    }
    m.sll_db = side - gmax;
    return m;
}

std::string pattern_csv(const RadiationPattern& pattern) {
    CsvTable t({"angle_deg", "gain_dbi", "phase_deg"});
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        t.add_row({fmt_fixed(pattern.angles()[i], 2), fmt_fixed(pattern.gain_dbi(i), 4),
                   fmt_fixed(pattern.phase_deg(i), 2)});
    }
    return t.str();
}

std::vector<double> fine_pattern_grid() { return angle_grid(-180.0, 180.0, 0.25); }

RadiationPattern swarm_pattern(const SwarmConfig& config, double theta_steer_deg, std::span<const double> angles_deg,
                               ArrayMethod method) {
    const auto layout = LinearArrayLayout::uniform(config.total_elements(), config.element_spacing);
    const auto cmd = steering_phases(layout, config.frequency, theta_steer_deg);
    if (method == ArrayMethod::full_mom) {
        const auto elements = config.placed_elements();
        return solve_full_array(elements, cmd.phases_deg, config.frequency, angles_deg);
    }
    const auto element = solve_element(config.element, config.frequency, angles_deg);
    return total_pattern(element.pattern, array_factor(cmd, layout, config.frequency, angles_deg));
}

std::vector<GainRow> gain_vs_count(const SwarmConfig& base, std::span<const int> counts, double theta_steer_deg,
                                   ArrayMethod method) {
    const auto grid = fine_pattern_grid();
    std::vector<GainRow> rows;
    rows.reserve(counts.size());
    for (int count : counts) {
        if (count < 2 || count > 16) throw std::invalid_argument("UAV counts must lie within [2, 16]");
        SwarmConfig c = base;
        c.n_uavs = count;
        if (const auto v = validate_formation(c); !v.empty()) {
            throw InfeasibleError("formation with " + std::to_string(count) + " UAVs violates: " + v.front().constraint);
        }
        rows.push_back({count, theta_steer_deg, pattern_metrics(swarm_pattern(c, theta_steer_deg, grid, method))});
    }
    return rows;
}

std::string gain_table_csv(std::span<const GainRow> rows) {
    CsvTable t({"n_uavs", "theta_steer_deg", "gain_dbi", "hpbw_deg", "sll_db"});
    for (const auto& r : rows) {
        t.add_row({std::to_string(r.n_uavs), fmt_fixed(r.theta_steer_deg, 2), fmt_fixed(r.metrics.peak_gain_dbi, 4),
                   fmt_fixed(r.metrics.hpbw_deg, 3), fmt_fixed(r.metrics.sll_db, 3)});
    }
    return t.str();
}

}  // namespace swarmarray
