#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "hopw/cli/run.hpp"
#include "hopw/errors.hpp"

namespace hopw::cli {

namespace {

struct Setup {
    PacketSpec spec;
    Vec3 spin_axis;
    int lmax = 0;
    SpinOrbitParams params;
    double extent = 0.0;
};

Setup make_setup(const RunConfig& config, bool frozen_default)
{
    Setup s;
    s.spec = resolve_packet(config);
    s.spin_axis = resolve_spin_axis(config);
    s.lmax = resolve_lmax(config, s.spec);
    s.params.kappa = config.kappa;
    s.params.frozen = config.frozen.value_or(frozen_default);
    s.params.validate();
    s.extent = resolve_extent(config, s.spec);
    return s;
}

void record_setup(RunManifest& m, const Setup& s)
{
    m.set_derived("N", format_real(s.spec.energy()));
    m.set_derived("r0", format_real(norm(s.spec.position())));
    m.set_derived("T", format_real(s.params.oscillator_period()));
    m.set_derived("T_ls", format_real(s.params.spin_orbit_period()));
    m.set_derived("lmax", std::to_string(s.lmax));
    m.set_derived("frozen", s.params.frozen ? "true" : "false");
    m.set_derived("grid_extent", format_real(s.extent));
}

std::string two_digits(std::size_t k)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%02zu", k);
    return buf;
}

std::string vec_text(const Vec3& v)
{
    return format_real(v[0]) + ' ' + format_real(v[1]) + ' ' + format_real(v[2]);
}

DensityField radial_field(int l, const PacketSpec& spec, double t, const GridSpec& grid)
{
    std::vector<double> r(grid.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = grid.u_at(int(i));
    DensityField f;
    f.grid = grid;
    f.values = radial_density(l, spec, t, r);
    f.metadata = {
        {"N", format_real(spec.energy())},
        {"r0", vec_text(spec.position())},
        {"p0", vec_text(spec.momentum())},
        {"T", format_real(2.0 * pi)},
        {"t", format_real(t)},
        {"l", std::to_string(l)},
        {"quantity", "|r psi_l|^2 integrated over directions"},
    };
    return f;
}

/// Maximum of the radial profile, refined by golden-section search around
/// the best sample.
std::pair<double, double> profile_peak(int l, const PacketSpec& spec, double t, const DensityField& field)
{
    const auto it = std::max_element(field.values.begin(), field.values.end());
    const int i = int(it - field.values.begin());
    const GridSpec& g = field.grid;
    double a = g.u_at(std::max(i - 1, 0));
    double b = g.u_at(std::min(i + 1, g.u_count - 1));
    auto f = [&](double r) {
        const double s[1] = {r};
        return radial_density(l, spec, t, s)[0];
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < 80 && b - a > 1e-12; ++k) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    const double r = 0.5 * (a + b);
    const double v = f(r);
    if (v < *it) return {g.u_at(i), *it};
    return {r, v};
}

void fig1(RunManifest& m, const RunConfig& config)
{
    RunConfig c = config;
    if (!c.N_set) c.N = 20.0;
    const PacketSpec spec = resolve_packet(c);
    const double T = 2.0 * pi;
    m.set_derived("N", format_real(spec.energy()));
    m.set_derived("r0", format_real(norm(spec.position())));
    m.set_derived("T", format_real(T));
    std::vector<double> times = c.resolved_times();
    if (times.empty()) {
        for (int k = 0; k < 30; ++k) times.push_back(0.5 * T * k / 29.0);
    }
    const GridSpec grid = GridSpec::radial(0.0, resolve_extent(c, spec), c.radial_points);
    double worst_asym = 0.0;
    for (int l = 0; l <= 7; ++l) {
        std::vector<DensityField> fields;
        for (std::size_t k = 0; k < times.size(); ++k) {
            fields.push_back(radial_field(l, spec, times[k], grid));
            m.emit("fig1/l" + std::to_string(l) + "_t" + two_digits(k) + ".dat", fields.back());
        }
        // Mirror pairs t and T/2 - t; only meaningful for the default list.
        if (config.times.empty()) {
            double top = 0.0;
            for (const auto& f : fields) top = std::max(top, *std::max_element(f.values.begin(), f.values.end()));
            for (std::size_t k = 0; k < fields.size(); ++k) {
                const auto& a = fields[k].values;
                const auto& b = fields[fields.size() - 1 - k].values;
                for (std::size_t i = 0; i < a.size(); ++i) worst_asym = std::max(worst_asym, std::abs(a[i] - b[i]) / top);
            }
        }
    }
    if (config.times.empty()) m.set_check("mirror_asymmetry_about_T/4", format_real(worst_asym));
    const double quarter = 0.25 * T;
    const auto p0 = profile_peak(0, spec, quarter, radial_field(0, spec, quarter, grid));
    const auto p7 = profile_peak(7, spec, quarter, radial_field(7, spec, quarter, grid));
    m.set_check("l0_peak_radius_at_T/4", format_real(p0.first));
    m.set_check("l7_peak_radius_at_T/4", format_real(p7.first));
    m.set_check("l7_repelled_from_origin", p0.first < 1.0 && p7.first > 1.0 ? "pass" : "fail");
}

void fig2(RunManifest& m, const RunConfig& config)
{
    RunConfig c = config;
    if (!c.N_set) c.N = 20.0;
    const PacketSpec spec = resolve_packet(c);
    m.set_derived("N", format_real(spec.energy()));
    m.set_derived("r0", format_real(norm(spec.position())));
    const GridSpec grid = GridSpec::radial(0.0, resolve_extent(c, spec), c.radial_points);
    std::vector<double> peaks;
    std::vector<std::vector<double>> columns;
    for (int l = 0; l <= 15; ++l) {
        const DensityField f = radial_field(l, spec, 0.0, grid);
        m.emit("fig2/l" + two_digits(std::size_t(l)) + ".dat", f);
        peaks.push_back(profile_peak(l, spec, 0.0, f).second);
        columns.push_back(f.values);
    }
    std::ostringstream table;
    table << "# r";
    for (int l = 0; l <= 15; ++l) table << " l" << l;
    table << '\n';
    for (int i = 0; i < grid.u_count; ++i) {
        table << format_real(grid.u_at(i));
        for (const auto& col : columns) table << ' ' << format_real(col[i]);
        table << '\n';
    }
    m.emit_text("fig2/profiles.txt", table.str());

    bool rising = true, falling = true;
    for (int l = 1; l <= 4; ++l) rising = rising && peaks[l] > peaks[l - 1];
    for (int l = 6; l <= 15; ++l) falling = falling && peaks[l] < peaks[l - 1];
    const int argmax = int(std::max_element(peaks.begin(), peaks.end()) - peaks.begin());
    std::string list;
    for (double p : peaks) list += (list.empty() ? "" : " ") + format_real(p);
    m.set_check("peak_intensities", list);
    m.set_check("increasing_l0_to_l4", rising ? "pass" : "fail");
    m.set_check("decreasing_l5_to_l15", falling ? "pass" : "fail");
    m.set_check("argmax_l", std::to_string(argmax));
}

std::vector<double> frames_or(const RunConfig& c, std::vector<double> fractions, double period)
{
    std::vector<double> t = c.resolved_times();
    if (!t.empty()) return t;
    for (double& f : fractions) f *= period;
    return fractions;
}

const std::vector<double> caption_fractions{0.0, 1.0 / 8, 2.0 / 8, 3.0 / 8, 15.0 / 32, 4.0 / 8};

void ring_checks(RunManifest& m, const std::string& prefix, const DensityField& f)
{
    const RingMetrics rm = ring_metrics(f);
    m.set_check(prefix + ".center", vec_text(rm.center));
    m.set_check(prefix + ".radius", format_real(rm.ring_radius));
    m.set_check(prefix + ".sphere", format_real(std::hypot(norm(rm.center), rm.ring_radius)));
}

void fig3(RunManifest& m, const RunConfig& config)
{
    const Setup s = make_setup(config, true);
    record_setup(m, s);
    const SpinorSystem system = SpinorSystem::prepare(s.spec, s.spin_axis, s.lmax, s.params);
    const auto times = frames_or(config, caption_fractions, s.params.spin_orbit_period());
    const GridSpec grid = GridSpec::plane(1, 0.0, s.extent, config.grid_points);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const DensityField f = density_grid(system, grid, times[k], config.threads);
        const std::string name = "frame_" + two_digits(k);
        m.emit("fig3/" + name + ".dat", f);
        ring_checks(m, name, f);
    }
}

void fig4(RunManifest& m, const RunConfig& config)
{
    const Setup s = make_setup(config, true);
    record_setup(m, s);
    const SpinorSystem system = SpinorSystem::prepare(s.spec, s.spin_axis, s.lmax, s.params);
    const auto times = frames_or(config, caption_fractions, s.params.spin_orbit_period());
    const double z0 = s.spec.position()[2];
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double z = locate_cut_offset(system, 2, times[k], s.extent, config.grid_points, config.threads);
        const GridSpec grid = GridSpec::plane(2, z, s.extent, config.grid_points, GridKind::cut);
        const DensityField f = density_grid(system, grid, times[k], config.threads);
        const std::string name = "cut_" + two_digits(k);
        m.emit("fig4/" + name + ".dat", f);
        m.set_check(name + ".offset", format_real(z));
        m.set_check(name + ".offset_z0_cos_t", format_real(z0 * std::cos(times[k])));
        ring_checks(m, name, f);
    }
}

void fig5(RunManifest& m, const RunConfig& config)
{
    const Setup s = make_setup(config, true);
    record_setup(m, s);
    const SpinorSystem system = SpinorSystem::prepare(s.spec, s.spin_axis, s.lmax, s.params);
    std::vector<double> fractions;
    for (int k = 0; k <= 16; ++k) fractions.push_back(k / 32.0);
    const auto times = frames_or(config, fractions, s.params.spin_orbit_period());
    const GridSpec grid = GridSpec::plane(1, 0.0, s.extent, config.grid_points);
    QuadratureSpec quad = QuadratureSpec::for_packet(system.table().spec());
    quad.radial_nodes = config.quad_nodes;
    const double r0 = norm(s.spec.position());
    std::ostringstream table;
    table << "# t_over_Tls t cx cy cz ring_radius sphere sphere_over_r0 peak norm sx sy sz\n";
    double worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const DensityField f = density_grid(system, grid, times[k], config.threads);
        m.emit("fig5/frame_" + two_digits(k) + ".dat", f);
        const RingMetrics rm = ring_metrics(f);
        const double sphere = std::hypot(norm(rm.center), rm.ring_radius);
        worst = std::max(worst, std::abs(sphere / r0 - 1.0));
        const NormSpin ns = norm_and_spin(system, quad, times[k]);
        table << format_real(times[k] / s.params.spin_orbit_period()) << ' ' << format_real(times[k]) << ' '
              << vec_text(rm.center) << ' ' << format_real(rm.ring_radius) << ' ' << format_real(sphere) << ' '
              << format_real(sphere / r0) << ' ' << format_real(rm.peak) << ' ' << format_real(ns.norm) << ' '
              << vec_text(ns.sigma) << '\n';
    }
    m.emit_text("fig5/rings.txt", table.str());
    m.set_check("max_sphere_deviation", format_real(worst));
}

void fig6(RunManifest& m, const RunConfig& config)
{
    RunConfig c = config;
    if (!c.N_set) c.N = 4.0;
    if (!c.geometry_set) c.geometry = Geometry::axial_x;
    const Setup s = make_setup(c, true);
    record_setup(m, s);
    const SpinorSystem system = SpinorSystem::prepare(s.spec, s.spin_axis, s.lmax, s.params);
    const auto times = frames_or(c, {0.0, 1.0 / 8, 2.0 / 8, 3.0 / 8, 4.0 / 8}, s.params.spin_orbit_period());
    const GridSpec grid = GridSpec::plane(1, 0.0, s.extent, c.grid_points);
    double worst_sum = 0.0;
    double minus_at_start = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const DensityField total = density_grid(system, grid, times[k], c.threads);
        const auto [minus, plus] = spin_density_pair(system, grid, times[k], s.spin_axis, c.threads);
        const std::string stem = "fig6/frame_" + two_digits(k);
        m.emit(stem + "_minus.dat", minus);
        m.emit(stem + "_plus.dat", plus);
        m.emit(stem + "_total.dat", total);
        for (std::size_t i = 0; i < total.values.size(); ++i) {
            worst_sum = std::max(worst_sum, std::abs(minus.values[i] + plus.values[i] - total.values[i]));
        }
        if (k == 0) minus_at_start = *std::max_element(minus.values.begin(), minus.values.end());
    }
    m.set_check("max_abs_sum_rule_violation", format_real(worst_sum));
    m.set_check("max_minus_density_first_frame", format_real(minus_at_start));
}

} // namespace

double locate_cut_offset(const SpinorSystem& system, int axis, double t, double extent, int points, unsigned threads)
{
    if (axis < 0 || axis > 2) throw ValidationError("axis must be x, y or z");
    // Sample the plane spanned by `axis` and the next coordinate, weight each
    // sample by its distance from the axis (cylindrical volume element) and
    // take the heaviest row.
    const int normal = (axis + 2) % 3;
    const GridSpec grid = GridSpec::plane(normal, 0.0, extent, points);
    const DensityField f = density_grid(system, grid, t, threads);
    const auto [a, b] = grid.in_plane_axes();
    const bool axis_is_u = a == axis;
    const int rows = axis_is_u ? grid.u_count : grid.v_count;
    std::vector<double> marginal(rows, 0.0);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const Vec3 p = grid.point(i);
        const int iu = int(i % std::size_t(grid.u_count));
        const int iv = int(i / std::size_t(grid.u_count));
        marginal[axis_is_u ? iu : iv] += f.values[i] * std::abs(p[axis_is_u ? b : a]);
    }
    const int best = int(std::max_element(marginal.begin(), marginal.end()) - marginal.begin());
    return axis_is_u ? grid.u_at(best) : grid.v_at(best);
}

void run_figure(const std::string& fig, const RunConfig& config)
{
    using Fn = void (*)(RunManifest&, const RunConfig&);
    Fn fn = nullptr;
    if (fig == "fig1") fn = fig1;
    else if (fig == "fig2") fn = fig2;
    else if (fig == "fig3") fn = fig3;
    else if (fig == "fig4") fn = fig4;
    else if (fig == "fig5") fn = fig5;
    else if (fig == "fig6") fn = fig6;
    else throw UsageError("unknown figure '" + fig + "'");
    config.validate();
    RunManifest manifest(fig, config);
    try {
        fn(manifest, config);
    } catch (const std::exception& e) {
        manifest.write("partial", e.what());
        throw;
    }
    if (!manifest.verify()) {
        manifest.write("partial", "checksum mismatch after writing");
        throw NumericalError("emitted files changed during the run");
    }
    manifest.write("complete");
}

} // namespace hopw::cli
