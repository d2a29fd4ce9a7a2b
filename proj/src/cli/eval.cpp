#include <cstdlib>
#include <functional>
#include <ostream>
#include <sstream>

#include "hopw/cli/run.hpp"
#include "hopw/errors.hpp"

namespace hopw::cli {

namespace {

int parse_axis(const std::string& s)
{
    if (s == "x" || s == "0") return 0;
    if (s == "y" || s == "1") return 1;
    if (s == "z" || s == "2") return 2;
    throw UsageError("--grid: axis must be x, y or z, got '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(item);
    return out;
}

long flag_int(const std::map<std::string, std::string>& flags, const std::string& name)
{
    const std::string& v = flags.at(name);
    char* end = nullptr;
    const long n = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0') throw UsageError("--" + name + ": expected an integer, got '" + v + "'");
    return n;
}

std::string vec_text(const Vec3& v)
{
    return format_real(v[0]) + ' ' + format_real(v[1]) + ' ' + format_real(v[2]);
}

struct GridRequest {
    GridSpec grid;
    bool auto_offset = false;
};

/// kind[:axis[:offset]], e.g. plane:y:0, cut:z:auto, line:x, radial.
GridRequest parse_grid(const std::string& text, double extent, int points)
{
    const auto parts = split(text, ':');
    if (parts.empty() || parts.size() > 3) throw UsageError("--grid: expected kind:axis:offset, got '" + text + "'");
    GridKind kind;
    try {
        kind = grid_kind_from_string(parts[0]);
    } catch (const ValidationError&) {
        throw UsageError("--grid: unknown kind '" + parts[0] + "'");
    }
    GridRequest req;
    switch (kind) {
    case GridKind::radial:
        if (parts.size() != 1) throw UsageError("--grid: radial takes no axis");
        req.grid = GridSpec::radial(0.0, extent, points);
        return req;
    case GridKind::line:
        if (parts.size() != 2) throw UsageError("--grid: expected line:axis");
        req.grid = GridSpec::line(parse_axis(parts[1]), -extent, extent, points);
        return req;
    case GridKind::plane:
    case GridKind::cut: break;
    }
    const int axis = parts.size() >= 2 ? parse_axis(parts[1]) : (kind == GridKind::cut ? 2 : 1);
    double offset = 0.0;
    if (parts.size() == 3) {
        if (parts[2] == "auto") {
            req.auto_offset = true;
        } else {
            char* end = nullptr;
            offset = std::strtod(parts[2].c_str(), &end);
            if (parts[2].empty() || *end != '\0') throw UsageError("--grid: bad offset '" + parts[2] + "'");
        }
    }
    req.grid = GridSpec::plane(axis, offset, extent, points, kind);
    return req;
}

DensityField sample_scalar(const GridSpec& grid, const std::function<cplx(const Vec3&)>& fn)
{
    DensityField f;
    f.grid = grid;
    f.values.resize(grid.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = std::norm(fn(grid.point(i)));
    return f;
}

std::vector<std::pair<std::string, std::string>> scalar_metadata(const PacketSpec& spec, double t)
{
    return {
        {"N", format_real(spec.energy())},
        {"r0", vec_text(spec.position())},
        {"p0", vec_text(spec.momentum())},
        {"T", format_real(2.0 * pi)},
        {"t", format_real(t)},
    };
}

void check_flags(const std::string& sub, const std::map<std::string, std::string>& flags,
                 std::initializer_list<const char*> allowed, std::initializer_list<const char*> required)
{
    for (const auto& [k, v] : flags) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw UsageError(sub + ": unexpected flag --" + k);
    }
    for (const char* r : required) {
        if (!flags.count(r)) throw UsageError(sub + ": missing required flag --" + std::string(r));
    }
}

} // namespace

void run_eval(const std::string& sub, const RunConfig& config, const std::map<std::string, std::string>& flags,
              std::ostream& out)
{
    if (sub == "packet" || sub == "density") {
        check_flags(sub, flags, {"t", "grid"}, {});
    } else if (sub == "partialwave") {
        check_flags(sub, flags, {"l", "m", "t", "grid"}, {"l"});
    } else if (sub == "coeffs") {
        check_flags(sub, flags, {}, {});
    } else if (sub == "spin") {
        check_flags(sub, flags, {"t", "grid", "axis"}, {});
    } else if (sub == "norm") {
        check_flags(sub, flags, {"t"}, {});
    } else {
        throw UsageError("unknown eval subcommand '" + sub + "'");
    }
    config.validate();

    const PacketSpec spec = resolve_packet(config);
    const double extent = resolve_extent(config, spec);
    const double t = flags.count("t") ? parse_time(flags.at("t"), config.kappa) : 0.0;
    const std::string grid_text = flags.count("grid") ? flags.at("grid") : "plane:y:0";
    const GridRequest req = parse_grid(grid_text, extent, config.grid_points);

    RunManifest manifest("eval " + sub, config);
    manifest.set_derived("N", format_real(spec.energy()));
    manifest.set_derived("r0", format_real(norm(spec.position())));
    manifest.set_derived("T", format_real(2.0 * pi));
    manifest.set_derived("T_ls", format_real(2.0 * pi / config.kappa));
    manifest.set_derived("t", format_real(t));
    try {
        if (sub == "packet") {
            if (req.auto_offset) throw UsageError("--grid: auto offsets need a spinor evaluation");
            DensityField f = sample_scalar(req.grid, [&](const Vec3& r) { return gaussian_packet(spec, r, t); });
            f.metadata = scalar_metadata(spec, t);
            f.metadata.emplace_back("quantity", "|psi|^2 of the coherent packet");
            manifest.emit("packet.dat", f);
        } else if (sub == "partialwave") {
            if (req.auto_offset) throw UsageError("--grid: auto offsets need a spinor evaluation");
            const int l = int(flag_int(flags, "l"));
            const int m = flags.count("m") ? int(flag_int(flags, "m")) : 0;
            if (l < 0 || std::abs(m) > l) throw IndexError("partial wave needs l >= 0 and |m| <= l");
            DensityField f =
                sample_scalar(req.grid, [&](const Vec3& r) { return partial_wave(WaveIndex{l, m}, spec, r, t); });
            f.metadata = scalar_metadata(spec, t);
            f.metadata.emplace_back("l", std::to_string(l));
            f.metadata.emplace_back("m", std::to_string(m));
            f.metadata.emplace_back("quantity", "|psi_l^m|^2");
            manifest.emit("partialwave_l" + std::to_string(l) + "_m" + std::to_string(m) + ".dat", f);
        } else if (sub == "coeffs") {
            const int lmax = resolve_lmax(config, spec);
            manifest.set_derived("lmax", std::to_string(lmax));
            const CoefficientTable table = coefficients(spec, lmax);
            std::ostringstream os;
            os << "# N: " << format_real(spec.energy()) << '\n';
            os << "# lmax: " << lmax << '\n';
            os << "# columns: l m re im abs\n";
            for (int l = 0; l <= lmax; ++l) {
                for (int m = -l; m <= l; ++m) {
                    const cplx c = table(l, m);
                    if (c == cplx(0.0)) continue;
                    os << l << ' ' << m << ' ' << format_real(c.real()) << ' ' << format_real(c.imag()) << ' '
                       << format_real(std::abs(c)) << '\n';
                }
            }
            manifest.emit_text("coeffs.txt", os.str());
        } else {
            const int lmax = resolve_lmax(config, spec);
            manifest.set_derived("lmax", std::to_string(lmax));
            SpinOrbitParams params;
            params.kappa = config.kappa;
            params.frozen = config.frozen.value_or(false);
            const Vec3 spin_axis = resolve_spin_axis(config);
            const SpinorSystem system = SpinorSystem::prepare(spec, spin_axis, lmax, params);
            GridSpec grid = req.grid;
            if (req.auto_offset) {
                grid.offset = locate_cut_offset(system, grid.axis, t, extent, config.grid_points, config.threads);
                manifest.set_derived("grid_offset", format_real(grid.offset));
            }
            if (sub == "density") {
                manifest.emit("density.dat", density_grid(system, grid, t, config.threads));
            } else if (sub == "spin") {
                Vec3 axis = flags.count("axis") ? parse_vec3(flags.at("axis")) : spin_axis;
                if (norm(axis) == 0.0) throw ValidationError("--axis must be nonzero");
                axis = (1.0 / norm(axis)) * axis;
                const auto [minus, plus] = spin_density_pair(system, grid, t, axis, config.threads);
                manifest.emit("spin_minus.dat", minus);
                manifest.emit("spin_plus.dat", plus);
            } else {
                QuadratureSpec quad = QuadratureSpec::for_packet(system.table().spec());
                quad.radial_nodes = config.quad_nodes;
                const NormSpin ns = norm_and_spin(system, quad, t);
                char line[160];
                std::snprintf(line, sizeof line, "norm=%.17g sx=%.17g sy=%.17g sz=%.17g", ns.norm, ns.sigma[0],
                              ns.sigma[1], ns.sigma[2]);
                out << line << '\n';
                manifest.set_check("norm", format_real(ns.norm));
                manifest.set_check("sigma", vec_text(ns.sigma));
            }
        }
    } catch (const std::exception& e) {
        manifest.write("partial", e.what());
        throw;
    }
    manifest.write("complete");
}

} // namespace hopw::cli
