#include "hopw/observables.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "hopw/errors.hpp"
#include "hopw/quadrature.hpp"
#include "hopw/specfun.hpp"

namespace hopw {

const char* to_string(GridKind kind)
{
    switch (kind) {
    case GridKind::plane: return "plane";
    case GridKind::cut: return "cut";
    case GridKind::line: return "line";
    case GridKind::radial: return "radial";
    }
    return "plane";
}

GridKind grid_kind_from_string(const std::string& name)
{
    if (name == "plane") return GridKind::plane;
    if (name == "cut") return GridKind::cut;
    if (name == "line") return GridKind::line;
    if (name == "radial") return GridKind::radial;
    throw ValidationError("unknown grid kind '" + name + "'");
}

GridSpec GridSpec::plane(int normal_axis, double offset, double half_extent, int count, GridKind kind)
{
    GridSpec g;
    g.kind = kind;
    g.axis = normal_axis;
    g.offset = offset;
    g.u_min = g.v_min = -half_extent;
    g.u_max = g.v_max = half_extent;
    g.u_count = g.v_count = count;
    g.validate();
    return g;
}

GridSpec GridSpec::line(int axis, double min, double max, int count)
{
    GridSpec g;
    g.kind = GridKind::line;
    g.axis = axis;
    g.u_min = min;
    g.u_max = max;
    g.u_count = count;
    g.v_count = 1;
    g.v_min = g.v_max = 0.0;
    g.validate();
    return g;
}

GridSpec GridSpec::radial(double min, double max, int count)
{
    GridSpec g = line(0, min, max, count);
    g.kind = GridKind::radial;
    return g;
}

void GridSpec::validate() const
{
    if (axis < 0 || axis > 2) throw ValidationError("grid axis must be 0, 1 or 2");
    const bool planar = kind == GridKind::plane || kind == GridKind::cut;
    if (u_count < 2 || (planar && v_count < 2)) throw ValidationError("grid counts must be at least 2");
    if (!std::isfinite(u_min) || !std::isfinite(u_max) || !(u_min < u_max)) {
        throw ValidationError("grid u range must be finite with min < max");
    }
    if (planar && (!std::isfinite(v_min) || !std::isfinite(v_max) || !(v_min < v_max))) {
        throw ValidationError("grid v range must be finite with min < max");
    }
    if (!std::isfinite(offset)) throw ValidationError("grid offset must be finite");
}

std::size_t GridSpec::size() const
{
    const bool planar = kind == GridKind::plane || kind == GridKind::cut;
    return std::size_t(u_count) * std::size_t(planar ? v_count : 1);
}

std::pair<int, int> GridSpec::in_plane_axes() const
{
    switch (axis) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
    }
}

double GridSpec::u_at(int i) const { return u_min + (u_max - u_min) * double(i) / double(u_count - 1); }
double GridSpec::v_at(int j) const { return v_min + (v_max - v_min) * double(j) / double(v_count - 1); }

Vec3 GridSpec::point(std::size_t index) const
{
    Vec3 p{0, 0, 0};
    const int i = int(index % std::size_t(u_count));
    const int j = int(index / std::size_t(u_count));
    switch (kind) {
    case GridKind::plane:
    case GridKind::cut: {
        const auto [a, b] = in_plane_axes();
        p[axis] = offset;
        p[a] = u_at(i);
        p[b] = v_at(j);
        break;
    }
    case GridKind::line: p[axis] = u_at(i); break;
    case GridKind::radial: p[0] = u_at(i); break;
    }
    return p;
}

std::string format_real(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_dataset(std::ostream& os, const DensityField& field)
{
    const GridSpec& g = field.grid;
    os << "# hopw density field\n";
    os << "# grid.kind: " << to_string(g.kind) << '\n';
    os << "# grid.axis: " << g.axis << '\n';
    os << "# grid.offset: " << format_real(g.offset) << '\n';
    os << "# grid.u: " << format_real(g.u_min) << ' ' << format_real(g.u_max) << ' ' << g.u_count << '\n';
    os << "# grid.v: " << format_real(g.v_min) << ' ' << format_real(g.v_max) << ' ' << g.v_count << '\n';
    for (const auto& [key, value] : field.metadata) os << "# " << key << ": " << value << '\n';
    os << "# columns: x y z value\n";
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const Vec3 p = g.point(i);
        os << format_real(p[0]) << ' ' << format_real(p[1]) << ' ' << format_real(p[2]) << ' '
           << format_real(field.values[i]) << '\n';
    }
}

DensityField read_dataset(std::istream& is)
{
    DensityField field;
    std::map<std::string, std::string> header;
    std::string line;
    while (is.peek() == '#' && std::getline(is, line)) {
        const auto colon = line.find(": ");
        if (colon == std::string::npos) continue;
        const std::string key = line.substr(2, colon - 2);
        const std::string value = line.substr(colon + 2);
        if (key.rfind("grid.", 0) == 0) {
            header[key] = value;
        } else if (key != "columns") {
            field.metadata.emplace_back(key, value);
        }
    }
    try {
        GridSpec& g = field.grid;
        g.kind = grid_kind_from_string(header.at("grid.kind"));
        g.axis = std::stoi(header.at("grid.axis"));
        g.offset = std::stod(header.at("grid.offset"));
        std::istringstream u(header.at("grid.u"));
        u >> g.u_min >> g.u_max >> g.u_count;
        std::istringstream v(header.at("grid.v"));
        v >> g.v_min >> g.v_max >> g.v_count;
    } catch (const std::out_of_range&) {
        throw ValidationError("dataset header lacks grid geometry");
    }
    double x, y, z, value;
    while (is >> x >> y >> z >> value) field.values.push_back(value);
    if (field.values.size() != field.grid.size()) throw ValidationError("dataset row count does not match its grid");
    return field;
}

QuadratureSpec QuadratureSpec::for_packet(const PacketSpec& spec)
{
    QuadratureSpec q;
    q.cutoff = std::sqrt(2.0 * spec.energy()) + 10.0;
    return q;
}

void QuadratureSpec::validate() const
{
    if (radial_nodes < 8) throw ValidationError("quadrature needs at least 8 radial nodes");
    if (angular_order != 0 && angular_order < 8) throw ValidationError("angular order must be 0 (auto) or >= 8");
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw ValidationError("quadrature cutoff must be positive");
}

namespace {

bool is_axial(const PacketSpec& spec)
{
    const Vec3& r = spec.position();
    const Vec3& p = spec.momentum();
    return r[0] == 0.0 && r[1] == 0.0 && p[0] == 0.0 && p[1] == 0.0;
}

std::vector<std::pair<std::string, std::string>> describe(const SpinorSystem& system, double t)
{
    const PacketSpec& canonical = system.table().spec();
    const Rotation& frame = system.frame();
    const Vec3 r0 = frame.apply(canonical.position());
    const Vec3 p0 = frame.apply(canonical.momentum());
    const Vec3 axis = frame.apply(Vec3{0, 0, 1});
    auto vec = [](const Vec3& v) { return format_real(v[0]) + ' ' + format_real(v[1]) + ' ' + format_real(v[2]); };
    return {
        {"N", format_real(canonical.energy())},
        {"r0", vec(r0)},
        {"p0", vec(p0)},
        {"spin_axis", vec(axis)},
        {"kappa", format_real(system.params().kappa)},
        {"frozen", system.params().frozen ? "true" : "false"},
        {"T", format_real(system.params().oscillator_period())},
        {"T_ls", format_real(system.params().spin_orbit_period())},
        {"t", format_real(t)},
        {"lmax", std::to_string(system.table().lmax())},
    };
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = unsigned(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::size_t end = std::min(count, (w + 1) * chunk);
                for (std::size_t i = w * chunk; i < end; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace

std::vector<double> radial_density(int l, const PacketSpec& spec, double t, std::span<const double> samples)
{
    if (!is_axial(spec)) throw ValidationError("radial profiles require an axial packet (r0, p0 along z)");
    if (l < 0) throw IndexError("radial_density requires l >= 0");
    const CoefficientTable table = coefficients(spec, l);
    const cplx weight = table.reduced(l, 0);
    std::vector<double> out(samples.size());
    std::vector<cplx> radial(l + 1);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double r = samples[i];
        radial_factors(spec, l, r, t, radial);
        out[i] = r * r * std::norm(weight * radial[l]);
    }
    return out;
}

DensityField density_grid(const SpinorSystem& system, const GridSpec& grid, double t, unsigned threads)
{
    grid.validate();
    DensityField field;
    field.grid = grid;
    field.values.resize(grid.size());
    field.metadata = describe(system, t);
    field.metadata.emplace_back("quantity", "density");
    parallel_for(grid.size(), threads, [&](std::size_t i) { field.values[i] = system.amplitude(grid.point(i), t).density(); });
    return field;
}

std::pair<DensityField, DensityField> spin_density_pair(const SpinorSystem& system, const GridSpec& grid, double t,
                                                       const Vec3& axis, unsigned threads)
{
    grid.validate();
    if (std::abs(norm(axis) - 1.0) > 1e-12) throw ValidationError("projection axis must be a unit vector");
    DensityField minus;
    minus.grid = grid;
    minus.values.resize(grid.size());
    minus.metadata = describe(system, t);
    DensityField plus = minus;
    const std::string ax = format_real(axis[0]) + ' ' + format_real(axis[1]) + ' ' + format_real(axis[2]);
    minus.metadata.emplace_back("quantity", "spin antiparallel to " + ax);
    plus.metadata.emplace_back("quantity", "spin parallel to " + ax);
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const SpinProjection p = spin_project(system.amplitude(grid.point(i), t), axis);
        minus.values[i] = std::norm(p.minus);
        plus.values[i] = std::norm(p.plus);
    });
    return {std::move(minus), std::move(plus)};
}

namespace {

struct Moments {
    double norm = 0.0;
    Vec3 sigma{0, 0, 0};
};

Moments integrate(const SpinorSystem& system, const QuadratureSpec& quad, int radial_nodes, double t)
{
    const CoefficientTable& table = system.table();
    const int lmax = table.lmax();
    const int mmax = std::min(lmax, table.max_abs_m() + 1);
    const int n_theta = quad.angular_order > 0 ? quad.angular_order : lmax + 2;
    const int n_phi = 2 * mmax + 2;

    const GaussRule radial = gauss_legendre(radial_nodes, 0.0, quad.cutoff);
    const GaussRule polar = gauss_legendre(n_theta, -1.0, 1.0);

    // Y_l^m(theta, 0) per polar node; the phi dependence is exp(i m phi).
    std::vector<std::vector<cplx>> legendre(n_theta, std::vector<cplx>(lm_count(lmax)));
    for (int a = 0; a < n_theta; ++a) {
        specfun::sph_harm_array(lmax, mmax, std::acos(polar.nodes[a]), 0.0, legendre[a]);
    }
    std::vector<std::vector<cplx>> phase(n_phi, std::vector<cplx>(2 * mmax + 1));
    for (int b = 0; b < n_phi; ++b) {
        for (int m = -mmax; m <= mmax; ++m) phase[b][m + mmax] = std::polar(1.0, 2.0 * pi * b * m / n_phi);
    }
    const double phi_weight = 2.0 * pi / n_phi;

    Moments acc;
    std::vector<cplx> up_m(2 * mmax + 1);
    std::vector<cplx> down_m(2 * mmax + 1);
    for (int k = 0; k < radial_nodes; ++k) {
        const double r = radial.nodes[k];
        const SpinorExpansion e = spinor_expansion(table, system.params(), r, t);
        Moments shell;
        for (int a = 0; a < n_theta; ++a) {
            std::fill(up_m.begin(), up_m.end(), cplx(0.0));
            std::fill(down_m.begin(), down_m.end(), cplx(0.0));
            for (int l = 0; l <= lmax; ++l) {
                const int mm = std::min(l, mmax);
                for (int m = -mm; m <= mm; ++m) {
                    const int idx = lm_index(l, m);
                    up_m[m + mmax] += e.up[idx] * legendre[a][idx];
                    down_m[m + mmax] += e.down[idx] * legendre[a][idx];
                }
            }
            for (int b = 0; b < n_phi; ++b) {
                cplx up = 0.0;
                cplx down = 0.0;
                for (int m = 0; m <= 2 * mmax; ++m) {
                    up += up_m[m] * phase[b][m];
                    down += down_m[m] * phase[b][m];
                }
                const double w = polar.weights[a] * phi_weight;
                const cplx cross = std::conj(up) * down;
                shell.norm += w * (std::norm(up) + std::norm(down));
                shell.sigma[0] += w * 2.0 * cross.real();
                shell.sigma[1] += w * 2.0 * cross.imag();
                shell.sigma[2] += w * (std::norm(up) - std::norm(down));
            }
        }
        const double wr = radial.weights[k] * r * r;
        acc.norm += wr * shell.norm;
        for (int i = 0; i < 3; ++i) acc.sigma[i] += wr * shell.sigma[i];
    }
    return acc;
}

} // namespace

NormSpin norm_and_spin(const SpinorSystem& system, const QuadratureSpec& quad, double t)
{
    quad.validate();
    const Moments base = integrate(system, quad, quad.radial_nodes, t);
    const Moments fine = integrate(system, quad, 2 * quad.radial_nodes, t);
    if (std::abs(fine.norm - base.norm) > 1e-7) {
        throw NumericalError("norm quadrature not converged: doubling radial nodes moved it by " +
                             format_real(fine.norm - base.norm));
    }
    NormSpin out;
    out.norm = base.norm;
    out.sigma = system.frame().apply((1.0 / base.norm) * base.sigma);
    return out;
}

RingMetrics ring_metrics(const DensityField& field)
{
    const GridSpec& g = field.grid;
    if (g.kind != GridKind::plane && g.kind != GridKind::cut) {
        throw ValidationError("ring metrics need a plane or cut field");
    }
    const auto peak_it = std::max_element(field.values.begin(), field.values.end());
    if (peak_it == field.values.end() || *peak_it < 1e-300) throw NumericalError("field is numerically zero");
    const double peak = *peak_it;
    const double threshold = 0.5 * peak;

    double mass = 0.0;
    Vec3 centroid{0, 0, 0};
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        if (field.values[i] < threshold) continue;
        const Vec3 p = g.point(i);
        mass += field.values[i];
        for (int k = 0; k < 3; ++k) centroid[k] += field.values[i] * p[k];
    }
    centroid = (1.0 / mass) * centroid;

    const auto [a, b] = g.in_plane_axes();
    double radius = 0.0;
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        if (field.values[i] < threshold) continue;
        const Vec3 p = g.point(i);
        radius += field.values[i] * std::hypot(p[a] - centroid[a], p[b] - centroid[b]);
    }
    return {centroid, radius / mass, peak};
}

std::vector<double> annular_profile(const DensityField& field, const Vec3& center, double bin_width, int bins)
{
    const GridSpec& g = field.grid;
    if (g.kind != GridKind::plane && g.kind != GridKind::cut) {
        throw ValidationError("annular profiles need a plane or cut field");
    }
    if (!(bin_width > 0.0) || bins < 1) throw ValidationError("annular profile needs positive bin width and count");
    const auto [a, b] = g.in_plane_axes();
    std::vector<double> sum(bins, 0.0);
    std::vector<int> count(bins, 0);
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const Vec3 p = g.point(i);
        const int k = int(std::hypot(p[a] - center[a], p[b] - center[b]) / bin_width);
        if (k < bins) {
            sum[k] += field.values[i];
            ++count[k];
        }
    }
    for (int k = 0; k < bins; ++k) sum[k] = count[k] > 0 ? sum[k] / count[k] : 0.0;
    return sum;
}

std::vector<int> local_maxima(std::span<const double> profile, double floor)
{
    std::vector<int> out;
    if (profile.size() < 3) return out;
    const double top = *std::max_element(profile.begin(), profile.end());
    for (std::size_t i = 1; i + 1 < profile.size(); ++i) {
        if (profile[i] > profile[i - 1] && profile[i] >= profile[i + 1] && profile[i] > floor * top) {
            out.push_back(int(i));
        }
    }
    return out;
}

} // namespace hopw
