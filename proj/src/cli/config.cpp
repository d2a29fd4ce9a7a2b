#include "hopw/cli/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "hopw/errors.hpp"
#include "hopw/specfun.hpp"

namespace hopw::cli {

const char* to_string(Geometry g)
{
    switch (g) {
    case Geometry::axial_z: return "axial-z";
    case Geometry::axial_x: return "axial-x";
    case Geometry::custom: return "custom";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw ValidationError(key + ": expected a finite number, got '" + text + "'");
    }
    return v;
}

long parse_int(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0' || errno == ERANGE) {
        throw ValidationError(key + ": expected an integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ValidationError(key + ": expected true or false, got '" + text + "'");
}

} // namespace

double parse_time(const std::string& text, double kappa)
{
    std::string t = trim(text);
    double unit = 1.0;
    if (t.size() > 3 && t.ends_with("Tls")) {
        if (!(kappa > 0.0)) throw ValidationError("t: Tls needs kappa > 0");
        unit = 2.0 * pi / kappa;
        t.resize(t.size() - 3);
    } else if (t.size() > 1 && t.back() == 'T') {
        unit = 2.0 * pi;
        t.pop_back();
    }
    double value = 0.0;
    if (const auto slash = t.find('/'); slash != std::string::npos) {
        const double den = parse_real("t", t.substr(slash + 1));
        if (den == 0.0) throw ValidationError("t: zero denominator");
        value = parse_real("t", t.substr(0, slash)) / den;
    } else {
        value = parse_real("t", t);
    }
    return value * unit;
}

Vec3 parse_vec3(const std::string& text)
{
    std::string s = text;
    for (char& c : s) {
        if (c == ',') c = ' ';
    }
    std::istringstream is(s);
    Vec3 v{};
    std::string word;
    int n = 0;
    while (is >> word) {
        if (n == 3) throw ValidationError("expected three components, got '" + text + "'");
        v[n++] = parse_real("vector", word);
    }
    if (n != 3) throw ValidationError("expected three components, got '" + text + "'");
    return v;
}

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& value)
{
    const std::string key = trim(raw_key);
    if (key == "N") {
        c.N = parse_real(key, value);
        c.N_set = true;
    } else if (key == "kappa") {
        c.kappa = parse_real(key, value);
    } else if (key == "frozen") {
        c.frozen = parse_bool(key, value);
    } else if (key == "lmax") {
        if (trim(value) == "auto") {
            c.lmax.reset();
        } else {
            c.lmax = int(parse_int(key, value));
        }
    } else if (key == "epsilon") {
        c.epsilon = parse_real(key, value);
    } else if (key == "geometry") {
        const std::string g = trim(value);
        c.geometry_set = true;
        if (g == "axial-z") {
            c.geometry = Geometry::axial_z;
        } else if (g == "axial-x") {
            c.geometry = Geometry::axial_x;
        } else if (g == "custom") {
            c.geometry = Geometry::custom;
        } else {
            throw ValidationError("geometry: expected axial-z, axial-x or custom, got '" + value + "'");
        }
    } else if (key == "r0") {
        c.r0 = parse_vec3(value);
    } else if (key == "p0") {
        c.p0 = parse_vec3(value);
    } else if (key == "spin_axis") {
        c.spin_axis = parse_vec3(value);
    } else if (key == "grid_points") {
        c.grid_points = int(parse_int(key, value));
    } else if (key == "grid_extent") {
        if (trim(value) == "auto") {
            c.grid_extent.reset();
        } else {
            c.grid_extent = parse_real(key, value);
        }
    } else if (key == "times") {
        c.times.clear();
        std::istringstream is(value);
        std::string item;
        while (std::getline(is, item, ',')) {
            if (!trim(item).empty()) c.times.push_back(trim(item));
        }
    } else if (key == "radial_points") {
        c.radial_points = int(parse_int(key, value));
    } else if (key == "quad_nodes") {
        c.quad_nodes = int(parse_int(key, value));
    } else if (key == "out") {
        c.out = trim(value);
    } else if (key == "threads") {
        const long n = parse_int(key, value);
        if (n < 0) throw ValidationError("threads: must be non-negative");
        c.threads = unsigned(n);
    } else {
        throw UsageError("unknown key '" + key + "'");
    }
}

void RunConfig::validate() const
{
    if (!(N > 0.0)) throw ValidationError("N: must be positive");
    if (!(kappa > 0.0)) throw ValidationError("kappa: must be positive");
    if (lmax && (*lmax < 0 || *lmax > specfun::max_degree)) {
        throw ValidationError("lmax: must lie in [0, " + std::to_string(specfun::max_degree) + "]");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon: must lie in (0, 1)");
    if (grid_points < 2 || grid_points > 4001) throw ValidationError("grid_points: must lie in [2, 4001]");
    if (grid_extent && !(*grid_extent > 0.0)) throw ValidationError("grid_extent: must be positive");
    if (radial_points < 2) throw ValidationError("radial_points: must be at least 2");
    if (quad_nodes < 8 || quad_nodes > 100000) throw ValidationError("quad_nodes: must lie in [8, 100000]");
    if (out.empty()) throw ValidationError("out: must not be empty");
    if (geometry == Geometry::custom && norm(spin_axis) == 0.0) throw ValidationError("spin_axis: must be nonzero");
    resolved_times();
}

std::vector<double> RunConfig::resolved_times() const
{
    std::vector<double> out;
    for (const auto& t : times) out.push_back(parse_time(t, kappa));
    return out;
}

RunConfig parse_config(const std::string& text)
{
    RunConfig c;
    std::istringstream is(text);
    std::string line;
    int number = 0;
    while (std::getline(is, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("line " + std::to_string(number) + ": expected key=value");
        try {
            apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
            c.validate();
        } catch (const UsageError& e) {
            throw UsageError("line " + std::to_string(number) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(number) + ": " + e.what());
        }
    }
    c.validate();
    return c;
}

PacketSpec resolve_packet(const RunConfig& c)
{
    if (c.geometry == Geometry::custom) return PacketSpec(c.r0, c.p0);
    return PacketSpec::axial(c.N);
}

Vec3 resolve_spin_axis(const RunConfig& c)
{
    switch (c.geometry) {
    case Geometry::axial_z: return {0, 0, 1};
    case Geometry::axial_x: return {1, 0, 0};
    case Geometry::custom: break;
    }
    return (1.0 / norm(c.spin_axis)) * c.spin_axis;
}

int resolve_lmax(const RunConfig& c, const PacketSpec& spec)
{
    if (c.lmax) return *c.lmax;
    return truncation_lmax(spec, c.epsilon);
}

double resolve_extent(const RunConfig& c, const PacketSpec& spec)
{
    if (c.grid_extent) return *c.grid_extent;
    return norm(spec.position()) + 4.0;
}

} // namespace hopw::cli
