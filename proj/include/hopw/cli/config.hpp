#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hopw/spinorbit.hpp"

namespace hopw::cli {

/// Malformed command line or config text.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Geometry { axial_z, axial_x, custom };

const char* to_string(Geometry g);

/// Run parameters. Optional fields left empty take a per-command default
/// (see resolve_* below).
struct RunConfig {
    double N = 20.0;
    bool N_set = false;
    double kappa = 1.0;
    std::optional<bool> frozen;
    /// Empty means automatic: truncation_lmax(spec, epsilon).
    std::optional<int> lmax;
    double epsilon = 1e-10;
    Geometry geometry = Geometry::axial_z;
    bool geometry_set = false;
    Vec3 r0{0, 0, 0};
    Vec3 p0{0, 0, 0};
    Vec3 spin_axis{0, 0, 1};
    int grid_points = 161;
    /// Half width of plane grids; empty means r0 + 4.
    std::optional<double> grid_extent;
    /// Overrides the figure time list when non-empty. Kept as text because a
    /// Tls suffix depends on kappa.
    std::vector<std::string> times;
    int radial_points = 400;
    /// Radial Gauss-Legendre nodes of the norm and spin quadrature.
    int quad_nodes = 200;
    std::string out = "out";
    unsigned threads = 0;

    void validate() const;
    std::vector<double> resolved_times() const;
};

/// key=value lines, '#' starts a comment. Throws UsageError with the line
/// number on malformed lines or unknown keys and ValidationError naming the
/// key when a value is out of range.
RunConfig parse_config(const std::string& text);

/// Applies one "key=value" override on top of an existing config.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Times accept a plain number or a number followed by T (oscillator
/// period) or Tls (spin-orbit period). The number may be a ratio a/b.
double parse_time(const std::string& text, double kappa);
Vec3 parse_vec3(const std::string& text);

/// Lab-frame packet and spin axis selected by the geometry.
PacketSpec resolve_packet(const RunConfig& config);
Vec3 resolve_spin_axis(const RunConfig& config);
int resolve_lmax(const RunConfig& config, const PacketSpec& spec);
double resolve_extent(const RunConfig& config, const PacketSpec& spec);

} // namespace hopw::cli
