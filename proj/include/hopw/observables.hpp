#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hopw/spinorbit.hpp"

namespace hopw {

enum class GridKind { plane, cut, line, radial };

const char* to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& name);

/// Sampling geometry.
///
/// plane/cut: a plane normal to coordinate `axis` at `offset`; u and v run
/// over the two remaining coordinates in increasing index order, with u
/// varying fastest. line: points along coordinate `axis` through the origin
/// (u range). radial: radii in the u range, written in the x column.
struct GridSpec {
    GridKind kind = GridKind::plane;
    int axis = 1;
    double offset = 0.0;
    double u_min = -1.0;
    double u_max = 1.0;
    int u_count = 2;
    double v_min = -1.0;
    double v_max = 1.0;
    int v_count = 2;

    static GridSpec plane(int normal_axis, double offset, double half_extent, int count, GridKind kind = GridKind::plane);
    static GridSpec line(int axis, double min, double max, int count);
    static GridSpec radial(double min, double max, int count);

    void validate() const;
    std::size_t size() const;
    Vec3 point(std::size_t index) const;
    /// Coordinates indexed by u and v for plane and cut grids.
    std::pair<int, int> in_plane_axes() const;
    double u_at(int i) const;
    double v_at(int j) const;
};

struct DensityField {
    GridSpec grid;
    std::vector<double> values;
    /// Ordered key/value metadata written to the dataset header.
    std::vector<std::pair<std::string, std::string>> metadata;
};

/// Fixed 17-significant-digit rendering used by every text output.
std::string format_real(double value);

void write_dataset(std::ostream& os, const DensityField& field);
DensityField read_dataset(std::istream& is);

struct QuadratureSpec {
    int radial_nodes = 200;
    double cutoff = 10.0;
    /// Gauss-Legendre nodes in cos(theta); 0 selects the exact order for the
    /// table's lmax.
    int angular_order = 0;

    static QuadratureSpec for_packet(const PacketSpec& spec);
    void validate() const;
};

/// |r psi_l(r, t)|^2 for the l-th term C_l0 psi_l^0 of an axial packet,
/// integrated over directions.
std::vector<double> radial_density(int l, const PacketSpec& spec, double t, std::span<const double> samples);

/// |up|^2 + |down|^2 on the grid. threads = 0 uses the hardware concurrency;
/// the result does not depend on it.
DensityField density_grid(const SpinorSystem& system, const GridSpec& grid, double t, unsigned threads = 0);

/// Densities of the spin components antiparallel (first) and parallel
/// (second) to axis.
std::pair<DensityField, DensityField> spin_density_pair(const SpinorSystem& system, const GridSpec& grid, double t,
                                                       const Vec3& axis, unsigned threads = 0);

struct NormSpin {
    double norm = 0.0;
    Vec3 sigma{0, 0, 0};
};

/// Total norm and <sigma> by radial Gauss-Legendre times angular product
/// quadrature. Throws NumericalError when doubling the radial nodes moves the
/// norm by more than 1e-7.
NormSpin norm_and_spin(const SpinorSystem& system, const QuadratureSpec& quad, double t);

struct RingMetrics {
    Vec3 center{0, 0, 0};
    double ring_radius = 0.0;
    double peak = 0.0;
};

/// Centroid and mean in-plane radius of the region above half maximum.
RingMetrics ring_metrics(const DensityField& field);

/// Density averaged over annuli of width bin_width around an in-plane center.
std::vector<double> annular_profile(const DensityField& field, const Vec3& center, double bin_width, int bins);

/// Indices of strict interior local maxima above floor * max(profile).
std::vector<int> local_maxima(std::span<const double> profile, double floor);

} // namespace hopw
