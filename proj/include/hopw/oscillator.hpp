#pragma once

#include "hopw/types.hpp"

/// Coherent-state kinematics of the isotropic oscillator (hbar = m = omega = 1)
/// and the exact time-dependent partial waves built on it.
namespace hopw {

/// Which square root of R0vec . R0vec is used for the scalar R0.
enum class RootBranch { principal, negated };

/// Initial phase-space point of a coherent packet and the complex quantities
/// derived from it. Immutable once constructed.
class PacketSpec {
public:
    PacketSpec() : PacketSpec(Vec3{0, 0, 0}, Vec3{0, 0, 0}) {}
    PacketSpec(const Vec3& r0, const Vec3& p0, RootBranch branch = RootBranch::principal);

    /// Packet at rest at sign * sqrt(2N) along z; sign = -1 gives the
    /// canonical axial setup with theta_R0 = pi.
    static PacketSpec axial(double energy, double sign = -1.0);

    const Vec3& position() const { return r0_; }
    const Vec3& momentum() const { return p0_; }
    double energy() const { return energy_; }
    const CVec3& complex_position() const { return big_r0_; }
    cplx root() const { return root_; }
    double phase() const { return std::arg(root_); }
    RootBranch branch() const { return branch_; }

    /// r0 = p0 = 0: only the l = 0 wave is present.
    bool is_ground_state() const;
    /// |R0vec . R0vec| below the degeneracy threshold with R0vec != 0.
    bool is_degenerate() const;

    PacketSpec with_branch(RootBranch branch) const { return PacketSpec(r0_, p0_, branch); }

private:
    Vec3 r0_;
    Vec3 p0_;
    RootBranch branch_;
    double energy_;
    CVec3 big_r0_;
    cplx root_;
};

inline constexpr double degeneracy_threshold = 1e-8;

struct PhasePoint {
    Vec3 r;
    Vec3 p;
    CVec3 big_r;
};

struct WaveIndex {
    int l = 0;
    int m = 0;
};

/// Classical trajectory: R_t = R0 exp(-i t).
PhasePoint phase_space_at(const PacketSpec& spec, double t);

/// Coherent state with the phase that makes it an exact solution of the
/// time-dependent Schroedinger equation.
cplx gaussian_packet(const PacketSpec& spec, const Vec3& r, double t);

/// Time-dependent partial wave psi_l^m(r, t).
cplx partial_wave(WaveIndex idx, const PacketSpec& spec, const Vec3& r, double t);

/// cos of the complex angle between r and R_t; independent of t.
cplx cos_big_theta(const PacketSpec& spec, const Vec3& r, double t);

/// Polar angles of a real vector; the origin maps to (0, 0).
void polar_angles(const Vec3& r, double& theta, double& phi);

} // namespace hopw
