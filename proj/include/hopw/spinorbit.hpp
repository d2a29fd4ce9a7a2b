#pragma once

#include <span>
#include <vector>

#include "hopw/decomposition.hpp"

/// Spin-1/2 packets in the oscillator with a constant spin-orbit coupling
/// kappa (l . sigma). The propagator factorizes as U0(t) U_ls(t) with
/// U_ls(t) = f(t) + g(t) (l . sigma) = exp(-i kappa t l . sigma).
namespace hopw {

struct SpinOrbitParams {
    double kappa = 1.0;
    /// Hold the oscillator factor at t = 0 and advance only U_ls.
    bool frozen = false;

    double oscillator_period() const { return 2.0 * pi; }
    double spin_orbit_period() const { return 2.0 * pi / kappa; }
    void validate() const;
};

struct FG {
    cplx f;
    cplx g;
};

/// f_l and g_l: U_ls restricted to orbital angular momentum l.
FG fg_coefficients(int l, double t, double kappa);

struct SpinorAmplitude {
    cplx up;
    cplx down;

    double density() const { return std::norm(up) + std::norm(down); }
};

/// Initial spinor (components along s_z = +1/2 and -1/2) shared by all
/// partial waves. The canonical setup is spin up.
struct InitialSpin {
    cplx up = 1.0;
    cplx down = 0.0;
};

/// Evolved spinor at fixed radius expanded over Y_l^m:
/// psi_up(r) = sum up[lm] Y_l^m(r^), psi_down(r) = sum down[lm] Y_l^m(r^).
struct SpinorExpansion {
    int lmax = 0;
    /// Largest |m| with a possibly nonzero entry.
    int mmax = 0;
    std::vector<cplx> up;
    std::vector<cplx> down;
};

SpinorExpansion spinor_expansion(const CoefficientTable& table, const SpinOrbitParams& params, double radius, double t,
                                 InitialSpin spin = {});

SpinorAmplitude contract(const SpinorExpansion& expansion, std::span<const cplx> ylm);

/// Spinor amplitude at r and t for a packet whose weights are in the table.
SpinorAmplitude evolve_spinor(const CoefficientTable& table, const SpinOrbitParams& params, const Vec3& r, double t,
                              InitialSpin spin = {});

/// Proper rotation of R^3 together with its SU(2) representative.
class Rotation {
public:
    static Rotation identity() { return Rotation(Vec3{0, 0, 1}, 0.0); }
    static Rotation about(const Vec3& axis, double angle);
    /// Minimal rotation carrying z onto the unit vector dir.
    static Rotation taking_z_to(const Vec3& dir);

    Vec3 apply(const Vec3& v) const;
    Vec3 apply_inverse(const Vec3& v) const;
    /// Spinor transformed by exp(-i angle/2 n . sigma).
    SpinorAmplitude apply(const SpinorAmplitude& s) const;

    const std::array<Vec3, 3>& matrix() const { return m_; }
    const Vec3& axis() const { return axis_; }
    double angle() const { return angle_; }

private:
    Rotation(const Vec3& axis, double angle);

    Vec3 axis_;
    double angle_;
    std::array<Vec3, 3> m_;
};

struct RotatedSetup {
    /// Packet expressed in the frame where the initial spin is along +z.
    PacketSpec spec;
    /// Maps that frame onto the original one (rotation * z = spin axis).
    Rotation rotation;
};

RotatedSetup rotate_setup(const PacketSpec& spec, const Vec3& spin_axis);

struct SpinProjection {
    cplx plus;
    cplx minus;
};

/// Components along the +axis and -axis spin eigenvectors.
SpinProjection spin_project(const SpinorAmplitude& amp, const Vec3& axis);

/// A packet with spin, evaluated in the laboratory frame. Internally the
/// weights live in the frame where the initial spin points along +z.
class SpinorSystem {
public:
    SpinorSystem(CoefficientTable table, SpinOrbitParams params, Rotation frame = Rotation::identity());

    /// Packet lab_spec with initial spin along spin_axis, truncated at lmax.
    static SpinorSystem prepare(const PacketSpec& lab_spec, const Vec3& spin_axis, int lmax, SpinOrbitParams params);

    SpinorAmplitude amplitude(const Vec3& r, double t) const;

    const CoefficientTable& table() const { return table_; }
    const SpinOrbitParams& params() const { return params_; }
    const Rotation& frame() const { return frame_; }

private:
    CoefficientTable table_;
    SpinOrbitParams params_;
    Rotation frame_;
};

} // namespace hopw
