#include "hopw/oscillator.hpp"

#include <vector>

#include "hopw/errors.hpp"
#include "hopw/specfun.hpp"

namespace hopw {

PacketSpec::PacketSpec(const Vec3& r0, const Vec3& p0, RootBranch branch)
    : r0_(r0), p0_(p0), branch_(branch)
{
    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(r0[i]) || !std::isfinite(p0[i])) {
            throw ValidationError("packet position and momentum must be finite");
        }
    }
    energy_ = 0.5 * (dot(r0, r0) + dot(p0, p0));
    for (int i = 0; i < 3; ++i) big_r0_[i] = cplx(r0[i], p0[i]);
    root_ = std::sqrt(dot(big_r0_, big_r0_));
    if (branch_ == RootBranch::negated) root_ = -root_;
}

PacketSpec PacketSpec::axial(double energy, double sign)
{
    if (!(energy > 0.0)) throw ValidationError("N must be positive");
    return PacketSpec(Vec3{0.0, 0.0, sign * std::sqrt(2.0 * energy)}, Vec3{0.0, 0.0, 0.0});
}

bool PacketSpec::is_ground_state() const
{
    return r0_ == Vec3{0, 0, 0} && p0_ == Vec3{0, 0, 0};
}

bool PacketSpec::is_degenerate() const
{
    return !is_ground_state() && std::abs(dot(big_r0_, big_r0_)) < degeneracy_threshold;
}

PhasePoint phase_space_at(const PacketSpec& spec, double t)
{
    const cplx rot = std::polar(1.0, -t);
    PhasePoint out;
    for (int i = 0; i < 3; ++i) {
        out.big_r[i] = spec.complex_position()[i] * rot;
        out.r[i] = out.big_r[i].real();
        out.p[i] = out.big_r[i].imag();
    }
    return out;
}

cplx gaussian_packet(const PacketSpec& spec, const Vec3& r, double t)
{
    const PhasePoint ps = phase_space_at(spec, t);
    const Vec3 d = r - ps.r;
    const double phase = -(1.5 * t + 0.5 * dot(ps.r, ps.p)) + dot(ps.p, r);
    return std::pow(pi, -0.75) * std::exp(cplx(-0.5 * dot(d, d), phase));
}

void polar_angles(const Vec3& r, double& theta, double& phi)
{
    const double rho = std::hypot(r[0], r[1]);
    theta = std::atan2(rho, r[2]);
    phi = (rho == 0.0) ? 0.0 : std::atan2(r[1], r[0]);
}

cplx partial_wave(WaveIndex idx, const PacketSpec& spec, const Vec3& r, double t)
{
    if (idx.l < 0 || std::abs(idx.m) > idx.l) throw IndexError("partial wave requires |m| <= l");
    if (spec.is_degenerate()) throw DegenerateError("partial waves are undefined for R0 . R0 = 0");

    const PhasePoint ps = phase_space_at(spec, t);
    const double radius = norm(r);
    const double rt2 = dot(ps.r, ps.r);
    const cplx z = spec.root() * std::polar(1.0, -t) * radius;
    const double log_scale = 0.5 * (radius * radius + rt2) - 0.5 * spec.energy();
    const cplx w = specfun::mod_sph_bessel_scaled(idx.l, z, log_scale);

    double theta = 0.0;
    double phi = 0.0;
    polar_angles(r, theta, phi);
    const cplx y = specfun::sph_harm(idx.l, idx.m, theta, phi);
    const cplx phase = std::polar(1.0, -(1.5 * t + 0.5 * dot(ps.r, ps.p)));
    return phase * w * y;
}

cplx cos_big_theta(const PacketSpec& spec, const Vec3& r, double t)
{
    const double radius = norm(r);
    if (radius == 0.0) throw DegenerateError("cos Theta undefined at the origin");
    if (spec.root() == cplx(0.0)) throw DegenerateError("cos Theta undefined for R0 = 0");
    const PhasePoint ps = phase_space_at(spec, t);
    const cplx root_t = spec.root() * std::polar(1.0, -t);
    return dot(r, ps.big_r) / (root_t * radius);
}

} // namespace hopw
