#include "hopw/spinorbit.hpp"

#include <algorithm>

#include "hopw/errors.hpp"
#include "hopw/specfun.hpp"

namespace hopw {

void SpinOrbitParams::validate() const
{
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ValidationError("kappa must be positive and finite");
}

FG fg_coefficients(int l, double t, double kappa)
{
    if (l < 0) throw IndexError("fg_coefficients requires l >= 0");
    const double tau = kappa * t;
    const double omega = 2.0 * l + 1.0;
    const cplx carrier = std::polar(1.0, 0.5 * tau);
    const double s = std::sin(0.5 * omega * tau);
    const double c = std::cos(0.5 * omega * tau);
    return {carrier * cplx(c, -s / omega), carrier * cplx(0.0, -2.0 * s / omega)};
}

namespace {

// sqrt(l(l+1) - m(m+1)): matrix element of l_+ between m and m + 1.
double ladder(int l, int m) { return std::sqrt(double(l * (l + 1) - m * (m + 1))); }

} // namespace

SpinorExpansion spinor_expansion(const CoefficientTable& table, const SpinOrbitParams& params, double radius, double t,
                                 InitialSpin spin)
{
    const int lmax = table.lmax();
    SpinorExpansion out;
    out.lmax = lmax;
    out.mmax = std::min(lmax, table.max_abs_m() + 1);
    out.up.assign(lm_count(lmax), cplx(0.0));
    out.down.assign(lm_count(lmax), cplx(0.0));

    std::vector<cplx> radial(lmax + 1);
    radial_factors(table.spec(), lmax, radius, params.frozen ? 0.0 : t, radial);

    const int mtab = table.max_abs_m();
    for (int l = 0; l <= lmax; ++l) {
        const FG fg = fg_coefficients(l, t, params.kappa);
        for (int m = -std::min(l, mtab); m <= std::min(l, mtab); ++m) {
            const cplx weight = table.reduced(l, m) * radial[l];
            if (weight == cplx(0.0)) continue;
            if (spin.up != cplx(0.0)) {
                // (f + g l.sigma)|l m up> = (f + m g)|l m up> + g sqrt(...)|l m+1 down>
                out.up[lm_index(l, m)] += spin.up * weight * (fg.f + double(m) * fg.g);
                if (m < l) out.down[lm_index(l, m + 1)] += spin.up * weight * fg.g * ladder(l, m);
            }
            if (spin.down != cplx(0.0)) {
                // (f + g l.sigma)|l m down> = (f - m g)|l m down> + g sqrt(...)|l m-1 up>
                out.down[lm_index(l, m)] += spin.down * weight * (fg.f - double(m) * fg.g);
                if (m > -l) out.up[lm_index(l, m - 1)] += spin.down * weight * fg.g * ladder(l, m - 1);
            }
        }
    }
    return out;
}

SpinorAmplitude contract(const SpinorExpansion& expansion, std::span<const cplx> ylm)
{
    SpinorAmplitude amp{0.0, 0.0};
    for (int l = 0; l <= expansion.lmax; ++l) {
        const int mm = std::min(l, expansion.mmax);
        for (int m = -mm; m <= mm; ++m) {
            const int k = lm_index(l, m);
            amp.up += expansion.up[k] * ylm[k];
            amp.down += expansion.down[k] * ylm[k];
        }
    }
    return amp;
}

SpinorAmplitude evolve_spinor(const CoefficientTable& table, const SpinOrbitParams& params, const Vec3& r, double t,
                              InitialSpin spin)
{
    const SpinorExpansion expansion = spinor_expansion(table, params, norm(r), t, spin);
    double theta = 0.0;
    double phi = 0.0;
    polar_angles(r, theta, phi);
    std::vector<cplx> ylm(lm_count(expansion.lmax));
    specfun::sph_harm_array(expansion.lmax, expansion.mmax, theta, phi, ylm);
    return contract(expansion, ylm);
}

Rotation::Rotation(const Vec3& axis, double angle) : axis_(axis), angle_(angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const auto& n = axis_;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m_[i][j] = (1.0 - c) * n[i] * n[j] + (i == j ? c : 0.0);
    }
    m_[0][1] -= s * n[2];
    m_[0][2] += s * n[1];
    m_[1][0] += s * n[2];
    m_[1][2] -= s * n[0];
    m_[2][0] -= s * n[1];
    m_[2][1] += s * n[0];
}

Rotation Rotation::about(const Vec3& axis, double angle)
{
    const double len = norm(axis);
    if (!(len > 0.0)) throw ValidationError("rotation axis must be nonzero");
    return Rotation((1.0 / len) * axis, angle);
}

Rotation Rotation::taking_z_to(const Vec3& dir)
{
    const double len = norm(dir);
    if (std::abs(len - 1.0) > 1e-12) throw ValidationError("spin axis must be a unit vector");
    const Vec3 n = cross(Vec3{0, 0, 1}, dir);
    const double s = norm(n);
    if (s == 0.0) {
        return dir[2] > 0.0 ? identity() : Rotation(Vec3{1, 0, 0}, pi);
    }
    return Rotation((1.0 / s) * n, std::atan2(s, dir[2]));
}

Vec3 Rotation::apply(const Vec3& v) const
{
    return {dot(m_[0], v), dot(m_[1], v), dot(m_[2], v)};
}

Vec3 Rotation::apply_inverse(const Vec3& v) const
{
    Vec3 out{0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) out[j] += m_[i][j] * v[i];
    }
    return out;
}

SpinorAmplitude Rotation::apply(const SpinorAmplitude& s) const
{
    const double c = std::cos(0.5 * angle_);
    const cplx mis = cplx(0.0, -std::sin(0.5 * angle_));
    const auto& n = axis_;
    // c - i sin(angle/2) (n . sigma)
    const cplx u00 = c + mis * n[2];
    const cplx u01 = mis * cplx(n[0], -n[1]);
    const cplx u10 = mis * cplx(n[0], n[1]);
    const cplx u11 = c - mis * n[2];
    return {u00 * s.up + u01 * s.down, u10 * s.up + u11 * s.down};
}

RotatedSetup rotate_setup(const PacketSpec& spec, const Vec3& spin_axis)
{
    const Rotation rot = Rotation::taking_z_to(spin_axis);
    return {PacketSpec(rot.apply_inverse(spec.position()), rot.apply_inverse(spec.momentum()), spec.branch()), rot};
}

SpinProjection spin_project(const SpinorAmplitude& amp, const Vec3& axis)
{
    if (std::abs(norm(axis) - 1.0) > 1e-12) throw ValidationError("projection axis must be a unit vector");
    const double theta = std::acos(std::clamp(axis[2], -1.0, 1.0));
    const double phi = (axis[0] == 0.0 && axis[1] == 0.0) ? 0.0 : std::atan2(axis[1], axis[0]);
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const cplx e = std::polar(1.0, phi);
    // |+> = (c, e s), |-> = (-conj(e) s, c)
    return {c * amp.up + std::conj(e) * s * amp.down, -e * s * amp.up + c * amp.down};
}

SpinorSystem::SpinorSystem(CoefficientTable table, SpinOrbitParams params, Rotation frame)
    : table_(std::move(table)), params_(params), frame_(frame)
{
    params_.validate();
}

SpinorSystem SpinorSystem::prepare(const PacketSpec& lab_spec, const Vec3& spin_axis, int lmax, SpinOrbitParams params)
{
    const RotatedSetup setup = rotate_setup(lab_spec, spin_axis);
    return SpinorSystem(coefficients(setup.spec, lmax), params, setup.rotation);
}

SpinorAmplitude SpinorSystem::amplitude(const Vec3& r, double t) const
{
    const SpinorAmplitude canonical = evolve_spinor(table_, params_, frame_.apply_inverse(r), t);
    return frame_.apply(canonical);
}

} // namespace hopw
