#include "hopw/decomposition.hpp"

#include <cmath>
#include <string>

#include "hopw/errors.hpp"
#include "hopw/quadrature.hpp"
#include "hopw/specfun.hpp"

namespace hopw {

CoefficientTable::CoefficientTable(PacketSpec spec, int lmax, std::vector<cplx> reduced)
    : spec_(std::move(spec)), lmax_(lmax), reduced_(std::move(reduced))
{
    if (lmax_ < 0 || reduced_.size() != std::size_t(lm_count(lmax_))) {
        throw std::invalid_argument("coefficient table size does not match lmax");
    }
    for (int l = 0; l <= lmax_; ++l) {
        for (int m = -l; m <= l; ++m) {
            if (reduced_[lm_index(l, m)] != cplx(0.0)) max_abs_m_ = std::max(max_abs_m_, std::abs(m));
        }
    }
}

cplx CoefficientTable::operator()(int l, int m) const
{
    if (l < 0 || l > lmax_ || std::abs(m) > l) throw IndexError("coefficient index outside table");
    return std::exp(-0.5 * spec_.energy()) * reduced_[lm_index(l, m)];
}

CoefficientTable coefficients(const PacketSpec& spec, int lmax)
{
    if (lmax < 0 || lmax > specfun::max_degree) {
        throw DomainError("lmax=" + std::to_string(lmax) + " outside supported range");
    }
    if (spec.is_degenerate()) {
        throw DegenerateError("R0 . R0 vanishes; the complex direction of R0 is undefined");
    }
    std::vector<cplx> reduced(lm_count(lmax), cplx(0.0));
    const double scale = 4.0 * std::pow(pi, 0.25);
    if (spec.is_ground_state()) {
        reduced[0] = scale / std::sqrt(4.0 * pi);
        return CoefficientTable(spec, lmax, std::move(reduced));
    }

    // Y_l^{-m} at the complex direction of R0 is the solid harmonic of R0/R0.
    const CVec3 direction = (1.0 / spec.root()) * spec.complex_position();
    std::vector<cplx> ylm(lm_count(lmax));
    specfun::solid_harm_array(lmax, direction, ylm);
    for (int l = 0; l <= lmax; ++l) {
        for (int m = -l; m <= l; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            reduced[lm_index(l, m)] = sign * scale * ylm[lm_index(l, -m)];
        }
    }
    return CoefficientTable(spec, lmax, std::move(reduced));
}

void radial_factors(const PacketSpec& spec, int lmax, double radius, double t, std::span<cplx> out)
{
    const PhasePoint ps = phase_space_at(spec, t);
    const cplx z = spec.root() * std::polar(1.0, -t) * radius;
    const double log_scale = 0.5 * (radius * radius + dot(ps.r, ps.r));
    specfun::mod_sph_bessel_scaled_array(lmax, z, log_scale, out);
    const cplx phase = std::polar(1.0, -(1.5 * t + 0.5 * dot(ps.r, ps.p)));
    for (int l = 0; l <= lmax; ++l) out[l] *= phase;
}

cplx reconstruct(const CoefficientTable& table, const Vec3& r, double t)
{
    const int lmax = table.lmax();
    std::vector<cplx> radial(lmax + 1);
    radial_factors(table.spec(), lmax, norm(r), t, radial);

    double theta = 0.0;
    double phi = 0.0;
    polar_angles(r, theta, phi);
    const int mmax = table.max_abs_m();
    std::vector<cplx> ylm(lm_count(lmax));
    specfun::sph_harm_array(lmax, mmax, theta, phi, ylm);

    // Fixed order (ascending l, then m) with Neumaier compensation on the
    // outer sum, so the result does not depend on how callers batch points.
    double re = 0.0, im = 0.0, re_c = 0.0, im_c = 0.0;
    auto add = [](double& s, double& c, double x) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    };
    for (int l = 0; l <= lmax; ++l) {
        cplx angular = 0.0;
        for (int m = -std::min(l, mmax); m <= std::min(l, mmax); ++m) {
            angular += table.reduced(l, m) * ylm[lm_index(l, m)];
        }
        const cplx term = radial[l] * angular;
        add(re, re_c, term.real());
        add(im, im_c, term.imag());
    }
    return {re + re_c, im + im_c};
}

namespace {

/// ||psi_l^m||^2 * exp(-E0): the norms that pair with the reduced weights.
std::vector<double> reduced_norms(const PacketSpec& spec, int lmax)
{
    if (spec.is_degenerate()) throw DegenerateError("partial waves are undefined for R0 . R0 = 0");
    const double cutoff = std::sqrt(2.0 * spec.energy()) + 10.0;
    const GaussRule rule = gauss_legendre(200, 0.0, cutoff);
    const double r0sq = dot(spec.position(), spec.position());

    std::vector<double> norms(lmax + 1, 0.0);
    std::vector<cplx> w(lmax + 1);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double r = rule.nodes[i];
        const double log_scale = 0.5 * (r * r + r0sq);
        specfun::mod_sph_bessel_scaled_array(lmax, spec.root() * r, log_scale, w);
        for (int l = 0; l <= lmax; ++l) norms[l] += rule.weights[i] * r * r * std::norm(w[l]);
    }
    return norms;
}

/// |C_lm|^2 ||psi_l^m||^2 summed over m, for each l.
std::vector<double> shell_weights(const CoefficientTable& table)
{
    const std::vector<double> norms = reduced_norms(table.spec(), table.lmax());
    std::vector<double> out(table.lmax() + 1, 0.0);
    for (int l = 0; l <= table.lmax(); ++l) {
        double shell = 0.0;
        for (int m = -l; m <= l; ++m) shell += std::norm(table.reduced(l, m));
        out[l] = shell * norms[l];
        if (!std::isfinite(out[l])) throw NumericalError("partial-wave weight is not finite");
    }
    return out;
}

} // namespace

std::vector<double> partial_wave_norms(const PacketSpec& spec, int lmax)
{
    std::vector<double> norms = reduced_norms(spec, lmax);
    for (double& n : norms) n *= std::exp(spec.energy());
    return norms;
}

double captured_norm(const CoefficientTable& table)
{
    double total = 0.0;
    for (double w : shell_weights(table)) total += w;
    return total;
}

int truncation_lmax(const PacketSpec& spec, double epsilon)
{
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
    const int cap = specfun::max_degree;
    const std::vector<double> weight = shell_weights(coefficients(spec, cap));
    double total = 0.0;
    for (double w : weight) total += w;
    // The deficit is accumulated as a tail sum from the cap downwards so that
    // it stays accurate far below the rounding level of 1 - sum.
    const double beyond_cap = 1.0 - total;
    if (beyond_cap > 1e-12) throw DomainError("truncation would exceed the supported degree");
    double tail = 0.0;
    std::vector<double> deficit(cap + 1, 0.0);
    for (int l = cap; l >= 0; --l) {
        deficit[l] = tail;
        tail += weight[l];
    }
    // The deficit at the cap itself would only count weight beyond it, which
    // is not resolved, so the largest answer is cap - 1.
    for (int l = 0; l < cap; ++l) {
        if (deficit[l] < epsilon) return l;
    }
    throw DomainError("truncation would exceed the supported degree");
}

} // namespace hopw
