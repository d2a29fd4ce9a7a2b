#include "hopw/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hopw/errors.hpp"

namespace hopw::specfun {
namespace {

constexpr double series_radius = 0.5;
constexpr double rescale_threshold = 1e250;

void check_degree(int l)
{
    if (l < 0 || l > max_degree) {
        throw DomainError("degree l=" + std::to_string(l) + " outside [0, " + std::to_string(max_degree) + "]");
    }
}

void check_argument(cplx z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > max_argument) {
        throw DomainError("|z| exceeds the supported Bessel argument range");
    }
}

void check_finite(std::span<const cplx> values)
{
    for (const cplx& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw DomainError("modified spherical Bessel value not representable; use a larger log scale");
        }
    }
}

// Power series z^l / (2l+1)!! * sum_k (z^2/2)^k / (k! (2l+3)...(2l+2k+1)).
// The prefactor is accumulated as mantissa * 2^exponent so that neither
// large l nor tiny z under- or overflows before the scale is applied.
void series(int lmax, cplx z, double log_scale, std::span<cplx> out)
{
    const cplx half_z2 = 0.5 * z * z;
    cplx mantissa = 1.0;
    long exponent = 0;
    for (int l = 0; l <= lmax; ++l) {
        if (l > 0) {
            mantissa *= z / double(2 * l + 1);
            if (mantissa == cplx(0.0)) {
                std::fill(out.begin() + l, out.begin() + lmax + 1, cplx(0.0));
                return;
            }
            int e = 0;
            const double mag = std::max(std::abs(mantissa.real()), std::abs(mantissa.imag()));
            std::frexp(mag, &e);
            mantissa = cplx(std::ldexp(mantissa.real(), -e), std::ldexp(mantissa.imag(), -e));
            exponent += e;
        }
        cplx sum = 1.0;
        cplx term = 1.0;
        for (int k = 1; k < 500; ++k) {
            term *= half_z2 / (double(k) * double(2 * l + 2 * k + 1));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        out[l] = sum * mantissa * std::exp(double(exponent) * std::log(2.0) - log_scale);
    }
}

// Miller's backward recurrence W_{k-1} = W_{k+1} + (2k+1)/z W_k started far
// above max(lmax, |z|), normalized to the closed form of W_0 or W_1.
void miller(int lmax, cplx z, double log_scale, std::span<cplx> out)
{
    const double az = std::abs(z);
    const int top = std::max(lmax, int(std::ceil(az))) + 50 + int(std::ceil(2.0 * std::sqrt(az)));
    const int keep = std::max(lmax, 1);
    std::vector<cplx> w(keep + 1);

    cplx above = 0.0;
    cplx current = 1e-300;
    for (int k = top; k >= 1; --k) {
        const cplx below = above + (double(2 * k + 1) / z) * current;
        above = current;
        current = below;
        if (k - 1 <= keep) w[k - 1] = current;
        if (k <= keep) w[k] = above;
        if (std::abs(current) > rescale_threshold) {
            current /= rescale_threshold;
            above /= rescale_threshold;
            for (int j = k - 1; j <= keep; ++j) {
                if (j >= 0) w[j] /= rescale_threshold;
            }
        }
    }

    const cplx ep = std::exp(z - log_scale);
    const cplx em = std::exp(-z - log_scale);
    const cplx w0 = (ep - em) / (2.0 * z);
    const cplx w1 = (0.5 * (ep + em) - w0) / z;
    const cplx factor = std::abs(w0) >= std::abs(w1) ? w0 / w[0] : w1 / w[1];
    for (int l = 0; l <= lmax; ++l) {
        out[l] = w[l] * factor;
    }
}

} // namespace

void mod_sph_bessel_scaled_array(int lmax, cplx z, double log_scale, std::span<cplx> out)
{
    check_degree(lmax);
    check_argument(z);
    if (out.size() < std::size_t(lmax + 1)) {
        throw std::invalid_argument("output span too small");
    }
    if (std::abs(z) < series_radius) {
        series(lmax, z, log_scale, out);
    } else {
        miller(lmax, z, log_scale, out);
    }
    check_finite(out.first(lmax + 1));
}

std::vector<cplx> mod_sph_bessel_scaled_array(int lmax, cplx z, double log_scale)
{
    std::vector<cplx> out(std::max(lmax, 0) + 1);
    mod_sph_bessel_scaled_array(lmax, z, log_scale, out);
    return out;
}

cplx mod_sph_bessel_scaled(int l, cplx z, double log_scale)
{
    check_degree(l);
    return mod_sph_bessel_scaled_array(l, z, log_scale)[l];
}

cplx mod_sph_bessel_first(int l, cplx z)
{
    return mod_sph_bessel_scaled(l, z, 0.0);
}

cplx legendre_p(int l, cplx x)
{
    if (l < 0) throw IndexError("legendre_p requires l >= 0");
    if (l == 0) return 1.0;
    cplx prev = 1.0;
    cplx cur = x;
    for (int k = 1; k < l; ++k) {
        const cplx next = (double(2 * k + 1) * x * cur - double(k) * prev) / double(k + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

void check_lm(int l, int m)
{
    if (l < 0 || std::abs(m) > l) {
        throw IndexError("spherical harmonic index (l=" + std::to_string(l) + ", m=" + std::to_string(m) + ") invalid");
    }
}

// Normalized recurrence shared in form (not in code) by the real-angle and
// the polynomial evaluators: a_lm and b_lm of
//   Y_l^m = a_lm z Y_{l-1}^m - b_lm r^2 Y_{l-2}^m.
double rec_a(int l, int m) { return std::sqrt(double(4 * l * l - 1) / double(l * l - m * m)); }
double rec_b(int l, int m)
{
    return std::sqrt(double((l - 1) * (l - 1) - m * m) * double(2 * l + 1) / (double(2 * l - 3) * double(l * l - m * m)));
}

} // namespace

void sph_harm_array(int lmax, int mmax, double theta, double phi, std::span<cplx> out)
{
    if (lmax < 0) throw IndexError("sph_harm_array requires lmax >= 0");
    if (out.size() < std::size_t(lm_count(lmax))) throw std::invalid_argument("output span too small");
    mmax = std::min(mmax, lmax);
    const double c = std::cos(theta);
    const double s = std::sin(theta);

    double pmm = 1.0 / std::sqrt(4.0 * pi);
    for (int m = 0; m <= mmax; ++m) {
        if (m > 0) pmm *= -std::sqrt(double(2 * m + 1) / double(2 * m)) * s;
        const cplx phase = std::polar(1.0, m * phi);
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;

        double p2 = 0.0;
        double p1 = pmm;
        for (int l = m; l <= lmax; ++l) {
            double p;
            if (l == m) {
                p = pmm;
            } else if (l == m + 1) {
                p = std::sqrt(double(2 * m + 3)) * c * pmm;
            } else {
                p = rec_a(l, m) * c * p1 - rec_b(l, m) * p2;
            }
            if (l > m) {
                p2 = p1;
                p1 = p;
            }
            const cplx y = p * phase;
            out[lm_index(l, m)] = y;
            if (m > 0) out[lm_index(l, -m)] = sign * std::conj(y);
        }
    }
}

cplx sph_harm(int l, int m, double theta, double phi)
{
    check_lm(l, m);
    std::vector<cplx> y(lm_count(l));
    sph_harm_array(l, std::abs(m), theta, phi, y);
    return y[lm_index(l, m)];
}

void solid_harm_array(int lmax, const CVec3& v, std::span<cplx> out)
{
    if (lmax < 0) throw IndexError("solid_harm_array requires lmax >= 0");
    if (out.size() < std::size_t(lm_count(lmax))) throw std::invalid_argument("output span too small");
    const cplx plus = v[0] + I * v[1];
    const cplx minus = v[0] - I * v[1];
    const cplx z = v[2];
    const cplx r2 = dot(v, v);

    // Sectoral part without the (x +- iy)^m factor, which is applied per sign.
    double smm = 1.0 / std::sqrt(4.0 * pi);
    cplx plus_pow = 1.0;
    cplx minus_pow = 1.0;
    for (int m = 0; m <= lmax; ++m) {
        if (m > 0) {
            smm *= -std::sqrt(double(2 * m + 1) / double(2 * m));
            plus_pow *= plus;
            minus_pow *= minus;
        }
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        cplx q2 = 0.0;
        cplx q1 = smm;
        for (int l = m; l <= lmax; ++l) {
            cplx q;
            if (l == m) {
                q = smm;
            } else if (l == m + 1) {
                q = std::sqrt(double(2 * m + 3)) * z * smm;
            } else {
                q = rec_a(l, m) * z * q1 - rec_b(l, m) * r2 * q2;
            }
            if (l > m) {
                q2 = q1;
                q1 = q;
            }
            out[lm_index(l, m)] = q * plus_pow;
            if (m > 0) out[lm_index(l, -m)] = sign * q * minus_pow;
        }
    }
}

cplx solid_harm(int l, int m, const CVec3& v)
{
    check_lm(l, m);
    std::vector<cplx> y(lm_count(l));
    solid_harm_array(l, v, y);
    return y[lm_index(l, m)];
}

} // namespace hopw::specfun
