#pragma once

#include <span>
#include <vector>

#include "hopw/types.hpp"

/// Special functions with complex arguments: modified spherical Bessel
/// functions of the first kind, Legendre polynomials, spherical harmonics
/// on the real sphere and solid harmonics of complex vectors.
namespace hopw::specfun {

/// Highest supported degree l.
inline constexpr int max_degree = 256;
/// Largest supported |z| for the Bessel functions.
inline constexpr double max_argument = 2000.0;

/// W_l(z) = sqrt(pi / 2z) I_{l+1/2}(z), regular at the origin.
/// Throws DomainError when l > max_degree, |z| > max_argument, or the value
/// is not representable (use mod_sph_bessel_scaled instead).
cplx mod_sph_bessel_first(int l, cplx z);

/// W_l(z) * exp(-log_scale).
cplx mod_sph_bessel_scaled(int l, cplx z, double log_scale);

/// Fills out[0..lmax] with W_l(z) * exp(-log_scale) for every l <= lmax.
void mod_sph_bessel_scaled_array(int lmax, cplx z, double log_scale, std::span<cplx> out);
std::vector<cplx> mod_sph_bessel_scaled_array(int lmax, cplx z, double log_scale);

/// Legendre polynomial P_l(x) for complex x, by upward recurrence.
cplx legendre_p(int l, cplx x);

/// Orthonormal Y_l^m(theta, phi) with the Condon-Shortley phase.
cplx sph_harm(int l, int m, double theta, double phi);

/// Y_l^m for all l <= lmax and |m| <= min(l, mmax), stored at lm_index(l, m).
/// Entries with |m| > mmax are left untouched. out must hold lm_count(lmax).
void sph_harm_array(int lmax, int mmax, double theta, double phi, std::span<cplx> out);

/// r^l Y_l^m continued to complex Cartesian arguments: a homogeneous harmonic
/// polynomial of degree l in (v_x, v_y, v_z).
cplx solid_harm(int l, int m, const CVec3& v);

/// solid_harm for all l <= lmax, |m| <= l, stored at lm_index(l, m).
void solid_harm_array(int lmax, const CVec3& v, std::span<cplx> out);

} // namespace hopw::specfun
