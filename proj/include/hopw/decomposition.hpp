#pragma once

#include <span>
#include <vector>

#include "hopw/oscillator.hpp"

namespace hopw {

/// Expansion weights C_lm of a coherent packet over the partial waves
/// psi_l^m, for 0 <= l <= lmax.
///
/// The weights carry a common factor exp(-E0/2) that the partial waves undo;
/// reduced() returns C_lm * exp(E0/2) so evaluation can combine the two in
/// log space.
class CoefficientTable {
public:
    CoefficientTable(PacketSpec spec, int lmax, std::vector<cplx> reduced);

    int lmax() const { return lmax_; }
    const PacketSpec& spec() const { return spec_; }

    cplx operator()(int l, int m) const;
    cplx reduced(int l, int m) const { return reduced_[lm_index(l, m)]; }
    std::span<const cplx> reduced_values() const { return reduced_; }

    /// Largest |m| carrying a nonzero weight.
    int max_abs_m() const { return max_abs_m_; }

private:
    PacketSpec spec_;
    int lmax_;
    std::vector<cplx> reduced_;
    int max_abs_m_ = 0;
};

CoefficientTable coefficients(const PacketSpec& spec, int lmax);

/// exp(-i(3t/2 + r_t.p_t/2)) * W_l(R_t r) * exp(-(r^2 + r_t^2)/2) for l <= lmax:
/// the radial and time factor of psi_l^m once exp(E0/2) is moved into C_lm.
void radial_factors(const PacketSpec& spec, int lmax, double radius, double t, std::span<cplx> out);

/// Partial sum of C_lm psi_l^m over the table.
cplx reconstruct(const CoefficientTable& table, const Vec3& r, double t);

/// ||psi_l^m||^2 for l <= lmax (independent of m and t), by radial
/// Gauss-Legendre quadrature. These grow like exp(E0) and overflow for
/// E0 above about 700; captured_norm and truncation_lmax work at the reduced
/// scale and do not.
std::vector<double> partial_wave_norms(const PacketSpec& spec, int lmax);

/// sum |C_lm|^2 ||psi_l^m||^2 over the table.
double captured_norm(const CoefficientTable& table);

/// Smallest lmax whose captured norm misses unity by less than epsilon. The
/// deficit is summed over the omitted waves directly, so epsilon may go far
/// below the rounding level of 1 - captured_norm.
int truncation_lmax(const PacketSpec& spec, double epsilon);

} // namespace hopw
