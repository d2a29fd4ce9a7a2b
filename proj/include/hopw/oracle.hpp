#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "hopw/types.hpp"

/// Brute-force validators. Nothing here calls into the special-function or
/// expansion code; states are passed in as black-box evaluators.
namespace hopw::oracle {

using ScalarState = std::function<cplx(const Vec3& r, double t)>;
using SpinorState = std::function<std::array<cplx, 2>(const Vec3& r, double t)>;

/// Matrix of exp(-i kappa t l.sigma) on the block spanned by
/// |l m up>, |l m+1 down>. When m = l the block is one-dimensional and
/// only entry (0, 0) is meaningful (dimension = 1).
struct Block {
    int dimension = 2;
    std::array<std::array<cplx, 2>, 2> u{};
};

Block block_exponential(int l, int m, double t, double kappa);

struct ResidualReport {
    Vec3 point{0, 0, 0};
    double t = 0.0;
    double residual = 0.0;
    double h = 0.0;
};

struct ResidualOptions {
    double h = 1e-3;
    /// Carrier energy removed before differencing in time: the state is
    /// differenced as exp(i E t) psi and the operator shifted by E. The
    /// residual is unchanged in exact arithmetic.
    double reference_energy = 0.0;
    /// Include kappa l.sigma in the Hamiltonian (spinor states only).
    bool with_spin = false;
    double kappa = 1.0;
    /// Treat the oscillator as frozen: H = kappa l.sigma only.
    bool spin_only = false;
};

/// |(i d/dt - H) psi| / max(|psi|, 1e-12) by central differences with the
/// 7-point Laplacian, H = -lap/2 + r^2/2.
ResidualReport fd_residual(const ScalarState& state, const Vec3& point, double t, const ResidualOptions& opts = {});
ResidualReport fd_residual(const SpinorState& state, const Vec3& point, double t, const ResidualOptions& opts = {});

void write_residuals(std::ostream& os, std::span<const ResidualReport> reports);

/// Cartesian trapezoid rule on [-half_width, half_width]^3 with the given
/// spacing; spectrally accurate for the smooth, Gaussian-decaying integrands
/// of oscillator states.
struct CartesianRule {
    double half_width = 14.0;
    double spacing = 0.25;
};

double quadrature_norm(const ScalarState& state, double t, const CartesianRule& rule);
double quadrature_norm(const SpinorState& state, double t, const CartesianRule& rule);

/// W_0 and W_1 from their sinh/cosh closed forms.
cplx closed_form_w0(cplx z);
cplx closed_form_w1(cplx z);

} // namespace hopw::oracle
