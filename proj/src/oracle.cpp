#include "hopw/oracle.hpp"

#include <Eigen/Dense>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hopw::oracle {

Block block_exponential(int l, int m, double t, double kappa)
{
    if (l < 0 || std::abs(m) > l) throw std::out_of_range("block_exponential requires |m| <= l");
    Block out;
    if (m == l) {
        // |l l up> is an eigenvector of l.sigma with eigenvalue l.
        out.dimension = 1;
        out.u[0][0] = std::exp(cplx(0.0, -kappa * t * l));
        return out;
    }
    const double ladder = std::sqrt(double(l * (l + 1) - m * (m + 1)));
    Eigen::Matrix2d generator;
    generator << double(m), ladder, ladder, -double(m + 1);
    generator *= kappa;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(generator);
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
    for (int k = 0; k < 2; ++k) {
        const Eigen::Vector2d v = eig.eigenvectors().col(k);
        u += std::exp(cplx(0.0, -t * eig.eigenvalues()(k))) * (v * v.transpose()).cast<cplx>();
    }
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) out.u[i][j] = u(i, j);
    }
    return out;
}

namespace {

using Spinor = std::array<cplx, 2>;

struct Stencil {
    Spinor center;
    std::array<Spinor, 3> plus;
    std::array<Spinor, 3> minus;
    Spinor later;
    Spinor earlier;
};

Stencil sample(const SpinorState& state, const Vec3& p, double t, double h, double energy)
{
    auto at = [&](const Vec3& q, double s) {
        Spinor v = state(q, s);
        const cplx carrier = std::polar(1.0, energy * s);
        return Spinor{carrier * v[0], carrier * v[1]};
    };
    Stencil st;
    st.center = at(p, t);
    for (int k = 0; k < 3; ++k) {
        Vec3 q = p;
        q[k] += h;
        st.plus[k] = at(q, t);
        q[k] = p[k] - h;
        st.minus[k] = at(q, t);
    }
    st.later = at(p, t + h);
    st.earlier = at(p, t - h);
    return st;
}

ResidualReport evaluate(const SpinorState& state, const Vec3& p, double t, const ResidualOptions& o, bool spinor)
{
    if (!(o.h >= 1e-4 && o.h <= 1e-2)) throw std::invalid_argument("fd_residual step must lie in [1e-4, 1e-2]");
    const double h = o.h;
    const Stencil st = sample(state, p, t, h, o.reference_energy);
    const double r2 = dot(p, p);

    Spinor residual{};
    std::array<std::array<cplx, 3>, 2> grad{};
    for (int c = 0; c < 2; ++c) {
        cplx lap = 0.0;
        for (int k = 0; k < 3; ++k) {
            lap += (st.plus[k][c] + st.minus[k][c] - 2.0 * st.center[c]) / (h * h);
            grad[c][k] = (st.plus[k][c] - st.minus[k][c]) / (2.0 * h);
        }
        const cplx dt = (st.later[c] - st.earlier[c]) / (2.0 * h);
        const cplx h0 = o.spin_only ? cplx(0.0) : -0.5 * lap + 0.5 * r2 * st.center[c];
        residual[c] = I * dt + o.reference_energy * st.center[c] - h0;
    }
    if (spinor && (o.with_spin || o.spin_only)) {
        // l = -i r x grad, applied to each component.
        auto angular = [&](int c) {
            const auto& g = grad[c];
            return std::array<cplx, 3>{-I * (p[1] * g[2] - p[2] * g[1]), -I * (p[2] * g[0] - p[0] * g[2]),
                                       -I * (p[0] * g[1] - p[1] * g[0])};
        };
        const auto lu = angular(0);
        const auto ld = angular(1);
        const cplx up = lu[2] + (ld[0] - I * ld[1]);
        const cplx down = (lu[0] + I * lu[1]) - ld[2];
        residual[0] -= o.kappa * up;
        residual[1] -= o.kappa * down;
    }
    const double magnitude = std::sqrt(std::norm(st.center[0]) + std::norm(st.center[1]));
    const double res = std::sqrt(std::norm(residual[0]) + std::norm(residual[1]));
    return {p, t, res / std::max(magnitude, 1e-12), h};
}

} // namespace

ResidualReport fd_residual(const ScalarState& state, const Vec3& point, double t, const ResidualOptions& opts)
{
    const SpinorState wrapped = [&](const Vec3& r, double s) { return Spinor{state(r, s), 0.0}; };
    return evaluate(wrapped, point, t, opts, false);
}

ResidualReport fd_residual(const SpinorState& state, const Vec3& point, double t, const ResidualOptions& opts)
{
    return evaluate(state, point, t, opts, true);
}

void write_residuals(std::ostream& os, std::span<const ResidualReport> reports)
{
    os << "# x y z t h residual\n";
    char buf[160];
    for (const ResidualReport& r : reports) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g\n", r.point[0], r.point[1], r.point[2], r.t,
                      r.h, r.residual);
        os << buf;
    }
}

namespace {

template <class Density>
double trapezoid(const CartesianRule& rule, Density&& density)
{
    const int n = int(std::ceil(rule.half_width / rule.spacing));
    const double h = rule.spacing;
    double total = 0.0;
    for (int i = -n; i <= n; ++i) {
        double slab = 0.0;
        for (int j = -n; j <= n; ++j) {
            double row = 0.0;
            for (int k = -n; k <= n; ++k) row += density(Vec3{i * h, j * h, k * h});
            slab += row;
        }
        total += slab;
    }
    return total * h * h * h;
}

} // namespace

double quadrature_norm(const ScalarState& state, double t, const CartesianRule& rule)
{
    return trapezoid(rule, [&](const Vec3& r) { return std::norm(state(r, t)); });
}

double quadrature_norm(const SpinorState& state, double t, const CartesianRule& rule)
{
    return trapezoid(rule, [&](const Vec3& r) {
        const Spinor s = state(r, t);
        return std::norm(s[0]) + std::norm(s[1]);
    });
}

cplx closed_form_w0(cplx z)
{
    if (z == cplx(0.0)) return 1.0;
    return std::sinh(z) / z;
}

cplx closed_form_w1(cplx z)
{
    if (z == cplx(0.0)) return 0.0;
    return (std::cosh(z) - std::sinh(z) / z) / z;
}

} // namespace hopw::oracle
