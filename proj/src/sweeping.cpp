#include "lsm/sweeping.hpp"

#include <algorithm>
#include <cmath>

#include "lsm/errors.hpp"

namespace lsm {

const char* to_string(Space s)
{
    return s == Space::Full ? "full" : "reduced";
}

Matrix MovingSetSpec::bound_rows() const
{
    if (space == Space::Full)
        return Matrix::Identity(springs(), springs());
    return W;
}

Matrix MovingSetSpec::inequality_matrix() const
{
    const Matrix B = bound_rows();
    Matrix A(2 * B.rows(), B.cols());
    A.topRows(B.rows()) = B;
    A.bottomRows(B.rows()) = -B;
    return A;
}

Vector MovingSetSpec::shift(double t, const LoadSchedule& loads) const
{
    Vector s = G * loads.displacement(t);
    if (loads.has_box_strain())
        s -= box_translation.col(loads.box_axis) * loads.box_strain(t);
    if (!loads.force.empty())
        s -= F * loads.force_at(t, F.cols());
    return s;
}

Vector MovingSetSpec::translation_velocity(double t, const LoadSchedule& loads) const
{
    Vector v = G * loads.displacement_rate_at(t);
    const double g = loads.box_strain_rate_at(t);
    if (g != 0)
        v -= box_translation.col(loads.box_axis) * g;
    return from_full(v);
}

Vector MovingSetSpec::rhs(double t, const LoadSchedule& loads) const
{
    const Vector s = shift(t, loads);
    const Index m = springs();
    Vector b(2 * m);
    b.head(m) = box_upper + s;
    b.tail(m) = -(box_lower + s);
    return b;
}

PolyhedralSet MovingSetSpec::at(double t, const LoadSchedule& loads) const
{
    PolyhedralSet set;
    set.A = inequality_matrix();
    set.b = rhs(t, loads);
    set.A_eq = space == Space::Full ? equality_rows : Matrix(0, dimension());
    set.b_eq = Vector::Zero(set.A_eq.rows());
    return set;
}

Vector MovingSetSpec::to_full(const Vector& y) const
{
    return space == Space::Full ? y : Vector(V * y);
}

Vector MovingSetSpec::from_full(const Vector& y) const
{
    return space == Space::Full ? y : Vector(P_V * y);
}

MovingSetSpec make_moving_set(const AssembledSystem& sys, Space space)
{
    MovingSetSpec s;
    s.space = space;
    s.box_lower = sys.K_inv(sys.lower_limits);
    s.box_upper = sys.K_inv(sys.upper_limits);
    s.G = sys.G;
    s.F = sys.F;
    s.box_translation = sys.box_translation;
    s.V = sys.V_basis;
    s.P_V = sys.P_V;
    if (space == Space::Full) {
        s.equality_rows = sys.U_basis.transpose() * sys.K();
        s.weight = sys.K();
    } else {
        s.W = sys.W;
        s.weight = sys.S_V;
    }
    return s;
}

std::pair<Vector, Vector> recover_stress(const MovingSetSpec& spec, const Vector& stiffness,
                                         const Vector& y, double t, const LoadSchedule& loads)
{
    Vector eps = spec.to_full(y) - spec.shift(t, loads);
    Vector sigma = stiffness.cwiseProduct(eps);
    return {std::move(eps), std::move(sigma)};
}

SweepingState make_state(const MovingSetSpec& spec, const Vector& stiffness, const Vector& y, double t,
                         const LoadSchedule& loads)
{
    auto [eps, sigma] = recover_stress(spec, stiffness, y, t, loads);
    return {t, y, std::move(sigma), std::move(eps)};
}

SweepingState initial_state(const AssembledSystem& sys, const MovingSetSpec& spec, const Vector& sigma0,
                            const LoadSchedule& loads, double tol)
{
    const Index m = sys.dims.m;
    if (sigma0.size() != m)
        throw InvalidInitialCondition("initial stress must have one entry per spring");
    if (!sigma0.allFinite())
        throw InvalidInitialCondition("initial stress has non-finite entries");
    Vector sigma = sigma0;
    for (Index i = 0; i < m; ++i) {
        const double lo = sys.lower_limits(i), hi = sys.upper_limits(i);
        const double slack = tol * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
        if (sigma(i) > hi + slack || sigma(i) < lo - slack)
            throw InvalidInitialCondition("initial stress of spring " + std::to_string(i) +
                                          " lies outside its limits");
        sigma(i) = std::clamp(sigma(i), lo, hi);
    }
    const Vector f0 = loads.force_at(0, sys.dims.n * sys.dims.d);
    const Vector kff = sys.stiffness.cwiseProduct(sys.F * f0);
    const Vector balance = sys.U_basis.transpose() * (sigma - kff);
    const double scale = std::max({1.0, sigma.cwiseAbs().maxCoeff(), kff.cwiseAbs().maxCoeff()});
    if (balance.size() > 0 && balance.cwiseAbs().maxCoeff() > tol * scale)
        throw InvalidInitialCondition("initial stress is not in equilibrium with f(0)");

    const Vector y_full = sys.K_inv(sigma) + spec.shift(0, loads);
    SweepingState s;
    s.time = 0;
    s.y = spec.from_full(y_full);
    s.epsilon = sys.K_inv(sigma);
    s.sigma = sigma;
    return s;
}

bool safe_load_check(const AssembledSystem& sys, const Vector& f, double tol)
{
    const Index m = sys.dims.m;
    const Vector kff = sys.stiffness.cwiseProduct(sys.F * f);
    PolyhedralSet set;
    set.A.resize(2 * m, m);
    set.A.topRows(m) = Matrix::Identity(m, m);
    set.A.bottomRows(m) = -Matrix::Identity(m, m);
    set.b.resize(2 * m);
    set.b.head(m) = sys.upper_limits - kff;
    set.b.tail(m) = -(sys.lower_limits - kff);
    set.A_eq = sys.U_basis.transpose();
    set.b_eq = Vector::Zero(set.A_eq.rows());
    try {
        (void)project(Matrix(Matrix::Identity(m, m)), Vector(Vector::Zero(m)), set, tol);
    } catch (const InfeasibleProjection&) {
        return false;
    }
    return true;
}

} // namespace lsm
