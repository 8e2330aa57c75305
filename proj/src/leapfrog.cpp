#include "lsm/leapfrog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "lsm/errors.hpp"

namespace lsm {

namespace {

double s_norm(const Matrix& S, const Vector& v)
{
    return std::sqrt(std::max(0.0, v.dot(S * v)));
}

std::vector<Index> active_rows(const Matrix& A, const Vector& b, const Vector& z, double tol)
{
    const Vector res = b - A * z;
    std::vector<Index> act;
    for (Index j = 0; j < res.size(); ++j) {
        if (res(j) < -tol)
            throw InvalidState("leapfrog: point violates bound row " + std::to_string(j) + " by " +
                               std::to_string(-res(j)));
        if (res(j) <= tol)
            act.push_back(j);
    }
    return act;
}

Matrix select_rows(const Matrix& A, const std::vector<Index>& rows)
{
    Matrix out(static_cast<Index>(rows.size()), A.cols());
    for (std::size_t k = 0; k < rows.size(); ++k)
        out.row(static_cast<Index>(k)) = A.row(rows[k]);
    return out;
}

/// Candidate step lengths for inactive rows moving toward their bounds.
std::vector<std::pair<double, Index>> candidate_steps(const Matrix& A, const Vector& b, const Vector& z,
                                                      const Vector& zdot, double active_tol)
{
    const Vector res = b - A * z;
    const Vector rate = A * zdot;
    const double zn = zdot.norm();
    std::vector<std::pair<double, Index>> out;
    for (Index j = 0; j < res.size(); ++j) {
        if (res(j) <= active_tol)
            continue;
        if (rate(j) > 1e-12 * A.row(j).norm() * zn)
            out.emplace_back(res(j) / rate(j), j);
    }
    return out;
}

} // namespace

PolyhedralSet tangent_cone(const PolyhedralSet& set, const Vector& z, double active_tol)
{
    set.validate();
    if (set.A_eq.rows() > 0) {
        const double r = (set.A_eq * z - set.b_eq).cwiseAbs().maxCoeff();
        if (r > active_tol)
            throw InvalidState("tangent_cone: point violates the equality rows by " + std::to_string(r));
    }
    const auto act = active_rows(set.A, set.b, z, active_tol);
    PolyhedralSet cone;
    cone.A = select_rows(set.A, act);
    cone.b = Vector::Zero(cone.A.rows());
    cone.A_eq = set.A_eq;
    cone.b_eq = Vector::Zero(set.A_eq.rows());
    return cone;
}

Vector event_velocity(const Matrix& S, const PolyhedralSet& set, const Vector& z, const Vector& drive,
                      double active_tol, double qp_tol)
{
    const PolyhedralSet cone = tangent_cone(set, z, active_tol);
    return project_cone(S, Vector(-drive), cone, qp_tol).point;
}

std::optional<double> next_event_time(const PolyhedralSet& set, const Vector& z, const Vector& zdot,
                                      double active_tol)
{
    const auto cands = candidate_steps(set.A, set.b, z, zdot, active_tol);
    if (cands.empty())
        return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cands)
        best = std::min(best, c.first);
    return best;
}

Trajectory leapfrog(const MovingSetSpec& spec, const Vector& stiffness, const SweepingState& state0,
                    const LoadSchedule& loads, double horizon, const LeapfrogOptions& opt)
{
    if (!loads.force_constant())
        throw UnsupportedLoad("leapfrog: the force must be constant in time");
    if (!(horizon > 0))
        throw InvalidInput("leapfrog: horizon must be positive");
    if (state0.y.size() != spec.dimension())
        throw DimensionMismatch("leapfrog: initial state lives in a different space");

    const Matrix& S = spec.weight;
    const Matrix A = spec.inequality_matrix();
    const Index m = spec.springs();
    const Matrix Aeq = spec.space == Space::Full ? spec.equality_rows : Matrix(0, spec.dimension());
    auto reduction = std::make_shared<const EqualityReduction<double>>(S, Aeq);
    const Vector zero_eq = Vector::Zero(Aeq.rows());

    auto bound_of = [m](Index row) {
        return row < m ? SpringBound{row, Side::Upper} : SpringBound{row - m, Side::Lower};
    };

    Trajectory traj;
    traj.solver = SolverTag::Leapfrog;
    traj.space = spec.space;
    traj.states.push_back(make_state(spec, stiffness, state0.y, 0.0, loads));

    Vector y = state0.y;
    double t = 0;
    Vector zdot_prev = Vector::Zero(spec.dimension());
    std::size_t seg = 0;
    std::size_t steps = 0;
    while (t < horizon) {
        const double t_s = t;
        const bool last_segment = seg + 1 >= loads.segments.size();
        const double t_end = last_segment ? horizon : std::min(loads.segments[seg].end_time, horizon);
        const Vector b = spec.rhs(t_s, loads);
        const Vector drive = spec.translation_velocity(t_s, loads);
        const double drive_norm = s_norm(S, drive);
        Vector z = y;
        std::vector<Index> hit;
        bool pending = false;

        for (;;) {
            if (++steps > opt.max_events)
                throw InvalidState("leapfrog: event limit exceeded");
            const auto act = active_rows(A, b, z, opt.active_tol);
            Vector zdot = Vector::Zero(z.size());
            if (drive_norm > 0) {
                Projector<double> proj(reduction, select_rows(A, act), opt.qp_tol);
                try {
                    zdot = proj.project(-drive, Vector::Zero(static_cast<Index>(act.size())), zero_eq).point;
                } catch (const InfeasibleProjection& e) {
                    throw SafeLoadViolation(t, std::string("leapfrog: ") + e.what());
                }
            }
            const Vector rate = A * zdot;
            const bool still = drive_norm == 0 || s_norm(S, zdot) <= opt.stabilization_tol * drive_norm;
            // a resting point releases nothing; roundoff in zdot would otherwise look like releases
            std::vector<SpringBound> released;
            if (!still)
                for (Index j : act)
                    if (rate(j) < -opt.stabilization_tol * A.row(j).norm() * drive.norm())
                        released.push_back(bound_of(j));

            if (pending || (!released.empty() && t > 0 && (traj.events.empty() || t > traj.events.back().time))) {
                EventRecord ev;
                ev.index = static_cast<int>(traj.events.size());
                ev.time = t;
                for (Index j : hit)
                    ev.newly_active.push_back(bound_of(j));
                ev.newly_released = released;
                ev.sigma = traj.states.back().sigma;
                ev.relative_velocity = zdot_prev;
                traj.events.push_back(std::move(ev));
            }
            pending = false;
            zdot_prev = zdot;

            if (still) {
                if (last_segment) {
                    traj.stabilized = true;
                    traj.stabilization_time = t;
                }
                zdot_prev.setZero();
                t = t_end;
                break;
            }

            const auto cands = candidate_steps(A, b, z, zdot, opt.active_tol);
            double tau = std::numeric_limits<double>::infinity();
            for (const auto& c : cands)
                tau = std::min(tau, c.first);
            if (!(t + tau < t_end)) {
                z += zdot * (t_end - t);
                t = t_end;
                break;
            }
            hit.clear();
            // symmetric twins hit together up to roundoff; catch them by the residual after the step
            const Vector res_after = b - A * (z + zdot * tau);
            for (const auto& c : cands)
                if (c.first <= tau * (1 + opt.tie_tol) || res_after(c.second) <= opt.active_tol)
                    hit.push_back(c.second);
            std::sort(hit.begin(), hit.end());
            z += zdot * tau;
            t += tau;
            pending = true;
            traj.states.push_back(make_state(spec, stiffness, Vector(z + drive * (t - t_s)), t, loads));
        }
        y = z + drive * (t - t_s);
        if (traj.states.back().time < t)
            traj.states.push_back(make_state(spec, stiffness, y, t, loads));
        if (!last_segment)
            ++seg;
    }
    return traj;
}

} // namespace lsm
