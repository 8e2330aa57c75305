#include "lsm/catchup.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "lsm/errors.hpp"

namespace lsm {

const char* to_string(SolverTag s)
{
    return s == SolverTag::CatchUp ? "catchup" : "leapfrog";
}

const char* to_string(Side s)
{
    return s == Side::Lower ? "lower" : "upper";
}

SweepingState Trajectory::state_at(double t) const
{
    if (states.empty())
        throw InvalidState("trajectory is empty");
    if (t <= states.front().time)
        return states.front();
    if (t >= states.back().time)
        return states.back();
    std::size_t k = 1;
    while (states[k].time < t)
        ++k;
    const SweepingState& a = states[k - 1];
    const SweepingState& b = states[k];
    const double h = b.time - a.time;
    if (h <= 0)
        return b;
    const double w = (t - a.time) / h;
    SweepingState s;
    s.time = t;
    s.y = (1 - w) * a.y + w * b.y;
    s.sigma = (1 - w) * a.sigma + w * b.sigma;
    s.epsilon = (1 - w) * a.epsilon + w * b.epsilon;
    return s;
}

TimePartition TimePartition::uniform(double horizon, Index steps)
{
    if (!(horizon > 0) || steps < 1)
        throw InvalidInput("partition: need a positive horizon and at least one step");
    TimePartition p;
    p.points.resize(static_cast<std::size_t>(steps) + 1);
    for (Index i = 0; i <= steps; ++i)
        p.points[static_cast<std::size_t>(i)] = horizon * static_cast<double>(i) / static_cast<double>(steps);
    p.points.back() = horizon;
    return p;
}

void TimePartition::validate() const
{
    if (points.size() < 2 || points.front() != 0.0)
        throw InvalidInput("partition: must start at 0 and contain at least two points");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i] > points[i - 1]))
            throw InvalidInput("partition: points must increase strictly");
}

std::vector<Vector> abstract_catchup(const Matrix& S, const std::function<PolyhedralSet(double)>& set_at,
                                     const Vector& x0, const TimePartition& partition, double tol)
{
    partition.validate();
    if (set_at(partition.points.front()).violation(x0) > tol * std::max(1.0, x0.cwiseAbs().maxCoeff()))
        throw InvalidInput("abstract_catchup: x0 lies outside the set at the first time point");
    std::vector<Vector> xs{x0};
    for (std::size_t i = 1; i < partition.points.size(); ++i) {
        const PolyhedralSet set = set_at(partition.points[i]);
        try {
            xs.push_back(project(S, xs.back(), set, tol).point);
        } catch (const InfeasibleProjection& e) {
            throw SafeLoadViolation(partition.points[i], e.what());
        }
    }
    return xs;
}

Trajectory catchup(const MovingSetSpec& spec, const Vector& stiffness, const SweepingState& state0,
                   const LoadSchedule& loads, const TimePartition& partition, const CatchUpOptions& opt)
{
    partition.validate();
    if (state0.y.size() != spec.dimension())
        throw DimensionMismatch("catchup: initial state lives in a different space");
    if (state0.time != 0.0)
        throw InvalidInput("catchup: initial state must be at t = 0");

    const Matrix A = spec.inequality_matrix();
    const Matrix Aeq = spec.space == Space::Full ? spec.equality_rows : Matrix(0, spec.dimension());
    const Vector beq = Vector::Zero(Aeq.rows());
    Projector<double> proj(spec.weight, A, Aeq, opt.qp_tol);
    WarmStart ws;

    Trajectory traj;
    traj.solver = SolverTag::CatchUp;
    traj.space = spec.space;
    traj.states.reserve(partition.points.size());
    traj.states.push_back(make_state(spec, stiffness, state0.y, 0.0, loads));
    Vector y = state0.y;
    for (std::size_t i = 1; i < partition.points.size(); ++i) {
        const double t = partition.points[i];
        try {
            y = proj.project(y, spec.rhs(t, loads), beq, opt.warm_start ? &ws : nullptr).point;
        } catch (const InfeasibleProjection& e) {
            throw SafeLoadViolation(t, std::string("catchup: moving set is empty at t = ") +
                                           std::to_string(t) + " (" + e.what() + ")");
        }
        traj.states.push_back(make_state(spec, stiffness, y, t, loads));
    }
    const Vector lower = stiffness.cwiseProduct(spec.box_lower);
    const Vector upper = stiffness.cwiseProduct(spec.box_upper);
    traj.events = detect_events(traj.states, lower, upper, opt.event_tol);
    return traj;
}

std::vector<EventRecord> detect_events(const std::vector<SweepingState>& states, const Vector& lower,
                                       const Vector& upper, double rel_tol)
{
    std::vector<EventRecord> events;
    if (states.empty())
        return events;
    const Index m = lower.size();
    auto status = [&](const Vector& sigma, Index i) {
        const double tol = rel_tol * (upper(i) - lower(i));
        if (std::abs(sigma(i) - upper(i)) <= tol)
            return 1;
        if (std::abs(sigma(i) - lower(i)) <= tol)
            return -1;
        return 0;
    };
    std::vector<int> prev(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i)
        prev[static_cast<std::size_t>(i)] = status(states.front().sigma, i);
    for (std::size_t k = 1; k < states.size(); ++k) {
        EventRecord ev;
        for (Index i = 0; i < m; ++i) {
            const int now = status(states[k].sigma, i);
            const int was = prev[static_cast<std::size_t>(i)];
            if (now != was) {
                if (was != 0)
                    ev.newly_released.push_back({i, was > 0 ? Side::Upper : Side::Lower});
                if (now != 0)
                    ev.newly_active.push_back({i, now > 0 ? Side::Upper : Side::Lower});
            }
            prev[static_cast<std::size_t>(i)] = now;
        }
        if (!ev.newly_active.empty() || !ev.newly_released.empty()) {
            ev.index = static_cast<int>(events.size());
            ev.time = states[k].time;
            ev.sigma = states[k].sigma;
            events.push_back(std::move(ev));
        }
    }
    return events;
}

} // namespace lsm
