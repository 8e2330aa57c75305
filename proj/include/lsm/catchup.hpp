#pragma once

#include <functional>
#include <vector>

#include "lsm/trajectory.hpp"

namespace lsm {

/// 0 = t_0 < t_1 < ... < t_k = T
struct TimePartition {
    std::vector<double> points;

    [[nodiscard]] static TimePartition uniform(double horizon, Index steps);
    void validate() const;
};

/// x_{i+1} = S-projection of x_i onto set(t_{i+1}). Returns one point per partition node.
[[nodiscard]] std::vector<Vector> abstract_catchup(const Matrix& S,
                                                   const std::function<PolyhedralSet(double)>& set_at,
                                                   const Vector& x0, const TimePartition& partition,
                                                   double tol = kDefaultQpTol);

struct CatchUpOptions {
    double qp_tol = kDefaultQpTol;
    double event_tol = 1e-7; ///< relative to c+ - c-
    bool warm_start = true;
};

[[nodiscard]] Trajectory catchup(const MovingSetSpec& spec, const Vector& stiffness,
                                 const SweepingState& state0, const LoadSchedule& loads,
                                 const TimePartition& partition, const CatchUpOptions& opt = {});

/// Springs entering or leaving |sigma_i - c_i| <= tol * (c+ - c-) between consecutive states.
[[nodiscard]] std::vector<EventRecord> detect_events(const std::vector<SweepingState>& states,
                                                     const Vector& lower, const Vector& upper,
                                                     double rel_tol = 1e-7);

} // namespace lsm
