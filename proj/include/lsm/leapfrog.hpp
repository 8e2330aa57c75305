#pragma once

#include <optional>

#include "lsm/trajectory.hpp"

namespace lsm {

struct LeapfrogOptions {
    double active_tol = 1e-9;         ///< absolute, on bound residuals
    double tie_tol = 1e-12;           ///< relative, on event times
    double stabilization_tol = 1e-10; ///< relative, |zdot|_S against |drive|_S
    double qp_tol = kDefaultQpTol;
    std::size_t max_events = 1000000;
};

/// Cone {x : a_j x <= 0 for rows active at z, A_eq x = 0}. Throws InvalidState when z
/// violates the set by more than active_tol.
[[nodiscard]] PolyhedralSet tangent_cone(const PolyhedralSet& set, const Vector& z, double active_tol = 1e-9);

/// S-projection of -drive onto the tangent cone of set at z.
[[nodiscard]] Vector event_velocity(const Matrix& S, const PolyhedralSet& set, const Vector& z,
                                    const Vector& drive, double active_tol = 1e-9,
                                    double qp_tol = kDefaultQpTol);

/// Smallest positive step after which an inactive row of set becomes active along z + t zdot.
[[nodiscard]] std::optional<double> next_event_time(const PolyhedralSet& set, const Vector& z,
                                                    const Vector& zdot, double active_tol = 1e-9);

/// Event-based integration for constant f and piecewise-constant displacement and box
/// strain rates. States are stored at t = 0, at every event, at rate changes and at the
/// horizon; the solution is affine between consecutive states.
[[nodiscard]] Trajectory leapfrog(const MovingSetSpec& spec, const Vector& stiffness,
                                  const SweepingState& state0, const LoadSchedule& loads, double horizon,
                                  const LeapfrogOptions& opt = {});

} // namespace lsm
