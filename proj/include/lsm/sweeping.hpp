#pragma once

#include <utility>

#include "lsm/lattice.hpp"
#include "lsm/loads.hpp"
#include "lsm/qp.hpp"

namespace lsm {

enum class Space { Full, Reduced };

[[nodiscard]] const char* to_string(Space s);

/// Moving set of the sweeping process in full (R^m) or reduced (R^dim V) coordinates.
/// Bounds: K^-1 c- + s(t) <= A x <= K^-1 c+ + s(t), with A = I (full, plus U'K x = 0)
/// or A = W (reduced), and s(t) = G r(t) - V P_V e(t) - F f(t).
struct MovingSetSpec {
    Space space = Space::Full;
    Vector box_lower, box_upper; ///< K^-1 c-, K^-1 c+
    Matrix G;                    ///< m x q
    Matrix F;                    ///< m x nd
    Matrix box_translation;      ///< m x d
    Matrix equality_rows;        ///< U'K in full space, empty otherwise
    Matrix W;                    ///< reduced space only
    Matrix weight;               ///< K or S_V
    Matrix V, P_V;

    [[nodiscard]] Index dimension() const { return weight.rows(); }
    [[nodiscard]] Index springs() const { return box_lower.size(); }
    /// Rows whose images are bounded: I or W.
    [[nodiscard]] Matrix bound_rows() const;
    /// [bound_rows; -bound_rows]
    [[nodiscard]] Matrix inequality_matrix() const;
    /// s(t), length m.
    [[nodiscard]] Vector shift(double t, const LoadSchedule& loads) const;
    /// Velocity of the set in its own coordinates for the rates active at t (f frozen).
    [[nodiscard]] Vector translation_velocity(double t, const LoadSchedule& loads) const;
    /// Right-hand side of inequality_matrix() at time t.
    [[nodiscard]] Vector rhs(double t, const LoadSchedule& loads) const;
    [[nodiscard]] PolyhedralSet at(double t, const LoadSchedule& loads) const;
    /// Map a point of this space to R^m (identity or V y).
    [[nodiscard]] Vector to_full(const Vector& y) const;
    /// Map a point of R^m to this space (identity or P_V y).
    [[nodiscard]] Vector from_full(const Vector& y) const;
};

[[nodiscard]] MovingSetSpec make_moving_set(const AssembledSystem& sys, Space space);

struct SweepingState {
    double time = 0;
    Vector y;
    Vector sigma;
    Vector epsilon;
};

inline constexpr double kInitialTol = 1e-9;

/// y0 = K^-1 sigma0 + s(0) in the chosen coordinates. sigma0 within tol of the limits is
/// clamped; anything further out, or out of equilibrium, is rejected.
[[nodiscard]] SweepingState initial_state(const AssembledSystem& sys, const MovingSetSpec& spec,
                                          const Vector& sigma0, const LoadSchedule& loads,
                                          double tol = kInitialTol);

/// (epsilon, sigma) from the sweeping variable.
[[nodiscard]] std::pair<Vector, Vector> recover_stress(const MovingSetSpec& spec, const Vector& stiffness,
                                                       const Vector& y, double t,
                                                       const LoadSchedule& loads);

[[nodiscard]] SweepingState make_state(const MovingSetSpec& spec, const Vector& stiffness,
                                       const Vector& y, double t, const LoadSchedule& loads);

/// Whether some stress within the limits balances the force f.
[[nodiscard]] bool safe_load_check(const AssembledSystem& sys, const Vector& f,
                                   double tol = kDefaultQpTol);

} // namespace lsm
