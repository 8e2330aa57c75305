#pragma once

#include <vector>

#include "lsm/linalg.hpp"

namespace lsm {

/// Constant rates holding until end_time (the previous segment's end is the start).
struct LoadSegment {
    double end_time = 0;
    Vector displacement_rate;   ///< q
    double box_strain_rate = 0; ///< along LoadSchedule::box_axis
};

struct ForcePoint {
    double time = 0;
    Vector value; ///< n*d
};

/// r(t) = r(0) + integral of the piecewise-constant rate; f(t) piecewise linear with
/// constant extrapolation; box strain gamma(t) integrates its rate from zero.
struct LoadSchedule {
    Vector displacement_offset; ///< r(0)
    std::vector<LoadSegment> segments;
    std::vector<ForcePoint> force; ///< empty means f = 0
    int box_axis = 0;
    double horizon = 0;
    double gauge_length = 0; ///< 0 selects the lattice extent along the loaded axis

    [[nodiscard]] Vector displacement(double t) const;
    [[nodiscard]] Vector displacement_rate_at(double t) const;
    [[nodiscard]] double box_strain(double t) const;
    [[nodiscard]] double box_strain_rate_at(double t) const;
    [[nodiscard]] Vector force_at(double t, Index nd) const;
    [[nodiscard]] bool force_constant() const;
    [[nodiscard]] bool has_box_strain() const;
    /// Segment index active at t (the last one beyond the final end time).
    [[nodiscard]] std::size_t segment_index(double t) const;
    [[nodiscard]] double segment_start(std::size_t k) const { return k == 0 ? 0.0 : segments[k - 1].end_time; }

    void validate(Index q, Index nd, int d) const;
};

/// Single segment of constant rate up to the horizon.
[[nodiscard]] LoadSchedule constant_rate_schedule(const Vector& r0, const Vector& rate, double horizon);

} // namespace lsm
