#pragma once

#include <vector>

#include "lsm/sweeping.hpp"

namespace lsm {

enum class SolverTag { CatchUp, Leapfrog };
enum class Side { Lower, Upper };

[[nodiscard]] const char* to_string(SolverTag s);
[[nodiscard]] const char* to_string(Side s);

struct SpringBound {
    Index spring = 0;
    Side side = Side::Upper;
    friend bool operator==(const SpringBound&, const SpringBound&) = default;
};

struct EventRecord {
    int index = 0;
    double time = 0;
    std::vector<SpringBound> newly_active;
    std::vector<SpringBound> newly_released;
    Vector sigma;
    Vector relative_velocity; ///< velocity relative to the set before the event (leapfrog only)
};

struct Trajectory {
    std::vector<SweepingState> states;
    SolverTag solver = SolverTag::CatchUp;
    Space space = Space::Full;
    std::vector<EventRecord> events;
    bool stabilized = false;
    double stabilization_time = 0;

    /// Linear interpolation between stored states (exact between leapfrog knots).
    [[nodiscard]] SweepingState state_at(double t) const;
    [[nodiscard]] double final_time() const { return states.empty() ? 0.0 : states.back().time; }
};

} // namespace lsm
