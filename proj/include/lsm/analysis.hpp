#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lsm/trajectory.hpp"

namespace lsm {

/// (1/V) D' diag(sigma) diag(lengths) D, a d x d matrix.
[[nodiscard]] Matrix total_stress(const AssembledSystem& sys, const Vector& sigma, double volume);

/// Maps the load parameter t to a scalar strain.
struct StrainGauge {
    bool box = false;   ///< strain is the box strain itself
    Index component = 0; ///< driven entry of r otherwise
    double span = 1;

    [[nodiscard]] double strain(const LoadSchedule& loads, double t) const;
};

[[nodiscard]] StrainGauge make_gauge(const AssembledSystem& sys, const LoadSchedule& loads);

struct CurveSample {
    double time = 0;
    double strain = 0;
    double s11 = 0, s22 = 0, s12 = 0;
};

struct EventRow {
    int ordinal = 0;
    double time = 0;
    Index spring = 0;
    std::string side; ///< lower, upper, released-lower, released-upper
};

struct AnalysisReport {
    double stiffness = 0;
    std::optional<double> first_event_time;
    std::optional<double> yield_strength; ///< empty when the offset line never meets the curve
    double tensile_strength = 0;
    double horizon = 0;
    std::vector<CurveSample> curve;
    std::vector<int> event_histogram;
    std::string label;
};

[[nodiscard]] std::vector<CurveSample> stress_curve(const Trajectory& traj, const AssembledSystem& sys,
                                                    const LoadSchedule& loads, double volume);

[[nodiscard]] std::vector<EventRow> event_rows(const std::vector<EventRecord>& events);

/// Stiffness from the first-event point, 0.2% offset yield on s11, final s11, and a
/// histogram of yield activations over [0, horizon].
[[nodiscard]] AnalysisReport macro_metrics(const std::vector<CurveSample>& curve,
                                           const std::vector<EventRow>& events, double horizon,
                                           int bins = 20, const std::string& label = "");

[[nodiscard]] AnalysisReport macro_metrics(const Trajectory& traj, const AssembledSystem& sys,
                                           const LoadSchedule& loads, double volume, int bins = 20,
                                           const std::string& label = "");

void write_curve_csv(std::ostream& os, const std::vector<CurveSample>& curve);
void write_events_csv(std::ostream& os, const std::vector<EventRow>& events);
void write_report(std::ostream& os, const AnalysisReport& report);
[[nodiscard]] std::vector<CurveSample> read_curve_csv(std::istream& is);
[[nodiscard]] std::vector<EventRow> read_events_csv(std::istream& is);

} // namespace lsm
