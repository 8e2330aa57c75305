#include "lsm/loads.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsm/errors.hpp"

namespace lsm {

std::size_t LoadSchedule::segment_index(double t) const
{
    for (std::size_t k = 0; k < segments.size(); ++k)
        if (t < segments[k].end_time)
            return k;
    return segments.empty() ? 0 : segments.size() - 1;
}

Vector LoadSchedule::displacement(double t) const
{
    Vector r = displacement_offset;
    double start = 0;
    for (const auto& seg : segments) {
        const double stop = std::min(t, seg.end_time);
        if (stop > start)
            r += seg.displacement_rate * (stop - start);
        start = seg.end_time;
        if (t <= start)
            return r;
    }
    if (!segments.empty() && t > start)
        r += segments.back().displacement_rate * (t - start);
    return r;
}

Vector LoadSchedule::displacement_rate_at(double t) const
{
    if (segments.empty())
        return Vector::Zero(displacement_offset.size());
    return segments[segment_index(t)].displacement_rate;
}

double LoadSchedule::box_strain(double t) const
{
    double g = 0, start = 0;
    for (const auto& seg : segments) {
        const double stop = std::min(t, seg.end_time);
        if (stop > start)
            g += seg.box_strain_rate * (stop - start);
        start = seg.end_time;
        if (t <= start)
            return g;
    }
    if (!segments.empty() && t > start)
        g += segments.back().box_strain_rate * (t - start);
    return g;
}

double LoadSchedule::box_strain_rate_at(double t) const
{
    return segments.empty() ? 0.0 : segments[segment_index(t)].box_strain_rate;
}

Vector LoadSchedule::force_at(double t, Index nd) const
{
    if (force.empty())
        return Vector::Zero(nd);
    if (t <= force.front().time)
        return force.front().value;
    for (std::size_t k = 1; k < force.size(); ++k) {
        if (t <= force[k].time) {
            const double a = (t - force[k - 1].time) / (force[k].time - force[k - 1].time);
            return (1 - a) * force[k - 1].value + a * force[k].value;
        }
    }
    return force.back().value;
}

bool LoadSchedule::force_constant() const
{
    for (std::size_t k = 1; k < force.size(); ++k)
        if (force[k].value != force[0].value)
            return false;
    return true;
}

bool LoadSchedule::has_box_strain() const
{
    for (const auto& seg : segments)
        if (seg.box_strain_rate != 0)
            return true;
    return false;
}

void LoadSchedule::validate(Index q, Index nd, int d) const
{
    if (displacement_offset.size() != q)
        throw DimensionMismatch("loads: r(0) must have one entry per constraint row");
    if (!(horizon > 0))
        throw InvalidInput("loads: horizon must be positive");
    double prev = 0;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        if (segments[k].displacement_rate.size() != q)
            throw DimensionMismatch("loads: displacement rate of segment " + std::to_string(k) +
                                    " has the wrong length");
        if (!(segments[k].end_time > prev))
            throw InvalidInput("loads: segment end times must increase");
        if (!segments[k].displacement_rate.allFinite() || !std::isfinite(segments[k].box_strain_rate))
            throw InvalidInput("loads: non-finite rate");
        prev = segments[k].end_time;
    }
    for (std::size_t k = 0; k < force.size(); ++k) {
        if (force[k].value.size() != nd)
            throw DimensionMismatch("loads: force breakpoint " + std::to_string(k) + " must have n*d entries");
        if (k > 0 && !(force[k].time > force[k - 1].time))
            throw InvalidInput("loads: force breakpoint times must increase");
    }
    if (box_axis < 0 || box_axis >= d)
        throw InvalidInput("loads: box axis out of range");
}

LoadSchedule constant_rate_schedule(const Vector& r0, const Vector& rate, double horizon)
{
    LoadSchedule s;
    s.displacement_offset = r0;
    s.segments.push_back({horizon, rate, 0.0});
    s.horizon = horizon;
    return s;
}

} // namespace lsm
