#include "lsm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "lsm/errors.hpp"
#include "lsm/format.hpp"

namespace lsm {

Matrix total_stress(const AssembledSystem& sys, const Vector& sigma, double volume)
{
    if (!(volume > 0))
        throw InvalidInput("total_stress: volume must be positive");
    if (sigma.size() != sys.dims.m)
        throw DimensionMismatch("total_stress: one stress per spring expected");
    const Vector w = sigma.cwiseProduct(sys.reference_lengths);
    Matrix t = sys.directions.transpose() * w.asDiagonal() * sys.directions / volume;
    return (t + t.transpose()) / 2;
}

double StrainGauge::strain(const LoadSchedule& loads, double t) const
{
    if (box)
        return loads.box_strain(t);
    if (loads.displacement_offset.size() == 0)
        return 0;
    return std::abs(loads.displacement(t)(component) - loads.displacement_offset(component)) / span;
}

StrainGauge make_gauge(const AssembledSystem& sys, const LoadSchedule& loads)
{
    StrainGauge g;
    if (loads.has_box_strain()) {
        g.box = true;
        return g;
    }
    double best = 0;
    for (const auto& seg : loads.segments)
        for (Index j = 0; j < seg.displacement_rate.size(); ++j)
            if (std::abs(seg.displacement_rate(j)) > best) {
                best = std::abs(seg.displacement_rate(j));
                g.component = j;
            }
    if (loads.gauge_length > 0) {
        g.span = loads.gauge_length;
        return g;
    }
    const Index d = sys.dims.d;
    Index axis = 0;
    if (sys.R.rows() > 0) {
        Index col;
        sys.R.row(g.component).cwiseAbs().maxCoeff(&col);
        axis = col % d;
    }
    double lo = sys.reference_coords(axis), hi = lo;
    for (Index j = 0; j < sys.dims.n; ++j) {
        lo = std::min(lo, sys.reference_coords(d * j + axis));
        hi = std::max(hi, sys.reference_coords(d * j + axis));
    }
    g.span = hi > lo ? hi - lo : 1.0;
    return g;
}

std::vector<CurveSample> stress_curve(const Trajectory& traj, const AssembledSystem& sys,
                                      const LoadSchedule& loads, double volume)
{
    const StrainGauge gauge = make_gauge(sys, loads);
    std::vector<CurveSample> out;
    out.reserve(traj.states.size());
    for (const auto& s : traj.states) {
        const Matrix T = total_stress(sys, s.sigma, volume);
        CurveSample c;
        c.time = s.time;
        c.strain = gauge.strain(loads, s.time);
        c.s11 = T(0, 0);
        c.s22 = T.rows() > 1 ? T(1, 1) : 0.0;
        c.s12 = T.rows() > 1 ? T(0, 1) : 0.0;
        out.push_back(c);
    }
    return out;
}

std::vector<EventRow> event_rows(const std::vector<EventRecord>& events)
{
    std::vector<EventRow> rows;
    for (const auto& e : events) {
        for (const auto& b : e.newly_active)
            rows.push_back({e.index, e.time, b.spring, to_string(b.side)});
        for (const auto& b : e.newly_released)
            rows.push_back({e.index, e.time, b.spring, std::string("released-") + to_string(b.side)});
    }
    return rows;
}

namespace {

CurveSample interpolate(const std::vector<CurveSample>& curve, double t)
{
    if (t <= curve.front().time)
        return curve.front();
    for (std::size_t k = 1; k < curve.size(); ++k) {
        if (curve[k].time == t)
            return curve[k];
        if (curve[k].time > t) {
            const CurveSample& a = curve[k - 1];
            const CurveSample& b = curve[k];
            const double w = (t - a.time) / (b.time - a.time);
            return {t, a.strain + w * (b.strain - a.strain), a.s11 + w * (b.s11 - a.s11),
                    a.s22 + w * (b.s22 - a.s22), a.s12 + w * (b.s12 - a.s12)};
        }
    }
    return curve.back();
}

} // namespace

AnalysisReport macro_metrics(const std::vector<CurveSample>& curve, const std::vector<EventRow>& events,
                             double horizon, int bins, const std::string& label)
{
    if (curve.empty())
        throw DegenerateMetrics("macro_metrics: empty curve");
    if (bins < 1)
        throw InvalidInput("macro_metrics: need at least one histogram bin");
    AnalysisReport r;
    r.curve = curve;
    r.label = label;
    r.horizon = horizon;
    r.tensile_strength = curve.back().s11;

    std::optional<double> t1;
    for (const auto& e : events)
        if (e.side == "lower" || e.side == "upper") {
            t1 = e.time;
            break;
        }
    r.first_event_time = t1;
    if (t1 && *t1 > 0) {
        const CurveSample at = interpolate(curve, *t1);
        if (at.strain > 0)
            r.stiffness = at.s11 / at.strain;
    } else {
        const CurveSample& last = curve.back();
        if (last.strain > 0)
            r.stiffness = last.s11 / last.strain;
    }
    if (r.stiffness == 0 || !std::isfinite(r.stiffness))
        throw DegenerateMetrics("macro_metrics: zero slope and no usable events");

    // 0.2% offset line E (strain - 0.002) against s11
    auto gap = [&](const CurveSample& c) { return c.s11 - r.stiffness * (c.strain - 0.002); };
    for (std::size_t k = 1; k < curve.size(); ++k) {
        const double g0 = gap(curve[k - 1]), g1 = gap(curve[k]);
        if (g0 > 0 && g1 <= 0) {
            const double w = g0 / (g0 - g1);
            r.yield_strength = curve[k - 1].s11 + w * (curve[k].s11 - curve[k - 1].s11);
            break;
        }
    }

    r.event_histogram.assign(static_cast<std::size_t>(bins), 0);
    if (horizon > 0)
        for (const auto& e : events) {
            if (e.side != "lower" && e.side != "upper")
                continue;
            int b = static_cast<int>(std::floor(e.time / horizon * bins));
            b = std::clamp(b, 0, bins - 1);
            ++r.event_histogram[static_cast<std::size_t>(b)];
        }
    return r;
}

AnalysisReport macro_metrics(const Trajectory& traj, const AssembledSystem& sys, const LoadSchedule& loads,
                             double volume, int bins, const std::string& label)
{
    return macro_metrics(stress_curve(traj, sys, loads, volume), event_rows(traj.events),
                         traj.final_time(), bins, label);
}

void write_curve_csv(std::ostream& os, const std::vector<CurveSample>& curve)
{
    os << "time,strain,s11,s22,s12\n";
    for (const auto& c : curve)
        os << format_double(c.time) << ',' << format_double(c.strain) << ',' << format_double(c.s11) << ','
           << format_double(c.s22) << ',' << format_double(c.s12) << '\n';
}

void write_events_csv(std::ostream& os, const std::vector<EventRow>& events)
{
    os << "ordinal,time,spring,side\n";
    for (const auto& e : events)
        os << e.ordinal << ',' << format_double(e.time) << ',' << e.spring << ',' << e.side << '\n';
}

void write_report(std::ostream& os, const AnalysisReport& r)
{
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("undefined"); };
    if (!r.label.empty())
        os << "label = " << r.label << '\n';
    os << "stiffness = " << format_double(r.stiffness) << '\n';
    os << "first_event_time = " << opt(r.first_event_time) << '\n';
    os << "yield_strength = " << opt(r.yield_strength) << '\n';
    os << "tensile_strength = " << format_double(r.tensile_strength) << '\n';
    os << "horizon = " << format_double(r.horizon) << '\n';
    os << "histogram_bins = " << r.event_histogram.size() << '\n';
    os << "event_histogram =";
    for (int c : r.event_histogram)
        os << ' ' << c;
    os << '\n';
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    return out;
}

double to_double(const std::string& s, std::size_t line)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SchemaError("csv line " + std::to_string(line) + ": '" + s + "' is not a number");
    }
}

} // namespace

std::vector<CurveSample> read_curve_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != "time,strain,s11,s22,s12")
        throw SchemaError("curve csv: missing header 'time,strain,s11,s22,s12'");
    std::vector<CurveSample> out;
    std::size_t no = 1;
    while (std::getline(is, line)) {
        ++no;
        if (line.empty())
            continue;
        const auto c = split(line);
        if (c.size() != 5)
            throw SchemaError("curve csv line " + std::to_string(no) + ": expected 5 columns");
        out.push_back({to_double(c[0], no), to_double(c[1], no), to_double(c[2], no), to_double(c[3], no),
                       to_double(c[4], no)});
    }
    return out;
}

std::vector<EventRow> read_events_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != "ordinal,time,spring,side")
        throw SchemaError("events csv: missing header 'ordinal,time,spring,side'");
    std::vector<EventRow> out;
    std::size_t no = 1;
    while (std::getline(is, line)) {
        ++no;
        if (line.empty())
            continue;
        const auto c = split(line);
        if (c.size() != 4)
            throw SchemaError("events csv line " + std::to_string(no) + ": expected 4 columns");
        if (c[3] != "lower" && c[3] != "upper" && c[3] != "released-lower" && c[3] != "released-upper")
            throw SchemaError("events csv line " + std::to_string(no) + ": unknown side '" + c[3] + "'");
        out.push_back({static_cast<int>(to_double(c[0], no)), to_double(c[1], no),
                       static_cast<Index>(to_double(c[2], no)), c[3]});
    }
    return out;
}

} // namespace lsm
