#include <doctest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "lsm/analysis.hpp"
#include "lsm/errors.hpp"
#include "lsm/generators.hpp"
#include "lsm/leapfrog.hpp"

using lsm::Matrix;
using lsm::Vector;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<lsm::CurveSample> bilinear(double E, double knee, double T, int n)
{
    std::vector<lsm::CurveSample> c;
    for (int k = 0; k <= n; ++k) {
        const double t = T * k / n;
        c.push_back({t, t, E * std::min(t, knee), 0.1 * t, 0.0});
    }
    return c;
}

} // namespace

TEST_CASE("single spring along x")
{
    lsm::AssembledSystem s;
    s.dims.m = 1;
    s.dims.d = 2;
    s.directions = Matrix{{-1, 0}};
    s.reference_lengths = Vector::Ones(1);
    const Matrix T = lsm::total_stress(s, Vector::Ones(1), 1.0);
    CHECK(T.isApprox(Matrix{{1, 0}, {0, 0}}));
    CHECK(lsm::total_stress(s, Vector::Constant(1, 3.0), 2.0).isApprox(Matrix{{1.5, 0}, {0, 0}}));
    CHECK_THROWS_AS((void)lsm::total_stress(s, Vector::Ones(1), 0.0), lsm::InvalidInput);
    CHECK_THROWS_AS((void)lsm::total_stress(s, Vector::Ones(2), 1.0), lsm::DimensionMismatch);
}

TEST_CASE("total stress is symmetric and linear")
{
    const auto p = lsm::build_tri_grid_with_hole();
    const auto sys = lsm::assemble(p.lattice);
    std::mt19937 rng(5);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        Vector a(sys.dims.m), b(sys.dims.m);
        for (auto& x : a)
            x = N(rng);
        for (auto& x : b)
            x = N(rng);
        const double al = N(rng), be = N(rng);
        const Matrix Ta = lsm::total_stress(sys, a, 3.0);
        const Matrix Tb = lsm::total_stress(sys, b, 3.0);
        const Matrix Tab = lsm::total_stress(sys, Vector(al * a + be * b), 3.0);
        CHECK((Ta - Ta.transpose()).norm() <= 1e-12 * Ta.norm());
        CHECK((Tab - al * Ta - be * Tb).norm() <= 1e-12 * (std::abs(al) * Ta.norm() + std::abs(be) * Tb.norm()));
    }
}

TEST_CASE("metrics of a bilinear curve")
{
    const auto curve = bilinear(100, 0.01, 0.05, 500);
    const std::vector<lsm::EventRow> ev{{0, 0.01, 3, "upper"}, {1, 0.025, 4, "lower"}, {1, 0.025, 3, "released-upper"}};
    const auto r = lsm::macro_metrics(curve, ev, 0.05, 5, "demo");
    CHECK(r.stiffness == doctest::Approx(100));
    REQUIRE(r.first_event_time);
    CHECK(*r.first_event_time == 0.01);
    REQUIRE(r.yield_strength);
    CHECK(*r.yield_strength == doctest::Approx(1.0));
    CHECK(r.tensile_strength == doctest::Approx(1.0));
    CHECK(r.event_histogram == std::vector<int>{1, 0, 1, 0, 0});
    CHECK(r.label == "demo");
}

TEST_CASE("elastic-only run")
{
    const auto curve = bilinear(50, 1.0, 0.01, 10);
    const auto r = lsm::macro_metrics(curve, {}, 0.01);
    CHECK_FALSE(r.first_event_time);
    CHECK_FALSE(r.yield_strength);
    CHECK(r.stiffness == doctest::Approx(50));
    CHECK(r.event_histogram.size() == 20);
    for (int h : r.event_histogram)
        CHECK(h == 0);
}

TEST_CASE("degenerate metrics")
{
    std::vector<lsm::CurveSample> flat{{0, 0, 0, 0, 0}, {1, 0.1, 0, 0, 0}};
    CHECK_THROWS_AS((void)lsm::macro_metrics(flat, {}, 1.0), lsm::DegenerateMetrics);
    CHECK_THROWS_AS((void)lsm::macro_metrics({}, {}, 1.0), lsm::DegenerateMetrics);
    CHECK_THROWS_AS((void)lsm::macro_metrics(bilinear(1, 1, 1, 2), {}, 1.0, 0), lsm::InvalidInput);
}

TEST_CASE("periodic lattice under box strain")
{
    const auto p = lsm::build_periodic_tri();
    const auto sys = lsm::assemble(p.lattice);
    const auto spec = lsm::make_moving_set(sys, lsm::Space::Reduced);
    const auto tr = lsm::leapfrog(spec, sys.stiffness, lsm::initial_state(sys, spec, p.initial_stress, p.loads),
                                  p.loads, p.loads.horizon);
    const auto r = lsm::macro_metrics(tr, sys, p.loads, sys.reference_volume);
    REQUIRE(r.first_event_time);
    const double t1 = *r.first_event_time;
    // unit strain rate: strain equals time
    const auto at = tr.state_at(t1);
    const double s11 = lsm::total_stress(sys, at.sigma, sys.reference_volume)(0, 0);
    CHECK(r.stiffness == doctest::Approx(s11 / t1).epsilon(1e-12));
    double prev = -1;
    for (const auto& c : r.curve) {
        CHECK(c.strain == doctest::Approx(c.time));
        if (c.time <= t1) {
            CHECK(c.s11 >= prev);
            prev = c.s11;
        }
        if (c.time > 0)
            CHECK(c.s22 > 0);
    }
}

TEST_CASE("csv round trip is exact")
{
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<lsm::CurveSample> c;
    for (int k = 0; k < 50; ++k)
        c.push_back({k * 0.1, U(rng) * 1e-3, U(rng), U(rng) * 1e-17, U(rng) * 1e20});
    std::stringstream ss;
    lsm::write_curve_csv(ss, c);
    const auto back = lsm::read_curve_csv(ss);
    REQUIRE(back.size() == c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        CHECK(same_bits(back[k].time, c[k].time));
        CHECK(same_bits(back[k].strain, c[k].strain));
        CHECK(same_bits(back[k].s11, c[k].s11));
        CHECK(same_bits(back[k].s22, c[k].s22));
        CHECK(same_bits(back[k].s12, c[k].s12));
    }

    const std::vector<lsm::EventRow> ev{{0, 0.125, 3, "upper"}, {1, 1.0 / 3, 7, "released-lower"}};
    std::stringstream es;
    lsm::write_events_csv(es, ev);
    const auto eb = lsm::read_events_csv(es);
    REQUIRE(eb.size() == 2);
    CHECK(same_bits(eb[1].time, 1.0 / 3));
    CHECK(eb[1].side == "released-lower");
    CHECK(eb[0].spring == 3);
}

TEST_CASE("malformed csv")
{
    std::stringstream bad("t,e\n1,2\n");
    CHECK_THROWS_AS((void)lsm::read_curve_csv(bad), lsm::SchemaError);
    std::stringstream short_row("time,strain,s11,s22,s12\n0,1,2\n");
    CHECK_THROWS_AS((void)lsm::read_curve_csv(short_row), lsm::SchemaError);
    std::stringstream side("ordinal,time,spring,side\n0,0.1,2,sideways\n");
    CHECK_THROWS_AS((void)lsm::read_events_csv(side), lsm::SchemaError);
}

TEST_CASE("report lists every metric")
{
    const auto r = lsm::macro_metrics(bilinear(100, 0.01, 0.05, 50), {{0, 0.01, 1, "upper"}}, 0.05, 4, "x");
    std::ostringstream os;
    lsm::write_report(os, r);
    const std::string s = os.str();
    for (const char* key : {"stiffness = ", "first_event_time = ", "yield_strength = ", "tensile_strength = ",
                            "event_histogram = 1 0 0 0", "label = x"})
        CHECK(s.find(key) != std::string::npos);
}
