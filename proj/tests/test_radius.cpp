#include <doctest.h>

#include "robusched/radius.hpp"
#include "robusched/rng.hpp"

#include <cmath>

using namespace robusched;
using namespace robusched::boundary;
using namespace robusched::radius;

namespace {

economics::EconomicParams reference_econ() {
    return economics::EconomicParams(15, 3, 1, 0.7, 4, 2, 2.1, 1.0);
}

const Box kRefBox{3.0, 4.0, 2.0, 3.0};

BoundaryCurve line_curve(double level, const Box& box) {
    // l(m, s) = m + s, feasible below the line
    return BoundaryCurve::synthetic([](double m, double s) { return m + s; }, level, box,
                                    FeasibleSide::BelowLevel);
}

RadiusSearchParams fast_params() {
    RadiusSearchParams p;
    p.r_step = 5e-4;
    p.n_theta = 1440;
    return p;
}

} // namespace

TEST_CASE("param validation") {
    RadiusSearchParams p;
    p.r_step = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidParam);
    p = RadiusSearchParams{};
    p.n_theta = 4;
    CHECK_THROWS_AS(p.validate(), InvalidParam);
    p = RadiusSearchParams{};
    p.r_max = p.r_step;
    CHECK_THROWS_AS(p.validate(), InvalidParam);
}

TEST_CASE("point-line distance on a synthetic curve") {
    const Box box{0.0, 10.0, 0.0, 10.0};
    const BoundaryCurve line = line_curve(12.0, box);
    const RadiusSearchParams params = fast_params();
    const WorkingPoint center{4.0, 4.0};
    const RadiusResult res = radius_bruteforce(center, line, params);
    const double expect = std::abs(4.0 + 4.0 - 12.0) / std::sqrt(2.0);
    CHECK(std::abs(res.r - expect) <= 2.0 * params.r_step);
    CHECK(!res.box_limited);
    // attainment: contact sits on the circle and on the curve
    CHECK(std::hypot(res.contact.m - center.m, res.contact.s - center.s) ==
          doctest::Approx(res.r).epsilon(1e-12));
    CHECK(std::abs(line.residual(res.contact)) <= params.tol_on_curve);
}

TEST_CASE("center already on the curve") {
    const Box box{0.0, 10.0, 0.0, 10.0};
    const BoundaryCurve line = line_curve(12.0, box);
    const RadiusSearchParams params = fast_params();
    const RadiusResult res = radius_bruteforce({6.0, 6.0 - 1e-5}, line, params);
    CHECK(res.r <= params.r_step);
}

TEST_CASE("infeasible center is rejected") {
    const Box box{0.0, 10.0, 0.0, 10.0};
    const BoundaryCurve line = line_curve(12.0, box);
    CHECK_THROWS_AS(radius_bruteforce({8.0, 8.0}, line, fast_params()), InfeasibleCenter);
    CHECK_THROWS_AS(radius_bruteforce({-1.0, 4.0}, line, fast_params()), InfeasibleCenter);
}

TEST_CASE("box-limited search") {
    const Box box{0.0, 1.0, 0.0, 1.0};
    // level far outside anything attainable inside the box
    const BoundaryCurve line = line_curve(50.0, box);
    const RadiusSearchParams params = fast_params();
    const RadiusResult res = radius_bruteforce({0.5, 0.5}, line, params);
    CHECK(res.box_limited);
    // capped at the contact-domain reach, beyond which no contact can exist
    CHECK(res.r ==
          doctest::Approx(line.contact_domain().max_corner_distance(0.5, 0.5)).epsilon(1e-6));
}

TEST_CASE("r_max exhausted") {
    const Box box{0.0, 10.0, 0.0, 10.0};
    const BoundaryCurve line = line_curve(12.0, box);
    RadiusSearchParams params = fast_params();
    params.r_max = 0.5; // true distance is ~2.83
    CHECK_THROWS_AS(radius_bruteforce({4.0, 4.0}, line, params), NoContactWithinRMax);
}

TEST_CASE("sampled oracle basics") {
    Polyline poly;
    poly.points = {{1.0, 1.0}};
    const RadiusResult one = radius_sampled({4.0, 5.0}, poly);
    CHECK(one.r == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(one.method == RadiusMethod::SampledOracle);

    // center equidistant from two branches: radius well-defined either way
    poly.points = {{0.0, 1.0}, {1.0, 0.0}, {2.0, 1.0}};
    const RadiusResult tie = radius_sampled({1.0, 1.0}, poly);
    CHECK(tie.r == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    Polyline empty;
    CHECK_THROWS_AS(radius_sampled({1.0, 1.0}, empty), EmptyPolyline);

    // projection beats vertex distance between vertices
    poly.points = {{0.0, 0.0}, {2.0, 0.0}};
    CHECK(radius_sampled({1.0, 1.0}, poly).r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle agreement on the model curves") {
    const RadiusSearchParams params = fast_params();
    const double trace_res = kRefBox.m_width() / 2000;
    const double tol = std::max(3.0 * params.r_step, trace_res);

    const BoundaryCurve profit(Metric::Profit, 29.5, kRefBox, 4.0, reference_econ());
    const BoundaryCurve wait(Metric::MeanWait, 0.06, kRefBox, 4.0, reference_econ());
    Rng rng(11);
    for (const BoundaryCurve* curve : {&profit, &wait}) {
        const Polyline poly = trace(*curve, 2001);
        REQUIRE(!poly.empty());
        int tested = 0;
        while (tested < 6) {
            const WorkingPoint pt{rng.uniform(3.02, 3.98), rng.uniform(2.02, 2.98)};
            if (!feasible(pt, {curve, 1})) continue;
            if (std::abs(curve->residual(pt)) <= params.tol_on_curve) continue;
            ++tested;
            const RadiusResult brute = radius_bruteforce(pt, *curve, params);
            const RadiusResult sampled = radius_sampled(pt, poly);
            if (brute.box_limited) continue;
            CHECK(std::abs(brute.r - sampled.r) <= tol);

            // lower-bound property against every vertex
            for (const auto& v : poly.points)
                CHECK(brute.r <= std::hypot(v.m - pt.m, v.s - pt.s) + trace_res);
        }
    }
}

TEST_CASE("radius pair and trade-off") {
    const Box box{0.0, 10.0, 0.0, 10.0};
    const BoundaryCurve upper = line_curve(12.0, box);
    const BoundaryCurve lower = BoundaryCurve::synthetic(
        [](double m, double s) { return m + s; }, 4.0, box, FeasibleSide::AboveLevel);
    const RadiusSearchParams params = fast_params();

    const auto [r1, r2] = radius_pair({4.0, 4.0}, upper, lower, params);
    CHECK(std::abs(r1.r - r2.r) <= 2.0 * params.r_step);

    // moving toward the upper line shrinks r1 and grows r2
    const auto [r1b, r2b] = radius_pair({4.5, 4.5}, upper, lower, params);
    CHECK(r1b.r < r1.r);
    CHECK(r2b.r > r2.r);
}

TEST_CASE("shrink when approaching the contact") {
    const Box box{0.0, 10.0, 0.0, 10.0};
    const BoundaryCurve line = line_curve(12.0, box);
    const RadiusSearchParams params = fast_params();
    const WorkingPoint c0{4.0, 4.0};
    const RadiusResult base = radius_bruteforce(c0, line, params);
    for (double t : {0.25, 0.5, 0.75}) {
        const WorkingPoint c1{c0.m + t * (base.contact.m - c0.m),
                              c0.s + t * (base.contact.s - c0.s)};
        const RadiusResult res = radius_bruteforce(c1, line, params);
        CHECK(res.r <= base.r - t * base.r + 3.0 * params.r_step);
    }
}

TEST_CASE("determinism and serial/parallel equivalence") {
    const BoundaryCurve profit(Metric::Profit, 29.5, kRefBox, 4.0, reference_econ());
    const RadiusSearchParams params = fast_params();
    const WorkingPoint pt{3.2, 2.2};
    const RadiusResult a = radius_bruteforce(pt, profit, params, Exec::Parallel);
    const RadiusResult b = radius_bruteforce(pt, profit, params, Exec::Parallel);
    const RadiusResult c = radius_bruteforce(pt, profit, params, Exec::Serial);
    CHECK(a.r == b.r);
    CHECK(a.evaluations == b.evaluations);
    CHECK(a.theta == b.theta);
    CHECK(a.r == c.r);
    CHECK(a.evaluations == c.evaluations);
    CHECK(a.contact.m == c.contact.m);
    CHECK(a.contact.s == c.contact.s);
}
