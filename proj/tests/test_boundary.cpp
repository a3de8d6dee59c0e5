#include <doctest.h>

#include "robusched/boundary.hpp"
#include "robusched/rng.hpp"

#include <cmath>
#include <sstream>

using namespace robusched;
using namespace robusched::boundary;

namespace {

const Box kBox{3.0, 4.0, 2.0, 3.0};

economics::EconomicParams reference_econ() {
    return economics::EconomicParams(15, 3, 1, 0.7, 4, 2, 2.1, 1.0);
}

BoundaryCurve profit_curve(double level) {
    return BoundaryCurve(Metric::Profit, level, kBox, 4.0, reference_econ());
}

BoundaryCurve wait_curve(double level) {
    return BoundaryCurve(Metric::MeanWait, level, kBox, 4.0, reference_econ());
}

// Scalar bisection oracle along one column, independent of trace().
double column_root_oracle(const BoundaryCurve& c, double m) {
    double lo = c.box.s_min, hi = c.box.s_max;
    double flo = c.value(m, lo) - c.level;
    double fhi = c.value(m, hi) - c.level;
    REQUIRE(((flo < 0) != (fhi < 0)));
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = c.value(m, mid) - c.level;
        if ((f < 0) == (flo < 0)) {
            lo = mid;
            flo = f;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double hausdorff(const Polyline& a, const Polyline& b) {
    auto one_sided = [](const Polyline& from, const Polyline& to) {
        double worst = 0.0;
        for (const auto& p : from.points) {
            double best = HUGE_VAL;
            for (std::size_t i = 0; i + 1 < to.points.size(); ++i) {
                const auto& u = to.points[i];
                const auto& v = to.points[i + 1];
                const double vm = v.m - u.m, vs = v.s - u.s;
                const double len2 = vm * vm + vs * vs;
                double t = len2 > 0 ? ((p.m - u.m) * vm + (p.s - u.s) * vs) / len2 : 0.0;
                t = std::clamp(t, 0.0, 1.0);
                best = std::min(best, std::hypot(p.m - (u.m + t * vm), p.s - (u.s + t * vs)));
            }
            if (to.points.size() == 1)
                best = std::hypot(p.m - to.points[0].m, p.s - to.points[0].s);
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

} // namespace

TEST_CASE("curve construction and defaults") {
    const BoundaryCurve p = profit_curve(28.0);
    CHECK(p.feasible_side == FeasibleSide::AboveLevel);
    const BoundaryCurve w = wait_curve(0.05);
    CHECK(w.feasible_side == FeasibleSide::BelowLevel);
    CHECK_THROWS_AS(BoundaryCurve(Metric::Profit, 1.0, Box{3, 4, 1, 1.2}, 4.0, reference_econ()),
                    NonErgodic);
    CHECK_THROWS_AS(BoundaryCurve(Metric::Profit, 1.0, Box{4, 3, 2, 3}, 4.0, reference_econ()),
                    InvalidParam);
}

TEST_CASE("residual sign and continuity") {
    const BoundaryCurve c = profit_curve(28.0);
    // profit at (3, 2) is far above 28, residual positive
    CHECK(c.residual({3.0, 2.0}) > 0.0);

    // Lipschitz probe on a grid: finite slope bound
    double worst = 0.0;
    const double h = 1e-4;
    for (double m = 3.0; m <= 3.99; m += 0.1) {
        for (double s = 2.0; s <= 2.99; s += 0.1) {
            const double r0 = c.residual({m, s});
            worst = std::max(worst, std::abs(c.residual({m + h, s}) - r0) / h);
            worst = std::max(worst, std::abs(c.residual({m, s + h}) - r0) / h);
        }
    }
    CHECK(worst < 100.0);
}

TEST_CASE("gradient") {
    // linear synthetic metric: central differences are exact
    const BoundaryCurve lin = BoundaryCurve::synthetic(
        [](double m, double s) { return 2.0 * m + 3.0 * s - 1.0; }, 10.0, kBox,
        FeasibleSide::AboveLevel);
    const Gradient g = gradient(lin, {3.5, 2.5});
    CHECK(g.dm == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(g.ds == doctest::Approx(3.0).epsilon(1e-8));

    // symmetric in h by construction
    const BoundaryCurve c = wait_curve(0.05);
    const Gradient a = gradient(c, {3.4, 2.6}, 1e-5);
    const Gradient b = gradient(c, {3.4, 2.6}, -1e-5);
    CHECK(a.dm == b.dm);
    CHECK(a.ds == b.ds);

    // mean wait falls in both directions
    CHECK(a.dm < 0.0);
    CHECK(a.ds < 0.0);

    CHECK_THROWS_AS(gradient(c, {3.0, 2.0}), StencilOutOfBox);

    // Richardson-extrapolated oracle at random interior points
    Rng rng(7);
    for (int i = 0; i < 10; ++i) {
        const WorkingPoint pt{rng.uniform(3.1, 3.9), rng.uniform(2.1, 2.9)};
        const double h = 1e-4;
        const Gradient g1 = gradient(c, pt, h);
        auto rich = [&](bool wrt_m) {
            auto f = [&](double dm, double ds) { return c.value(pt.m + dm, pt.s + ds); };
            const double d1 = wrt_m ? (f(h, 0) - f(-h, 0)) / (2 * h) : (f(0, h) - f(0, -h)) / (2 * h);
            const double d2 = wrt_m ? (f(2 * h, 0) - f(-2 * h, 0)) / (4 * h)
                                    : (f(0, 2 * h) - f(0, -2 * h)) / (4 * h);
            return (4.0 * d1 - d2) / 3.0;
        };
        CHECK(g1.dm == doctest::Approx(rich(true)).epsilon(1e-5));
        CHECK(g1.ds == doctest::Approx(rich(false)).epsilon(1e-5));
    }
}

TEST_CASE("trace finds column roots") {
    // pick a level that the wait curve attains inside the box
    const double level = 0.5 * (queueing::mean_wait_approx(3, 2, 4) +
                                queueing::mean_wait_approx(3, 3, 4));
    const BoundaryCurve c = wait_curve(level);
    const Polyline poly = trace(c, 41);
    REQUIRE(!poly.empty());
    CHECK(poly.max_residual <= 1e-8);
    for (const auto& p : poly.points) CHECK(std::abs(c.residual(p)) <= 1e-6);

    // vertices sorted by m, s decreasing along the polyline
    for (std::size_t i = 1; i < poly.points.size(); ++i) {
        CHECK(poly.points[i].m > poly.points[i - 1].m);
        CHECK(poly.points[i].s < poly.points[i - 1].s);
    }

    // first column root matches an independent scalar bisection
    const double s_star = column_root_oracle(c, poly.points.front().m);
    CHECK(poly.points.front().s == doctest::Approx(s_star).epsilon(1e-9));

    // unattainable level -> empty polyline (the mean wait never drops
    // below its value at the domain's fastest corner)
    CHECK(trace(wait_curve(1e-4), 41).empty());
    CHECK(trace(profit_curve(100.0), 41).empty());
    CHECK_THROWS_AS(trace(c, 1), InvalidParam);
}

TEST_CASE("trace refinement") {
    const BoundaryCurve c = profit_curve(29.0);
    const Polyline coarse = trace(c, 21);
    const Polyline fine = trace(c, 41); // doubled columns share all coarse positions
    REQUIRE(!coarse.empty());
    REQUIRE(!fine.empty());
    std::size_t shared = 0;
    for (const auto& p : coarse.points)
        for (const auto& q : fine.points)
            if (p.m == q.m) {
                ++shared;
                CHECK(p.s == doctest::Approx(q.s).epsilon(1e-12));
            }
    CHECK(shared == coarse.points.size());
    CHECK(hausdorff(coarse, fine) <= kBox.m_width() / 21);
}

TEST_CASE("serial and parallel trace agree bit-exactly") {
    const BoundaryCurve c = profit_curve(29.0);
    const Polyline a = trace(c, 101, Exec::Serial);
    const Polyline b = trace(c, 101, Exec::Parallel);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].m == b.points[i].m);
        CHECK(a.points[i].s == b.points[i].s);
    }
}

TEST_CASE("feasible") {
    const BoundaryCurve p = profit_curve(28.0);
    const BoundaryCurve w = wait_curve(0.06);
    const std::vector<BoundaryCurve> none;
    CHECK(feasible({3.5, 2.5}, {none.data(), 0}));

    // the profit corner is profit-feasible
    const std::vector<BoundaryCurve> ponly{p};
    CHECK(feasible({3.0, 2.0}, {ponly.data(), 1}));

    // joint membership needs both sides to hold
    const std::vector<BoundaryCurve> both{p, w};
    CHECK(feasible({3.6, 2.3}, {both.data(), 2}));
    CHECK(!feasible({3.0, 2.0}, {both.data(), 2})); // wait too long at the slow corner

    // a traced vertex is feasible (closed region)
    const Polyline poly = trace(p, 41);
    REQUIRE(!poly.empty());
    CHECK(feasible(poly.points[poly.points.size() / 2], {ponly.data(), 1}));

    // flipping the side flips the verdict for strictly-off-curve points
    BoundaryCurve flipped = p;
    flipped.feasible_side = FeasibleSide::BelowLevel;
    const std::vector<BoundaryCurve> fonly{flipped};
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const WorkingPoint pt{rng.uniform(3.0, 4.0), rng.uniform(2.0, 3.0)};
        if (std::abs(p.residual(pt)) <= 1e-6) continue;
        CHECK(feasible(pt, {ponly.data(), 1}) != feasible(pt, {fonly.data(), 1}));
    }
}

TEST_CASE("multiple roots per column are flagged and resolved") {
    // parabola in s: two roots per column, symmetric around s = 2.5
    const BoundaryCurve bowl = BoundaryCurve::synthetic(
        [](double, double s) { return (s - 2.5) * (s - 2.5); }, 0.04, kBox,
        FeasibleSide::AboveLevel);
    const Polyline poly = trace(bowl, 11);
    REQUIRE(!poly.empty());
    CHECK(poly.multi_root_columns == static_cast<int>(poly.points.size()));
    // one root kept per column, adjacent to the feasible end
    for (const auto& p : poly.points) CHECK(std::abs(bowl.residual(p)) <= 1e-6);
}

TEST_CASE("polyline csv export") {
    const BoundaryCurve c = profit_curve(29.0);
    const Polyline poly = trace(c, 11);
    std::ostringstream os;
    write_csv(poly, c, os);
    const std::string text = os.str();
    CHECK(text.rfind("m,s,residual\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : text)
        if (ch == '\n') ++lines;
    CHECK(lines == poly.points.size() + 1);
}
