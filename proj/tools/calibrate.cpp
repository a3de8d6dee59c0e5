// Recovers the boundary levels bundled with the default scenario:
//  - the profit level whose curve lies 0.852 away from the working point (3, 2)
//  - the joint profit/wait levels whose curves both lie 0.127 away from the
//    equal-margin optimum (3.7359, 2.1707)
// Prints the levels plus grid diagnostics for the joint landscape.

#include "robusched/optim.hpp"
#include "robusched/radius.hpp"
#include "robusched/scenario.hpp"

#include <cstdio>

using namespace robusched;
using namespace robusched::boundary;

namespace {

const Box kBox{3.0, 4.0, 2.0, 3.0};
constexpr double kLambda = 4.0;
constexpr int kColumns = 4001;

economics::EconomicParams reference_econ() {
    return economics::EconomicParams(15, 3, 1, 0.7, 4, 2, 2.1, 1.0);
}

double distance_to_level(Metric metric, double level, WorkingPoint pt) {
    const BoundaryCurve curve(metric, level, kBox, kLambda, reference_econ());
    const Polyline poly = trace(curve, kColumns);
    if (poly.empty()) return -1.0;
    return radius::radius_sampled(pt, poly).r;
}

// Solve distance_to_level(metric, level, pt) == target by bisection; the
// distance grows monotonically as the level moves away from the point's side.
double calibrate_level(Metric metric, WorkingPoint pt, double target, double lo, double hi) {
    auto dist = [&](double lv) { return distance_to_level(metric, lv, pt); };
    double flo = dist(lo), fhi = dist(hi);
    if ((flo < target) == (fhi < target)) {
        std::printf("calibration bracket failed: d(%g)=%g d(%g)=%g target=%g\n", lo, flo, hi, fhi,
                    target);
        return -1.0;
    }
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = dist(mid);
        if ((f < target) == (flo < target)) {
            lo = mid;
            flo = f;
        } else {
            hi = mid;
            fhi = f;
        }
    }
    return 0.5 * (lo + hi);
}

void joint_grid_report(double profit_level, double wait_level) {
    optim::Scenario sc;
    sc.kind = optim::ScenarioKind::Joint;
    sc.curves.emplace_back(Metric::Profit, profit_level, kBox, kLambda, reference_econ());
    sc.curves.emplace_back(Metric::MeanWait, wait_level, kBox, kLambda, reference_econ());
    sc.trace_columns = 2001;
    optim::ScenarioEvaluator eval(sc);

    const int n = 200;
    double best = -1e18;
    WorkingPoint arg{0, 0};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const WorkingPoint pt{kBox.m_min + kBox.m_width() * i / (n - 1),
                                  kBox.s_min + kBox.s_width() * j / (n - 1)};
            const double f = eval.fitness(pt);
            if (f > best) {
                best = f;
                arg = pt;
            }
        }
    }
    const double d1 = radius::radius_sampled(arg, eval.polylines()[0]).r;
    const double d2 = radius::radius_sampled(arg, eval.polylines()[1]).r;
    std::printf("joint grid argmax: (%.6f, %.6f) fitness=%.6f  r1=%.6f r2=%.6f |r1-r2|=%.6f\n",
                arg.m, arg.s, best, d1, d2, std::abs(d1 - d2));
    const WorkingPoint anchor{3.7359, 2.1707};
    std::printf("anchor point fitness: %.6f (r1=%.6f r2=%.6f)\n", eval.fitness(anchor),
                radius::radius_sampled(anchor, eval.polylines()[0]).r,
                radius::radius_sampled(anchor, eval.polylines()[1]).r);
}

} // namespace

int main() {
    const WorkingPoint corner{3.0, 2.0};
    const double g_corner = economics::profit_closed(3, 2, kLambda, reference_econ());
    std::printf("profit_closed(3,2) = %.9f\n", g_corner);
    std::printf("profit_closed(4,3) = %.9f\n", economics::profit_closed(4, 3, kLambda, reference_econ()));

    const double level_a = calibrate_level(Metric::Profit, corner, 0.852, 25.0, g_corner - 0.2);
    std::printf("profit-only level: %.9f\n", level_a);
    std::printf("  check distance: %.6f\n", distance_to_level(Metric::Profit, level_a, corner));

    const WorkingPoint anchor_b{3.7359, 2.1707};
    const double g_b = economics::profit_closed(anchor_b.m, anchor_b.s, kLambda, reference_econ());
    const double t_b = queueing::mean_wait_approx(anchor_b.m, anchor_b.s, kLambda);
    std::printf("G(joint anchor) = %.9f, T(joint anchor) = %.9f\n", g_b, t_b);

    const double level_joint_g = calibrate_level(Metric::Profit, anchor_b, 0.127, 25.0, g_b - 0.05);
    std::printf("joint profit level: %.9f (distance %.6f)\n", level_joint_g,
                distance_to_level(Metric::Profit, level_joint_g, anchor_b));

    const double t_lo = queueing::mean_wait_approx(4, 3, kLambda); // smallest T in the box
    const double level_joint_t =
        calibrate_level(Metric::MeanWait, anchor_b, 0.127, t_b + 1e-5, 0.17);
    std::printf("joint wait level: %.9f (distance %.6f, box T range [%.6f, %.6f])\n", level_joint_t,
                distance_to_level(Metric::MeanWait, level_joint_t, anchor_b), t_lo,
                queueing::mean_wait_approx(3, 2, kLambda));

    joint_grid_report(level_joint_g, level_joint_t);
    return 0;
}
