// Serial-vs-parallel timing comparison for the data-parallel kernels:
// boundary tracing, the radius shell scan, surface grids and population
// evaluation. The serial path is the reference implementation the tests
// check against; this target reports what the OpenMP path buys on the
// current machine.

#include "robusched/optim.hpp"
#include "robusched/radius.hpp"
#include "robusched/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace robusched;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    // one warmup, then best-of-reps
    fn();
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (dt < best) best = dt;
    }
    return best;
}

void row(const char* name, double serial_s, double parallel_s) {
    std::printf("%-28s %10.4fs %10.4fs %8.2fx\n", name, serial_s, parallel_s,
                serial_s / parallel_s);
}

} // namespace

int main() {
    const auto cfg = scenario::reference_scenario();
    const auto cfg_joint = scenario::reference_scenario_joint();
    const boundary::BoundaryCurve profit = scenario::profit_curve(cfg);
    const boundary::BoundaryCurve wait = scenario::wait_curve(cfg_joint);

    std::printf("threads available: %d\n", max_threads());
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    row("trace 4001 columns",
        time_of([&] { boundary::trace(profit, 4001, Exec::Serial); }, 3),
        time_of([&] { boundary::trace(profit, 4001, Exec::Parallel); }, 3));

    const radius::RadiusSearchParams rp = cfg.radius;
    row("radius shell scan (3,2)",
        time_of([&] { radius::radius_bruteforce({3.0, 2.0}, profit, rp, Exec::Serial); }, 2),
        time_of([&] { radius::radius_bruteforce({3.0, 2.0}, profit, rp, Exec::Parallel); }, 2));

    const auto econ = scenario::econ_params(cfg);
    auto grid = [&](Exec exec) {
        const int n = 400;
        volatile double sink = 0.0;
        if (exec == Exec::Serial) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    sink = economics::profit_closed(3.0 + i / (n - 1.0), 2.0 + j / (n - 1.0), 4.0,
                                                    econ);
        } else {
#pragma omp parallel for schedule(static) collapse(2)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    sink = economics::profit_closed(3.0 + i / (n - 1.0), 2.0 + j / (n - 1.0), 4.0,
                                                    econ);
        }
        (void)sink;
    };
    row("profit surface 400x400", time_of([&] { grid(Exec::Serial); }, 3),
        time_of([&] { grid(Exec::Parallel); }, 3));

    optim::Scenario sc;
    sc.kind = optim::ScenarioKind::Joint;
    sc.curves = {profit, wait};
    sc.radius_params = rp;
    optim::OptimizerConfig oc = cfg.optimizer;
    oc.max_iters = 60;
    oc.seed = 5;
    auto evaluator_run = [&](Exec exec) {
        optim::ScenarioEvaluator eval(sc, exec);
        optim::BoxObjective obj{eval.box(),
                                [&eval](boundary::WorkingPoint pt) { return eval.fitness(pt); }};
        optim::optimize_box(obj, oc, exec);
    };
    row("DBO joint run (60 iters)", time_of([&] { evaluator_run(Exec::Serial); }, 2),
        time_of([&] { evaluator_run(Exec::Parallel); }, 2));

    return 0;
}
