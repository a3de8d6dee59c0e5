#include "robusched/optim.hpp"

#include "robusched/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace robusched::optim {

using boundary::Box;
using boundary::FeasibleSide;
using boundary::Metric;
using boundary::Polyline;

void DboParams::validate() const {
    const double sum = roll_fraction + brood_fraction + forage_fraction + thief_fraction;
    if (roll_fraction < 0 || brood_fraction < 0 || forage_fraction < 0 || thief_fraction < 0 ||
        std::abs(sum - 1.0) > 1e-9)
        throw InvalidParam("role fractions must be non-negative and sum to 1");
    if (!(k > 0.0 && k <= 0.2)) throw InvalidParam("deflection coefficient k must be in (0, 0.2]");
    if (!(b_coef > 0.0 && b_coef < 1.0)) throw InvalidParam("b_coef must be in (0, 1)");
    if (!(alpha_plus_prob >= 0.0 && alpha_plus_prob <= 1.0))
        throw InvalidParam("alpha_plus_prob must be a probability");
}

void OptimizerConfig::validate() const {
    if (population < 4) throw InvalidParam("population must be at least 4");
    if (max_iters < 1) throw InvalidParam("max_iters must be at least 1");
    dbo.validate();
}

void Scenario::validate() const {
    auto count = [&](Metric m) {
        int n = 0;
        for (const auto& c : curves)
            if (c.metric == m) ++n;
        return n;
    };
    switch (kind) {
    case ScenarioKind::ProfitOnly:
        if (curves.size() != 1 || count(Metric::Profit) != 1)
            throw InvalidParam("ProfitOnly scenario needs exactly one profit curve");
        break;
    case ScenarioKind::DeadlineOnly:
        if (curves.size() != 1 || count(Metric::MeanWait) != 1)
            throw InvalidParam("DeadlineOnly scenario needs exactly one mean-wait curve");
        break;
    case ScenarioKind::Joint:
        if (curves.size() != 2 || count(Metric::Profit) != 1 || count(Metric::MeanWait) != 1)
            throw InvalidParam("Joint scenario needs one profit and one mean-wait curve");
        break;
    }
    if (trace_columns < 2) throw InvalidParam("trace_columns must be at least 2");
    radius_params.validate();
}

namespace {

constexpr double kLattice = 1e-4;
constexpr double kInfeasiblePenalty = -1e6;

double snap(double v) { return std::llround(v / kLattice) * kLattice; }

std::uint64_t lattice_key(WorkingPoint pt) {
    const auto km = static_cast<std::uint64_t>(std::llround(pt.m / kLattice) + (1LL << 30));
    const auto ks = static_cast<std::uint64_t>(std::llround(pt.s / kLattice) + (1LL << 30));
    return (km << 32) | (ks & 0xffffffffULL);
}

} // namespace

ScenarioEvaluator::ScenarioEvaluator(const Scenario& scenario, Exec exec) : scenario_(scenario) {
    scenario_.validate();
    for (const auto& curve : scenario_.curves) {
        Polyline poly = boundary::trace(curve, scenario_.trace_columns, exec);
        if (poly.empty())
            throw TraceUnavailable("boundary level " + std::to_string(curve.level) +
                                   " does not cross the search box");
        polylines_.push_back(std::move(poly));
    }
}

bool ScenarioEvaluator::is_feasible(WorkingPoint pt) const {
    return boundary::feasible(pt, {scenario_.curves.data(), scenario_.curves.size()});
}

double ScenarioEvaluator::fitness_uncached(WorkingPoint pt) const {
    double infeasible_depth = 0.0;
    bool infeasible = false;
    double r = HUGE_VAL;
    for (std::size_t i = 0; i < scenario_.curves.size(); ++i) {
        const BoundaryCurve& c = scenario_.curves[i];
        const double dist = radius::radius_sampled(pt, polylines_[i]).r;
        const double res = c.residual(pt);
        const bool ok = c.feasible_side == FeasibleSide::AboveLevel
                            ? res >= -boundary::kOnCurveTol
                            : res <= boundary::kOnCurveTol;
        if (!ok) {
            infeasible = true;
            infeasible_depth += dist;
        }
        r = std::min(r, dist);
    }
    if (infeasible) return kInfeasiblePenalty - infeasible_depth;
    return r;
}

double ScenarioEvaluator::fitness(WorkingPoint pt) const {
    const WorkingPoint snapped{snap(pt.m), snap(pt.s)};
    const std::uint64_t key = lattice_key(snapped);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const double value = fitness_uncached(snapped);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(key, value);
    return value;
}

namespace {

struct Population {
    std::vector<WorkingPoint> pos;
    std::vector<double> fit;
};

WorkingPoint clamp_to(const Box& box, WorkingPoint p) {
    return {std::clamp(p.m, box.m_min, box.m_max), std::clamp(p.s, box.s_min, box.s_max)};
}

void evaluate(const BoxObjective& obj, const std::vector<WorkingPoint>& pts,
              std::vector<double>& out, Exec exec) {
    const int n = static_cast<int>(pts.size());
    out.resize(n);
    if (exec == Exec::Serial) {
        for (int i = 0; i < n; ++i) out[i] = obj.fitness(pts[i]);
    } else {
#pragma omp parallel for schedule(dynamic, 1)
        for (int i = 0; i < n; ++i) out[i] = obj.fitness(pts[i]);
    }
}

struct Elite {
    WorkingPoint pos{};
    double fit = -HUGE_VAL;

    void offer(WorkingPoint p, double f) {
        if (f > fit) {
            fit = f;
            pos = p;
        }
    }
};

// Role boundaries with largest-remainder rounding so counts sum to N.
std::array<int, 4> role_counts(const DboParams& p, int n) {
    const double fracs[4] = {p.roll_fraction, p.brood_fraction, p.forage_fraction,
                             p.thief_fraction};
    std::array<int, 4> counts{};
    std::array<std::pair<double, int>, 4> rema{};
    int total = 0;
    for (int i = 0; i < 4; ++i) {
        const double exact = fracs[i] * n;
        counts[i] = static_cast<int>(exact);
        rema[i] = {exact - counts[i], i};
        total += counts[i];
    }
    std::sort(rema.begin(), rema.end(), [](auto a, auto b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int i = 0; total < n; ++i, ++total) ++counts[rema[i % 4].second];
    return counts;
}

double dance_angle(Rng& rng) {
    for (;;) {
        const double theta = rng.uniform() * M_PI;
        if (theta < 1e-3 || std::abs(theta - M_PI / 2.0) < 1e-3 || theta > M_PI - 1e-3) continue;
        return theta;
    }
}

GenericRun dbo_core(const BoxObjective& obj, const OptimizerConfig& cfg, Exec exec) {
    const Box& box = obj.box;
    const int n = cfg.population;
    const auto counts = role_counts(cfg.dbo, n);
    const int roll_end = counts[0];
    const int brood_end = roll_end + counts[1];
    const int forage_end = brood_end + counts[2];

    std::vector<Rng> streams;
    streams.reserve(n);
    Rng root(cfg.seed);
    for (int i = 0; i < n; ++i) streams.push_back(root.split(i + 1));

    Population pop;
    pop.pos.resize(n);
    for (int i = 0; i < n; ++i)
        pop.pos[i] = {streams[i].uniform(box.m_min, box.m_max),
                      streams[i].uniform(box.s_min, box.s_max)};
    evaluate(obj, pop.pos, pop.fit, exec);
    long evals = n;

    std::vector<WorkingPoint> prev = pop.pos; // x^{t-1}; zero momentum at t = 1
    Elite gbest;
    for (int i = 0; i < n; ++i) gbest.offer(pop.pos[i], pop.fit[i]);

    GenericRun run;
    run.trace.push_back({0, gbest.fit, gbest.pos, evals});

    std::vector<WorkingPoint> cand(n);
    std::vector<double> cand_fit;
    const DboParams& dp = cfg.dbo;

    for (int t = 1; t <= cfg.max_iters; ++t) {
        int worst_i = 0, lbest_i = 0;
        for (int i = 1; i < n; ++i) {
            if (pop.fit[i] < pop.fit[worst_i]) worst_i = i;
            if (pop.fit[i] > pop.fit[lbest_i]) lbest_i = i;
        }
        const WorkingPoint worst = pop.pos[worst_i];
        const WorkingPoint lbest = pop.pos[lbest_i];

        // Elite region shrinking toward the global best.
        const double shrink = std::pow(1.0 - static_cast<double>(t) / cfg.max_iters, 2.0);
        const double half_m = 0.5 * shrink * box.m_width();
        const double half_s = 0.5 * shrink * box.s_width();
        const double lb_m = std::max(box.m_min, gbest.pos.m - half_m);
        const double ub_m = std::min(box.m_max, gbest.pos.m + half_m);
        const double lb_s = std::max(box.s_min, gbest.pos.s - half_s);
        const double ub_s = std::min(box.s_max, gbest.pos.s + half_s);

        const std::vector<WorkingPoint> snapshot = pop.pos;
        for (int i = 0; i < n; ++i) {
            Rng& rng = streams[i];
            const WorkingPoint x = pop.pos[i];
            WorkingPoint c{};
            if (i < roll_end) {
                if (rng.uniform() < 0.9) {
                    const double alpha = rng.uniform() > (1.0 - dp.alpha_plus_prob) ? 1.0 : -1.0;
                    c.m = x.m + alpha * dp.k * prev[i].m + dp.b_coef * std::abs(x.m - worst.m);
                    c.s = x.s + alpha * dp.k * prev[i].s + dp.b_coef * std::abs(x.s - worst.s);
                } else {
                    const double tan_theta = std::tan(dance_angle(rng));
                    c.m = x.m + tan_theta * std::abs(x.m - prev[i].m);
                    c.s = x.s + tan_theta * std::abs(x.s - prev[i].s);
                }
            } else if (i < brood_end) {
                const double b1m = rng.uniform(), b1s = rng.uniform();
                const double b2m = rng.uniform(), b2s = rng.uniform();
                c.m = gbest.pos.m + b1m * (x.m - lb_m) + b2m * (x.m - ub_m);
                c.s = gbest.pos.s + b1s * (x.s - lb_s) + b2s * (x.s - ub_s);
                c.m = std::clamp(c.m, lb_m, ub_m);
                c.s = std::clamp(c.s, lb_s, ub_s);
            } else if (i < forage_end) {
                const double c1 = rng.normal();
                const double c2m = rng.uniform(), c2s = rng.uniform();
                c.m = x.m + c1 * (x.m - lb_m) + c2m * (x.m - ub_m);
                c.s = x.s + c1 * (x.s - lb_s) + c2s * (x.s - ub_s);
            } else {
                const double gm = rng.normal(), gs = rng.normal();
                c.m = lbest.m + dp.thief_scale * gm *
                                    (std::abs(x.m - gbest.pos.m) + std::abs(x.m - lbest.m));
                c.s = lbest.s + dp.thief_scale * gs *
                                    (std::abs(x.s - gbest.pos.s) + std::abs(x.s - lbest.s));
            }
            cand[i] = clamp_to(box, c);
        }

        evaluate(obj, cand, cand_fit, exec);
        evals += n;

        for (int i = 0; i < n; ++i) {
            if (cand_fit[i] > pop.fit[i]) {
                pop.pos[i] = cand[i];
                pop.fit[i] = cand_fit[i];
            }
            gbest.offer(cand[i], cand_fit[i]);
        }
        prev = snapshot;
        run.trace.push_back({t, gbest.fit, gbest.pos, evals});
    }

    run.best = gbest.pos;
    run.best_fitness = gbest.fit;
    run.total_evals = evals;
    return run;
}

GenericRun de_core(const BoxObjective& obj, const OptimizerConfig& cfg, Exec exec) {
    const Box& box = obj.box;
    const int n = cfg.population;
    std::vector<Rng> streams;
    streams.reserve(n);
    Rng root(cfg.seed);
    for (int i = 0; i < n; ++i) streams.push_back(root.split(i + 1));

    Population pop;
    pop.pos.resize(n);
    for (int i = 0; i < n; ++i)
        pop.pos[i] = {streams[i].uniform(box.m_min, box.m_max),
                      streams[i].uniform(box.s_min, box.s_max)};
    evaluate(obj, pop.pos, pop.fit, exec);
    long evals = n;

    Elite gbest;
    for (int i = 0; i < n; ++i) gbest.offer(pop.pos[i], pop.fit[i]);

    GenericRun run;
    run.trace.push_back({0, gbest.fit, gbest.pos, evals});

    std::vector<WorkingPoint> cand(n);
    std::vector<double> cand_fit;

    for (int t = 1; t <= cfg.max_iters; ++t) {
        for (int i = 0; i < n; ++i) {
            Rng& rng = streams[i];
            int r1, r2, r3;
            do r1 = static_cast<int>(rng.below(n)); while (r1 == i);
            do r2 = static_cast<int>(rng.below(n)); while (r2 == i || r2 == r1);
            do r3 = static_cast<int>(rng.below(n)); while (r3 == i || r3 == r1 || r3 == r2);
            const WorkingPoint mut{
                pop.pos[r1].m + cfg.de.weight * (pop.pos[r2].m - pop.pos[r3].m),
                pop.pos[r1].s + cfg.de.weight * (pop.pos[r2].s - pop.pos[r3].s)};
            const int j_rand = static_cast<int>(rng.below(2));
            WorkingPoint c = pop.pos[i];
            if (rng.uniform() < cfg.de.crossover || j_rand == 0) c.m = mut.m;
            if (rng.uniform() < cfg.de.crossover || j_rand == 1) c.s = mut.s;
            cand[i] = clamp_to(box, c);
        }
        evaluate(obj, cand, cand_fit, exec);
        evals += n;
        for (int i = 0; i < n; ++i) {
            if (cand_fit[i] > pop.fit[i]) {
                pop.pos[i] = cand[i];
                pop.fit[i] = cand_fit[i];
            }
            gbest.offer(cand[i], cand_fit[i]);
        }
        run.trace.push_back({t, gbest.fit, gbest.pos, evals});
    }
    run.best = gbest.pos;
    run.best_fitness = gbest.fit;
    run.total_evals = evals;
    return run;
}

GenericRun pso_core(const BoxObjective& obj, const OptimizerConfig& cfg, Exec exec) {
    const Box& box = obj.box;
    const int n = cfg.population;
    std::vector<Rng> streams;
    streams.reserve(n);
    Rng root(cfg.seed);
    for (int i = 0; i < n; ++i) streams.push_back(root.split(i + 1));

    Population pop;
    pop.pos.resize(n);
    std::vector<WorkingPoint> vel(n, WorkingPoint{0.0, 0.0});
    for (int i = 0; i < n; ++i)
        pop.pos[i] = {streams[i].uniform(box.m_min, box.m_max),
                      streams[i].uniform(box.s_min, box.s_max)};
    evaluate(obj, pop.pos, pop.fit, exec);
    long evals = n;

    std::vector<WorkingPoint> pbest = pop.pos;
    std::vector<double> pbest_fit = pop.fit;
    Elite gbest;
    for (int i = 0; i < n; ++i) gbest.offer(pop.pos[i], pop.fit[i]);

    GenericRun run;
    run.trace.push_back({0, gbest.fit, gbest.pos, evals});

    for (int t = 1; t <= cfg.max_iters; ++t) {
        for (int i = 0; i < n; ++i) {
            Rng& rng = streams[i];
            const double u1m = rng.uniform(), u1s = rng.uniform();
            const double u2m = rng.uniform(), u2s = rng.uniform();
            vel[i].m = cfg.pso.inertia * vel[i].m + cfg.pso.cognitive * u1m * (pbest[i].m - pop.pos[i].m) +
                       cfg.pso.social * u2m * (gbest.pos.m - pop.pos[i].m);
            vel[i].s = cfg.pso.inertia * vel[i].s + cfg.pso.cognitive * u1s * (pbest[i].s - pop.pos[i].s) +
                       cfg.pso.social * u2s * (gbest.pos.s - pop.pos[i].s);
            pop.pos[i] = clamp_to(box, {pop.pos[i].m + vel[i].m, pop.pos[i].s + vel[i].s});
        }
        evaluate(obj, pop.pos, pop.fit, exec);
        evals += n;
        for (int i = 0; i < n; ++i) {
            if (pop.fit[i] > pbest_fit[i]) {
                pbest_fit[i] = pop.fit[i];
                pbest[i] = pop.pos[i];
            }
            gbest.offer(pop.pos[i], pop.fit[i]);
        }
        run.trace.push_back({t, gbest.fit, gbest.pos, evals});
    }
    run.best = gbest.pos;
    run.best_fitness = gbest.fit;
    run.total_evals = evals;
    return run;
}

} // namespace

GenericRun optimize_box(const BoxObjective& obj, const OptimizerConfig& cfg, Exec exec) {
    cfg.validate();
    switch (cfg.algorithm) {
    case Algorithm::DBO: return dbo_core(obj, cfg, exec);
    case Algorithm::DE: return de_core(obj, cfg, exec);
    case Algorithm::PSO: return pso_core(obj, cfg, exec);
    }
    throw InvalidParam("unknown algorithm");
}

OptimizerRun run_optimizer(const Scenario& scenario, const OptimizerConfig& cfg, Exec exec) {
    ScenarioEvaluator eval(scenario, exec);
    BoxObjective obj{eval.box(), [&eval](WorkingPoint pt) { return eval.fitness(pt); }};
    GenericRun g = optimize_box(obj, cfg, exec);

    OptimizerRun out;
    out.best = g.best;
    out.best_fitness = g.best_fitness;
    out.trace = std::move(g.trace);
    out.total_evals = g.total_evals;
    for (const BoundaryCurve& curve : scenario.curves)
        out.radii.push_back(radius::radius_bruteforce(out.best, curve, scenario.radius_params, exec));
    return out;
}

OptimizerRun dbo_optimize(const Scenario& scenario, OptimizerConfig cfg, Exec exec) {
    cfg.algorithm = Algorithm::DBO;
    return run_optimizer(scenario, cfg, exec);
}

OptimizerRun de_optimize(const Scenario& scenario, OptimizerConfig cfg, Exec exec) {
    cfg.algorithm = Algorithm::DE;
    return run_optimizer(scenario, cfg, exec);
}

OptimizerRun pso_optimize(const Scenario& scenario, OptimizerConfig cfg, Exec exec) {
    cfg.algorithm = Algorithm::PSO;
    return run_optimizer(scenario, cfg, exec);
}

int iters_to_within_1pct(const ConvergenceTrace& trace) {
    if (trace.empty()) return 0;
    const double final = trace.back().best_fitness;
    const double target = final - 0.01 * std::abs(final);
    for (const TracePoint& tp : trace)
        if (tp.best_fitness >= target) return tp.iter;
    return trace.back().iter;
}

CompareResult compare(const Scenario& scenario, const std::vector<OptimizerConfig>& cfgs,
                      int runs, Exec exec) {
    if (cfgs.size() < 2) throw InvalidParam("compare needs at least 2 configurations");
    if (runs < 1) throw InvalidParam("compare needs at least 1 run");
    CompareResult out;
    for (const OptimizerConfig& base : cfgs) {
        for (int r = 0; r < runs; ++r) {
            OptimizerConfig cfg = base;
            cfg.seed = base.seed + static_cast<std::uint64_t>(r);
            OptimizerRun run = run_optimizer(scenario, cfg, exec);
            CompareRow row{cfg.algorithm, cfg.seed, run.best_fitness,
                           iters_to_within_1pct(run.trace), run.total_evals};
            out.rows.push_back(row);
            out.traces.emplace_back(row, std::move(run.trace));
        }
    }
    return out;
}

const char* algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::DBO: return "dbo";
    case Algorithm::DE: return "de";
    case Algorithm::PSO: return "pso";
    }
    return "?";
}

} // namespace robusched::optim
