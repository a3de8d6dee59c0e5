#ifndef ROBUSCHED_OPTIM_HPP
#define ROBUSCHED_OPTIM_HPP

#include "robusched/radius.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace robusched::optim {

using boundary::BoundaryCurve;
using boundary::WorkingPoint;

enum class Algorithm { DBO, DE, PSO };

// Dung-beetle role split and coefficients. Defaults follow the original
// algorithm: a 6:6:7:11 split at population 30, deflection k = 0.1,
// light-intensity b = 0.3, thief step scale S = 0.5, and the natural
// coefficient alpha = +1 with probability 0.9.
struct DboParams {
    double roll_fraction = 6.0 / 30.0;
    double brood_fraction = 6.0 / 30.0;
    double forage_fraction = 7.0 / 30.0;
    double thief_fraction = 11.0 / 30.0;
    double k = 0.1;
    double b_coef = 0.3;
    double thief_scale = 0.5;
    double alpha_plus_prob = 0.9;

    void validate() const;
};

struct DeParams {
    double weight = 0.5;    // F
    double crossover = 0.9; // CR
};

struct PsoParams {
    double inertia = 0.72;
    double cognitive = 1.49;
    double social = 1.49;
};

struct OptimizerConfig {
    Algorithm algorithm = Algorithm::DBO;
    int population = 30;
    int max_iters = 100;
    std::uint64_t seed = 1;
    DboParams dbo;
    DeParams de;
    PsoParams pso;

    void validate() const;
};

struct TracePoint {
    int iter;
    double best_fitness;
    WorkingPoint best;
    long evals;
};

using ConvergenceTrace = std::vector<TracePoint>;

enum class ScenarioKind { ProfitOnly, DeadlineOnly, Joint };

struct Scenario {
    ScenarioKind kind = ScenarioKind::ProfitOnly;
    std::vector<BoundaryCurve> curves;
    radius::RadiusSearchParams radius_params;
    int trace_columns = 2001;

    void validate() const;
};

// Traces the scenario curves once and serves the robustness-radius fitness
// from the sampled polylines: single-curve scenarios score the radius to
// their curve, Joint scores min(r1, r2). Infeasible points get the penalty
// -1e6 minus the geometric distance back to the traced boundary, never an
// error. Candidates are snapped to a 1e-4 lattice and cached (radius
// evaluation dominates runtime; the snap stays below the radius step).
class ScenarioEvaluator {
public:
    explicit ScenarioEvaluator(const Scenario& scenario, Exec exec = Exec::Parallel);

    double fitness(WorkingPoint pt) const;
    bool is_feasible(WorkingPoint pt) const;
    const boundary::Box& box() const { return scenario_.curves.front().box; }
    const Scenario& scenario() const { return scenario_; }
    const std::vector<boundary::Polyline>& polylines() const { return polylines_; }

private:
    double fitness_uncached(WorkingPoint pt) const;

    Scenario scenario_;
    std::vector<boundary::Polyline> polylines_;
    mutable std::mutex cache_mutex_;
    mutable std::unordered_map<std::uint64_t, double> cache_;
};

// Generic bounded-box maximization used by all three algorithms (and by the
// synthetic-objective tests).
struct BoxObjective {
    boundary::Box box;
    std::function<double(WorkingPoint)> fitness;
};

struct GenericRun {
    WorkingPoint best{};
    double best_fitness = 0.0;
    ConvergenceTrace trace;
    long total_evals = 0;
};

GenericRun optimize_box(const BoxObjective& obj, const OptimizerConfig& cfg,
                        Exec exec = Exec::Parallel);

struct OptimizerRun {
    WorkingPoint best{};
    double best_fitness = 0.0;
    std::vector<radius::RadiusResult> radii; // brute-force radii at `best`, one per curve
    ConvergenceTrace trace;
    long total_evals = 0;
};

OptimizerRun run_optimizer(const Scenario& scenario, const OptimizerConfig& cfg,
                           Exec exec = Exec::Parallel);
OptimizerRun dbo_optimize(const Scenario& scenario, OptimizerConfig cfg,
                          Exec exec = Exec::Parallel);
OptimizerRun de_optimize(const Scenario& scenario, OptimizerConfig cfg,
                         Exec exec = Exec::Parallel);
OptimizerRun pso_optimize(const Scenario& scenario, OptimizerConfig cfg,
                          Exec exec = Exec::Parallel);

struct CompareRow {
    Algorithm algorithm;
    std::uint64_t seed;
    double final_fitness;
    int iters_to_1pct;
    long total_evals;
};

struct CompareResult {
    std::vector<CompareRow> rows;
    std::vector<std::pair<CompareRow, ConvergenceTrace>> traces;
};

// Runs each configuration `runs` times with seeds cfg.seed + 0 .. runs-1.
CompareResult compare(const Scenario& scenario, const std::vector<OptimizerConfig>& cfgs,
                      int runs, Exec exec = Exec::Parallel);

const char* algorithm_name(Algorithm a);

int iters_to_within_1pct(const ConvergenceTrace& trace);

} // namespace robusched::optim

#endif
