// Command-line front end: evaluates the platform models, dumps surfaces and
// boundary curves, answers robustness-radius queries, runs the optimizers
// and the discrete-event simulation. All numeric output is CSV with 12
// significant digits; every command is deterministic under --seed.

#include "robusched/csv.hpp"
#include "robusched/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

using namespace robusched;
using scenario::PlatformConfig;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    bool dump_config = false;
};

// The built-in defaults are kind-specific: the joint scenario carries its
// own calibrated boundary levels. A user-supplied config is used as-is.
PlatformConfig effective_config(const GlobalOpts& g, const std::string& kind_override = "") {
    PlatformConfig cfg;
    if (!g.config_path.empty()) {
        cfg = scenario::load_config_file(g.config_path);
        if (!kind_override.empty()) cfg.kind = scenario::kind_from_name(kind_override);
    } else {
        cfg = kind_override == "joint" ? scenario::reference_scenario_joint() : scenario::reference_scenario();
        if (!kind_override.empty()) cfg.kind = scenario::kind_from_name(kind_override);
    }
    if (g.seed) {
        cfg.seed = *g.seed;
        cfg.optimizer.seed = *g.seed;
    } else {
        cfg.optimizer.seed = cfg.seed;
    }
    return cfg;
}

// Output stream selection: --out path or stdout.
class OutFile {
public:
    explicit OutFile(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void print_eval_row(std::ostream& os, const char* name, double exact, double closed) {
    os << name << ',' << fmt12(exact) << ',' << fmt12(closed) << ','
       << fmt12(std::abs(closed - exact)) << '\n';
}

int cmd_eval(const GlobalOpts& g, double m, double s) {
    const PlatformConfig cfg = effective_config(g);
    const auto q = scenario::queue_params(cfg, m, s);
    const auto econ = scenario::econ_params(cfg);
    const auto met = queueing::metrics(q, cfg.deadline);
    const auto pb = economics::profit_exact(q, econ);

    OutFile out(g.out_path);
    std::ostream& os = out.stream();
    os << "quantity,exact,closed,abs_gap\n";
    print_eval_row(os, "rho", met.rho, met.rho);
    print_eval_row(os, "p0", met.p0, met.p0);
    print_eval_row(os, "pm", met.pm, queueing::pm_approx(m, s, cfg.lambda));
    print_eval_row(os, "pq", met.pq, queueing::pm_approx(m, s, cfg.lambda) / (1.0 - met.rho));
    print_eval_row(os, "t_mean", met.t_mean, queueing::mean_wait_approx(m, s, cfg.lambda));
    print_eval_row(os, "fw_at_deadline", met.fw_at_deadline,
                   queueing::fw_approx(m, s, cfg.lambda, cfg.deadline));
    print_eval_row(os, "revenue", pb.revenue,
                   cfg.lambda * cfg.a * queueing::fw_approx(m, s, cfg.lambda, cfg.deadline));
    print_eval_row(os, "cost", pb.cost, economics::cost_closed(m, s, cfg.lambda, econ));
    print_eval_row(os, "profit", pb.profit, economics::profit_closed(m, s, cfg.lambda, econ));
    return 0;
}

int cmd_surface(const GlobalOpts& g, const std::string& metric, int grid_n) {
    const PlatformConfig cfg = effective_config(g);
    const auto econ = scenario::econ_params(cfg);
    const bool profit = metric == "profit";
    if (!profit && metric != "wait") throw ConfigError("metric must be 'profit' or 'wait'");

    std::vector<double> values(static_cast<std::size_t>(grid_n) * grid_n);
    const boundary::Box& b = cfg.box;
    auto value_at = [&](int i, int j) {
        const double m = b.m_min + b.m_width() * i / (grid_n - 1);
        const double s = b.s_min + b.s_width() * j / (grid_n - 1);
        return profit ? economics::profit_closed(m, s, cfg.lambda, econ)
                      : queueing::mean_wait_approx(m, s, cfg.lambda);
    };
#pragma omp parallel for schedule(static) collapse(2)
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j)
            values[static_cast<std::size_t>(i) * grid_n + j] = value_at(i, j);

    OutFile out(g.out_path);
    std::ostream& os = out.stream();
    os << "m,s,value\n";
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const double m = b.m_min + b.m_width() * i / (grid_n - 1);
            const double s = b.s_min + b.s_width() * j / (grid_n - 1);
            os << fmt12(m) << ',' << fmt12(s) << ','
               << fmt12(values[static_cast<std::size_t>(i) * grid_n + j]) << '\n';
        }
    }
    return 0;
}

int cmd_trace(const GlobalOpts& g, const std::string& metric, std::optional<double> level,
              int columns) {
    const PlatformConfig cfg = effective_config(g);
    const bool profit = metric == "profit";
    if (!profit && metric != "wait") throw ConfigError("metric must be 'profit' or 'wait'");
    boundary::BoundaryCurve curve = profit ? scenario::profit_curve(cfg) : scenario::wait_curve(cfg);
    if (level) curve.level = *level;
    const boundary::Polyline poly = boundary::trace(curve, columns > 0 ? columns : cfg.trace_columns);
    OutFile out(g.out_path);
    boundary::write_csv(poly, curve, out.stream());
    return 0;
}

int cmd_radius(const GlobalOpts& g, double m, double s, const std::string& metric,
               std::optional<double> level) {
    const PlatformConfig cfg = effective_config(g);
    const bool profit = metric == "profit";
    if (!profit && metric != "wait") throw ConfigError("metric must be 'profit' or 'wait'");
    boundary::BoundaryCurve curve = profit ? scenario::profit_curve(cfg) : scenario::wait_curve(cfg);
    if (level) curve.level = *level;

    const boundary::WorkingPoint center{m, s};
    const radius::RadiusResult brute = radius::radius_bruteforce(center, curve, cfg.radius);
    const boundary::Polyline poly = boundary::trace(curve, cfg.trace_columns);
    OutFile out(g.out_path);
    std::ostream& os = out.stream();
    radius::write_csv_header(os);
    radius::write_csv_row(os, center, curve, brute);
    if (!poly.empty())
        radius::write_csv_row(os, center, curve, radius::radius_sampled(center, poly));
    return 0;
}

void write_trace_csv(std::ostream& os, const optim::ConvergenceTrace& trace) {
    os << "iter,best_fitness,best_m,best_s,evals\n";
    for (const auto& tp : trace)
        os << tp.iter << ',' << fmt12(tp.best_fitness) << ',' << fmt12(tp.best.m) << ','
           << fmt12(tp.best.s) << ',' << tp.evals << '\n';
}

int cmd_optimize(const GlobalOpts& g, const std::string& kind, const std::string& algo) {
    PlatformConfig cfg = effective_config(g, kind);
    if (!algo.empty()) {
        if (algo == "dbo") cfg.optimizer.algorithm = optim::Algorithm::DBO;
        else if (algo == "de") cfg.optimizer.algorithm = optim::Algorithm::DE;
        else if (algo == "pso") cfg.optimizer.algorithm = optim::Algorithm::PSO;
        else throw ConfigError("unknown algorithm '" + algo + "'");
    }
    const optim::Scenario sc = scenario::make_scenario(cfg);
    const optim::OptimizerRun run = optim::run_optimizer(sc, cfg.optimizer);

    OutFile out(g.out_path);
    write_trace_csv(out.stream(), run.trace);

    std::cerr << "best: m=" << fmt12(run.best.m) << " s=" << fmt12(run.best.s)
              << " fitness=" << fmt12(run.best_fitness) << '\n';
    for (std::size_t i = 0; i < run.radii.size(); ++i)
        std::cerr << "radius[" << i << "]: r=" << fmt12(run.radii[i].r)
                  << " contact=(" << fmt12(run.radii[i].contact.m) << ','
                  << fmt12(run.radii[i].contact.s) << ")\n";
    return 0;
}

int cmd_compare(const GlobalOpts& g, const std::string& kind, const std::string& algos_csv,
                int runs, const std::string& trace_dir) {
    PlatformConfig cfg = effective_config(g, kind);
    const optim::Scenario sc = scenario::make_scenario(cfg);

    std::vector<optim::OptimizerConfig> cfgs;
    std::string token;
    std::istringstream iss(algos_csv);
    while (std::getline(iss, token, ',')) {
        optim::OptimizerConfig oc = cfg.optimizer;
        if (token == "dbo") oc.algorithm = optim::Algorithm::DBO;
        else if (token == "de") oc.algorithm = optim::Algorithm::DE;
        else if (token == "pso") oc.algorithm = optim::Algorithm::PSO;
        else throw ConfigError("unknown algorithm '" + token + "'");
        cfgs.push_back(oc);
    }
    const optim::CompareResult res = optim::compare(sc, cfgs, runs);

    OutFile out(g.out_path);
    std::ostream& os = out.stream();
    os << "algorithm,seed,final_fitness,iters_to_1pct,total_evals\n";
    for (const auto& row : res.rows)
        os << optim::algorithm_name(row.algorithm) << ',' << row.seed << ','
           << fmt12(row.final_fitness) << ',' << row.iters_to_1pct << ',' << row.total_evals
           << '\n';

    if (!trace_dir.empty()) {
        for (const auto& [row, trace] : res.traces) {
            std::ofstream tf(trace_dir + "/trace_" + optim::algorithm_name(row.algorithm) + "_" +
                             std::to_string(row.seed) + ".csv");
            write_trace_csv(tf, trace);
        }
    }

    // per-algorithm mean/stddev report
    for (const auto& c : cfgs) {
        double sum = 0, sum2 = 0, isum = 0, isum2 = 0;
        int n = 0;
        for (const auto& row : res.rows) {
            if (row.algorithm != c.algorithm) continue;
            sum += row.final_fitness;
            sum2 += row.final_fitness * row.final_fitness;
            isum += row.iters_to_1pct;
            isum2 += static_cast<double>(row.iters_to_1pct) * row.iters_to_1pct;
            ++n;
        }
        if (n == 0) continue;
        const double mean = sum / n;
        const double var = n > 1 ? (sum2 - n * mean * mean) / (n - 1) : 0.0;
        const double imean = isum / n;
        const double ivar = n > 1 ? (isum2 - n * imean * imean) / (n - 1) : 0.0;
        std::cerr << optim::algorithm_name(c.algorithm) << ": final_fitness mean=" << fmt12(mean)
                  << " stddev=" << fmt12(std::sqrt(std::max(0.0, var)))
                  << " iters_to_1pct mean=" << fmt12(imean)
                  << " stddev=" << fmt12(std::sqrt(std::max(0.0, ivar))) << '\n';
    }
    return 0;
}

int cmd_simulate(const GlobalOpts& g, double m, double s, long arrivals, long warmup,
                 std::optional<double> deadline, const std::string& dump_waits) {
    const PlatformConfig cfg = effective_config(g);
    const auto q = scenario::queue_params(cfg, m, s);
    const simulate::SimConfig sim_cfg(q, arrivals > 0 ? arrivals : cfg.sim_arrivals,
                                      warmup >= 0 ? warmup : cfg.sim_warmup, cfg.seed);
    const double d = deadline ? *deadline : cfg.deadline;

    std::vector<std::pair<double, double>> dump;
    const simulate::SimResult res =
        simulate::run_sim(sim_cfg, d, dump_waits.empty() ? nullptr : &dump);

    if (!dump_waits.empty()) {
        std::ofstream df(dump_waits);
        if (!df) throw ConfigError("cannot open wait dump file '" + dump_waits + "'");
        df << "arrival_time,wait\n";
        for (const auto& [at, w] : dump) df << fmt12(at) << ',' << fmt12(w) << '\n';
    }

    OutFile out(g.out_path);
    std::ostream& os = out.stream();
    os << "m_requested,m_simulated,s,lambda,r_bar,arrivals,warmup,seed,deadline,"
          "mean_wait,mean_wait_ci,frac_delayed,frac_delayed_ci,"
          "frac_within_deadline,frac_within_deadline_ci,completed\n";
    os << fmt12(res.m_requested) << ',' << res.m_simulated << ',' << fmt12(s) << ','
       << fmt12(cfg.lambda) << ',' << fmt12(cfg.r_bar) << ',' << sim_cfg.n_arrivals << ','
       << sim_cfg.warmup << ',' << sim_cfg.seed << ',' << fmt12(d) << ','
       << fmt12(res.mean_wait.value) << ',' << fmt12(res.mean_wait.ci_half) << ','
       << fmt12(res.frac_delayed.value) << ',' << fmt12(res.frac_delayed.ci_half) << ','
       << fmt12(res.frac_within_deadline.value) << ',' << fmt12(res.frac_within_deadline.ci_half)
       << ',' << res.completed << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust M/M/m server-count/speed configuration toolkit"};
    app.require_subcommand(0, 1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config_path, "scenario configuration file (JSON)");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "override the scenario seed");
    app.add_option("--out", g.out_path, "write the command's CSV to this path instead of stdout");
    app.add_flag("--dump-config", g.dump_config, "print the effective configuration and exit");

    double m = 3.0, s = 2.0;
    std::string metric = "profit", kind, algo, algos = "dbo,de,pso", trace_dir, dump_waits;
    int grid_n = 50, columns = 0, runs = 10;
    long arrivals = 0, warmup = -1;
    double level_value = 0.0, deadline_value = 0.0;

    CLI::App* eval = app.add_subcommand("eval", "exact vs closed-form metrics at a working point");
    eval->add_option("--m", m, "server count")->required();
    eval->add_option("--s", s, "server speed")->required();

    CLI::App* surface = app.add_subcommand("surface", "grid dump of T or G over the box");
    surface->add_option("--metric", metric, "profit|wait")->required();
    surface->add_option("--grid-n", grid_n, "grid resolution per axis")
        ->check(CLI::Range(2, 100000));

    CLI::App* trace_cmd = app.add_subcommand("trace", "trace a boundary level set");
    trace_cmd->add_option("--metric", metric, "profit|wait")->required();
    auto* level_opt_t = trace_cmd->add_option("--level", level_value, "override the boundary level");
    trace_cmd->add_option("--columns", columns, "trace columns (default from config)");

    CLI::App* radius_cmd = app.add_subcommand("radius", "shortest robustness radius from a point");
    radius_cmd->add_option("--m", m, "center server count")->required();
    radius_cmd->add_option("--s", s, "center server speed")->required();
    radius_cmd->add_option("--metric", metric, "profit|wait")->required();
    auto* level_opt_r = radius_cmd->add_option("--level", level_value, "override the boundary level");

    CLI::App* optimize = app.add_subcommand("optimize", "maximize the robustness radius");
    optimize->add_option("--scenario", kind, "profit_only|deadline_only|joint");
    optimize->add_option("--algo", algo, "dbo|de|pso");

    CLI::App* compare_cmd = app.add_subcommand("compare", "multi-seed algorithm comparison");
    compare_cmd->add_option("--scenario", kind, "profit_only|deadline_only|joint");
    compare_cmd->add_option("--algos", algos, "comma-separated algorithm list");
    compare_cmd->add_option("--runs", runs, "runs per algorithm")->check(CLI::Range(1, 10000));
    compare_cmd->add_option("--trace-dir", trace_dir, "write per-run convergence traces here");

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "discrete-event M/M/m simulation");
    simulate_cmd->add_option("--m", m, "server count")->required();
    simulate_cmd->add_option("--s", s, "server speed")->required();
    simulate_cmd->add_option("--arrivals", arrivals, "arrivals to simulate");
    simulate_cmd->add_option("--warmup", warmup, "arrivals discarded before statistics");
    auto* deadline_opt = simulate_cmd->add_option("--deadline", deadline_value, "deadline D");
    simulate_cmd->add_option("--dump-waits", dump_waits, "per-request wait CSV path");

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) g.seed = seed_value;

    try {
        if (g.dump_config && app.get_subcommands().empty()) {
            OutFile out(g.out_path);
            scenario::dump_config(effective_config(g), out.stream());
            return 0;
        }
        if (eval->parsed()) return cmd_eval(g, m, s);
        if (surface->parsed()) return cmd_surface(g, metric, grid_n);
        if (trace_cmd->parsed())
            return cmd_trace(g, metric,
                             *level_opt_t ? std::optional<double>(level_value) : std::nullopt,
                             columns);
        if (radius_cmd->parsed())
            return cmd_radius(g, m, s, metric,
                              *level_opt_r ? std::optional<double>(level_value) : std::nullopt);
        if (optimize->parsed()) return cmd_optimize(g, kind, algo);
        if (compare_cmd->parsed()) return cmd_compare(g, kind, algos, runs, trace_dir);
        if (simulate_cmd->parsed())
            return cmd_simulate(g, m, s, arrivals, warmup,
                                *deadline_opt ? std::optional<double>(deadline_value) : std::nullopt,
                                dump_waits);
        std::cerr << app.help() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const NoContactWithinRMax& e) {
        std::cerr << "search error: " << e.what() << '\n';
        return 3;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return 2;
    }
}
