#ifndef ROBUSCHED_SCENARIO_HPP
#define ROBUSCHED_SCENARIO_HPP

#include "robusched/optim.hpp"
#include "robusched/simulate.hpp"

#include <iosfwd>
#include <string>

namespace robusched::scenario {

// One self-describing configuration file drives every CLI command: platform
// parameters, the search box, boundary levels, scenario kind, optimizer and
// radius-search settings, and the run seed. Unknown keys are rejected.
struct PlatformConfig {
    // platform
    double lambda = 4.0;
    double r_bar = 1.0;
    double a = 15.0;
    double beta = 3.0;
    double delta = 1.0;
    double e_frac = 0.7;
    double xi = 2.0;
    double alpha = 2.1;
    double p_static = 4.0;
    double deadline = 1.0;
    // search box
    boundary::Box box{3.0, 4.0, 2.0, 3.0};
    // boundary levels
    double profit_level = 0.0;
    double wait_level = 0.0;
    // scenario
    optim::ScenarioKind kind = optim::ScenarioKind::ProfitOnly;
    optim::OptimizerConfig optimizer;
    radius::RadiusSearchParams radius;
    int trace_columns = 2001;
    // simulation
    long sim_arrivals = 1'000'000;
    long sim_warmup = 10'000;

    std::uint64_t seed = 1;

    bool operator==(const PlatformConfig& other) const;

    void validate() const;
};

// The bundled default scenario: lambda = 4, a = 15, e = 0.7, beta = 3,
// delta = 1, P* = 4, xi = 2, alpha = 2.1, D = 1, box [3,4] x [2,3]. The
// boundary levels are the calibrated thresholds recovered by
// tools/calibrate (see README).
PlatformConfig reference_scenario();

// Same platform but with the joint-scenario thresholds calibrated around the
// equal-margin optimum.
PlatformConfig reference_scenario_joint();

PlatformConfig load_config(std::istream& in, const std::string& name = "<config>");
PlatformConfig load_config_file(const std::string& path);
void dump_config(const PlatformConfig& cfg, std::ostream& os);

// Materialize module-level objects from the configuration.
economics::EconomicParams econ_params(const PlatformConfig& cfg);
queueing::QueueParams queue_params(const PlatformConfig& cfg, double m, double s);
boundary::BoundaryCurve profit_curve(const PlatformConfig& cfg);
boundary::BoundaryCurve wait_curve(const PlatformConfig& cfg);
optim::Scenario make_scenario(const PlatformConfig& cfg);

const char* kind_name(optim::ScenarioKind kind);
optim::ScenarioKind kind_from_name(const std::string& name);

} // namespace robusched::scenario

#endif
