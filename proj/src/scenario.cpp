#include "robusched/scenario.hpp"

#include <json.hpp>

#include <fstream>
#include <tuple>
#include <set>
#include <sstream>

namespace robusched::scenario {

using nlohmann::json;
using optim::Algorithm;
using optim::ScenarioKind;

namespace {

// Calibrated boundary levels for the bundled scenarios (recovered with
// tools/calibrate; see README). kProfitLevelA puts the profit boundary at
// distance 0.852 from the working point (3, 2). The joint pair puts both
// boundaries at distance 0.127 from the equal-margin optimum.
constexpr double kProfitLevelA = 28.6172238;
constexpr double kProfitLevelJoint = 30.096253399;
constexpr double kWaitLevelJoint = 0.05427227;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& j, const std::string& where, const std::set<std::string>& known) {
    if (!j.is_object()) fail(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) fail("unknown key '" + it.key() + "' in " + where);
}

double num(const json& j, const std::string& where, const std::string& key) {
    if (!j.contains(key)) fail("missing key '" + key + "' in " + where);
    if (!j.at(key).is_number()) fail("key '" + key + "' in " + where + " must be a number");
    return j.at(key).get<double>();
}

long integer(const json& j, const std::string& where, const std::string& key) {
    if (!j.contains(key)) fail("missing key '" + key + "' in " + where);
    if (!j.at(key).is_number_integer()) fail("key '" + key + "' in " + where + " must be an integer");
    return j.at(key).get<long>();
}

std::string text(const json& j, const std::string& where, const std::string& key) {
    if (!j.contains(key)) fail("missing key '" + key + "' in " + where);
    if (!j.at(key).is_string()) fail("key '" + key + "' in " + where + " must be a string");
    return j.at(key).get<std::string>();
}

} // namespace

bool PlatformConfig::operator==(const PlatformConfig& other) const {
    auto tie = [](const PlatformConfig& c) {
        return std::make_tuple(c.lambda, c.r_bar, c.a, c.beta, c.delta, c.e_frac, c.xi, c.alpha,
                               c.p_static, c.deadline, c.box.m_min, c.box.m_max, c.box.s_min,
                               c.box.s_max, c.profit_level, c.wait_level, c.kind,
                               c.optimizer.algorithm, c.optimizer.population, c.optimizer.max_iters,
                               c.optimizer.seed, c.optimizer.dbo.roll_fraction,
                               c.optimizer.dbo.brood_fraction, c.optimizer.dbo.forage_fraction,
                               c.optimizer.dbo.thief_fraction, c.optimizer.dbo.k,
                               c.optimizer.dbo.b_coef, c.optimizer.dbo.thief_scale,
                               c.optimizer.dbo.alpha_plus_prob, c.optimizer.de.weight,
                               c.optimizer.de.crossover, c.optimizer.pso.inertia,
                               c.optimizer.pso.cognitive, c.optimizer.pso.social, c.radius.r_step,
                               c.radius.r_max, c.radius.n_theta, c.radius.tol_on_curve,
                               c.radius.tol_tangent, c.trace_columns, c.sim_arrivals, c.sim_warmup,
                               c.seed);
    };
    return tie(*this) == tie(other);
}

void PlatformConfig::validate() const {
    econ_params(*this);                            // throws on bad economics values
    queueing::QueueParams(box.m_min, box.s_min, lambda, r_bar); // box must be ergodic
    if (!(box.m_min < box.m_max) || !(box.s_min < box.s_max))
        throw ConfigError("search box is degenerate");
    optimizer.validate();
    radius.validate();
    if (trace_columns < 2) throw ConfigError("trace_columns must be at least 2");
    if (sim_arrivals <= sim_warmup || sim_warmup < 0)
        throw ConfigError("need sim_arrivals > sim_warmup >= 0");
}

PlatformConfig reference_scenario() {
    PlatformConfig cfg;
    cfg.profit_level = kProfitLevelA;
    cfg.wait_level = kWaitLevelJoint;
    cfg.kind = ScenarioKind::ProfitOnly;
    return cfg;
}

PlatformConfig reference_scenario_joint() {
    PlatformConfig cfg = reference_scenario();
    cfg.kind = ScenarioKind::Joint;
    cfg.profit_level = kProfitLevelJoint;
    cfg.wait_level = kWaitLevelJoint;
    return cfg;
}

const char* kind_name(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::ProfitOnly: return "profit_only";
    case ScenarioKind::DeadlineOnly: return "deadline_only";
    case ScenarioKind::Joint: return "joint";
    }
    return "?";
}

ScenarioKind kind_from_name(const std::string& name) {
    if (name == "profit_only") return ScenarioKind::ProfitOnly;
    if (name == "deadline_only") return ScenarioKind::DeadlineOnly;
    if (name == "joint") return ScenarioKind::Joint;
    fail("unknown scenario kind '" + name + "'");
}

namespace {

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "dbo") return Algorithm::DBO;
    if (name == "de") return Algorithm::DE;
    if (name == "pso") return Algorithm::PSO;
    fail("unknown algorithm '" + name + "'");
}

} // namespace

PlatformConfig load_config(std::istream& in, const std::string& name) {
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json j;
    try {
        j = json::parse(content);
    } catch (const json::parse_error& e) {
        // Report the parse position as line/column.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < content.size(); ++i) {
            if (content[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        fail(name + ":" + std::to_string(line) + ":" + std::to_string(col) +
             ": " + e.what());
    }

    check_keys(j, "config",
               {"platform", "box", "levels", "kind", "optimizer", "radius", "trace_columns",
                "sim", "seed"});
    for (const char* key : {"platform", "box", "levels", "kind", "optimizer", "radius",
                            "trace_columns", "sim", "seed"})
        if (!j.contains(key)) fail(std::string("missing key '") + key + "' in config");
    for (const char* key : {"dbo", "de", "pso"})
        if (!j.at("optimizer").contains(key))
            fail(std::string("missing key '") + key + "' in optimizer");

    PlatformConfig cfg;
    const json& p = j.at("platform");
    check_keys(p, "platform",
               {"lambda", "r_bar", "a", "beta", "delta", "e_frac", "xi", "alpha", "p_static",
                "deadline"});
    cfg.lambda = num(p, "platform", "lambda");
    cfg.r_bar = num(p, "platform", "r_bar");
    cfg.a = num(p, "platform", "a");
    cfg.beta = num(p, "platform", "beta");
    cfg.delta = num(p, "platform", "delta");
    cfg.e_frac = num(p, "platform", "e_frac");
    cfg.xi = num(p, "platform", "xi");
    cfg.alpha = num(p, "platform", "alpha");
    cfg.p_static = num(p, "platform", "p_static");
    cfg.deadline = num(p, "platform", "deadline");

    const json& b = j.at("box");
    check_keys(b, "box", {"m_min", "m_max", "s_min", "s_max"});
    cfg.box = {num(b, "box", "m_min"), num(b, "box", "m_max"), num(b, "box", "s_min"),
               num(b, "box", "s_max")};

    const json& lv = j.at("levels");
    check_keys(lv, "levels", {"profit", "wait"});
    cfg.profit_level = num(lv, "levels", "profit");
    cfg.wait_level = num(lv, "levels", "wait");

    cfg.kind = kind_from_name(text(j, "config", "kind"));

    const json& o = j.at("optimizer");
    check_keys(o, "optimizer", {"algorithm", "population", "max_iters", "dbo", "de", "pso"});
    cfg.optimizer.algorithm = algorithm_from_name(text(o, "optimizer", "algorithm"));
    cfg.optimizer.population = static_cast<int>(integer(o, "optimizer", "population"));
    cfg.optimizer.max_iters = static_cast<int>(integer(o, "optimizer", "max_iters"));
    const json& d = o.at("dbo");
    check_keys(d, "optimizer.dbo",
               {"roll_fraction", "brood_fraction", "forage_fraction", "thief_fraction", "k",
                "b_coef", "thief_scale", "alpha_plus_prob"});
    cfg.optimizer.dbo.roll_fraction = num(d, "dbo", "roll_fraction");
    cfg.optimizer.dbo.brood_fraction = num(d, "dbo", "brood_fraction");
    cfg.optimizer.dbo.forage_fraction = num(d, "dbo", "forage_fraction");
    cfg.optimizer.dbo.thief_fraction = num(d, "dbo", "thief_fraction");
    cfg.optimizer.dbo.k = num(d, "dbo", "k");
    cfg.optimizer.dbo.b_coef = num(d, "dbo", "b_coef");
    cfg.optimizer.dbo.thief_scale = num(d, "dbo", "thief_scale");
    cfg.optimizer.dbo.alpha_plus_prob = num(d, "dbo", "alpha_plus_prob");
    const json& de = o.at("de");
    check_keys(de, "optimizer.de", {"weight", "crossover"});
    cfg.optimizer.de.weight = num(de, "de", "weight");
    cfg.optimizer.de.crossover = num(de, "de", "crossover");
    const json& ps = o.at("pso");
    check_keys(ps, "optimizer.pso", {"inertia", "cognitive", "social"});
    cfg.optimizer.pso.inertia = num(ps, "pso", "inertia");
    cfg.optimizer.pso.cognitive = num(ps, "pso", "cognitive");
    cfg.optimizer.pso.social = num(ps, "pso", "social");

    const json& r = j.at("radius");
    check_keys(r, "radius", {"r_step", "r_max", "n_theta", "tol_on_curve", "tol_tangent"});
    cfg.radius.r_step = num(r, "radius", "r_step");
    cfg.radius.r_max = num(r, "radius", "r_max");
    cfg.radius.n_theta = static_cast<int>(integer(r, "radius", "n_theta"));
    cfg.radius.tol_on_curve = num(r, "radius", "tol_on_curve");
    cfg.radius.tol_tangent = num(r, "radius", "tol_tangent");

    cfg.trace_columns = static_cast<int>(integer(j, "config", "trace_columns"));

    const json& sim = j.at("sim");
    check_keys(sim, "sim", {"arrivals", "warmup"});
    cfg.sim_arrivals = integer(sim, "sim", "arrivals");
    cfg.sim_warmup = integer(sim, "sim", "warmup");

    cfg.seed = static_cast<std::uint64_t>(integer(j, "config", "seed"));

    try {
        cfg.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

PlatformConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    return load_config(in, path);
}

void dump_config(const PlatformConfig& cfg, std::ostream& os) {
    json j;
    j["platform"] = {{"lambda", cfg.lambda},     {"r_bar", cfg.r_bar},
                     {"a", cfg.a},               {"beta", cfg.beta},
                     {"delta", cfg.delta},       {"e_frac", cfg.e_frac},
                     {"xi", cfg.xi},             {"alpha", cfg.alpha},
                     {"p_static", cfg.p_static}, {"deadline", cfg.deadline}};
    j["box"] = {{"m_min", cfg.box.m_min},
                {"m_max", cfg.box.m_max},
                {"s_min", cfg.box.s_min},
                {"s_max", cfg.box.s_max}};
    j["levels"] = {{"profit", cfg.profit_level}, {"wait", cfg.wait_level}};
    j["kind"] = kind_name(cfg.kind);
    j["optimizer"] = {
        {"algorithm", optim::algorithm_name(cfg.optimizer.algorithm)},
        {"population", cfg.optimizer.population},
        {"max_iters", cfg.optimizer.max_iters},
        {"dbo",
         {{"roll_fraction", cfg.optimizer.dbo.roll_fraction},
          {"brood_fraction", cfg.optimizer.dbo.brood_fraction},
          {"forage_fraction", cfg.optimizer.dbo.forage_fraction},
          {"thief_fraction", cfg.optimizer.dbo.thief_fraction},
          {"k", cfg.optimizer.dbo.k},
          {"b_coef", cfg.optimizer.dbo.b_coef},
          {"thief_scale", cfg.optimizer.dbo.thief_scale},
          {"alpha_plus_prob", cfg.optimizer.dbo.alpha_plus_prob}}},
        {"de", {{"weight", cfg.optimizer.de.weight}, {"crossover", cfg.optimizer.de.crossover}}},
        {"pso",
         {{"inertia", cfg.optimizer.pso.inertia},
          {"cognitive", cfg.optimizer.pso.cognitive},
          {"social", cfg.optimizer.pso.social}}}};
    j["radius"] = {{"r_step", cfg.radius.r_step},
                   {"r_max", cfg.radius.r_max},
                   {"n_theta", cfg.radius.n_theta},
                   {"tol_on_curve", cfg.radius.tol_on_curve},
                   {"tol_tangent", cfg.radius.tol_tangent}};
    j["trace_columns"] = cfg.trace_columns;
    j["sim"] = {{"arrivals", cfg.sim_arrivals}, {"warmup", cfg.sim_warmup}};
    j["seed"] = cfg.seed;
    os << j.dump(2) << '\n';
}

economics::EconomicParams econ_params(const PlatformConfig& cfg) {
    return economics::EconomicParams(cfg.a, cfg.beta, cfg.delta, cfg.e_frac, cfg.p_static, cfg.xi,
                                     cfg.alpha, cfg.deadline);
}

queueing::QueueParams queue_params(const PlatformConfig& cfg, double m, double s) {
    return queueing::QueueParams(m, s, cfg.lambda, cfg.r_bar);
}

boundary::BoundaryCurve profit_curve(const PlatformConfig& cfg) {
    return boundary::BoundaryCurve(boundary::Metric::Profit, cfg.profit_level, cfg.box, cfg.lambda,
                                   econ_params(cfg));
}

boundary::BoundaryCurve wait_curve(const PlatformConfig& cfg) {
    return boundary::BoundaryCurve(boundary::Metric::MeanWait, cfg.wait_level, cfg.box, cfg.lambda,
                                   econ_params(cfg));
}

optim::Scenario make_scenario(const PlatformConfig& cfg) {
    optim::Scenario sc;
    sc.kind = cfg.kind;
    sc.radius_params = cfg.radius;
    sc.trace_columns = cfg.trace_columns;
    switch (cfg.kind) {
    case ScenarioKind::ProfitOnly: sc.curves.push_back(profit_curve(cfg)); break;
    case ScenarioKind::DeadlineOnly: sc.curves.push_back(wait_curve(cfg)); break;
    case ScenarioKind::Joint:
        sc.curves.push_back(profit_curve(cfg));
        sc.curves.push_back(wait_curve(cfg));
        break;
    }
    return sc;
}

} // namespace robusched::scenario
