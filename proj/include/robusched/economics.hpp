#ifndef ROBUSCHED_ECONOMICS_HPP
#define ROBUSCHED_ECONOMICS_HPP

#include "robusched/queueing.hpp"

#include <optional>

namespace robusched::economics {

// Provider-side pricing and power parameters. Money and time units are
// abstract model units. The dynamic power model is P_d = xi * s^alpha with
// alpha = 2*phi + 1 when the voltage-frequency exponent phi is supplied.
struct EconomicParams {
    double a;        // service fee per unit of service
    double beta;     // server rental price per unit time
    double delta;    // electricity price per watt
    double e_frac;   // dynamic-power share of total power, in [0, 1]
    double p_static; // static power P*
    double xi;       // dynamic power coefficient
    double alpha;    // dynamic power exponent, > 1
    double deadline; // SLA deadline D
    std::optional<double> phi;

    EconomicParams(double a, double beta, double delta, double e_frac, double p_static,
                   double xi, double alpha, double deadline,
                   std::optional<double> phi = std::nullopt);

    static EconomicParams with_phi(double a, double beta, double delta, double e_frac,
                                   double p_static, double xi, double phi, double deadline);
};

struct ProfitBreakdown {
    double revenue;
    double cost;
    double profit;
};

// Expected charge of one request: a * r_bar * F_W(D).
double charge_expectation(const queueing::QueueParams& q, const EconomicParams& econ);

// Revenue per unit time: lambda * F_W(D) * a * r_bar.
double revenue(const queueing::QueueParams& q, const EconomicParams& econ);

double dynamic_power(double s, const EconomicParams& econ);

// Cost per unit time: m (beta + delta (e rho xi s^alpha + P* (1 - e))).
double cost(const queueing::QueueParams& q, const EconomicParams& econ);

ProfitBreakdown profit_exact(const queueing::QueueParams& q, const EconomicParams& econ);

// Cost with the utilization substituted out (r_bar = 1):
// m beta + delta e lambda xi s^(alpha-1) + m delta P* (1 - e).
double cost_closed(double m, double s, double lambda, const EconomicParams& econ);

// Fully expanded closed-form profit (Stirling form, r_bar = 1), continuous
// in m; this is the level-set model used for boundary tracing.
double profit_closed(double m, double s, double lambda, const EconomicParams& econ);

} // namespace robusched::economics

#endif
