#include "robusched/economics.hpp"

#include <cmath>

namespace robusched::economics {

EconomicParams::EconomicParams(double a_, double beta_, double delta_, double e_frac_,
                               double p_static_, double xi_, double alpha_, double deadline_,
                               std::optional<double> phi_)
    : a(a_), beta(beta_), delta(delta_), e_frac(e_frac_), p_static(p_static_), xi(xi_),
      alpha(alpha_), deadline(deadline_), phi(phi_) {
    if (!(a > 0.0) || !(beta > 0.0) || !(delta > 0.0) || !(p_static > 0.0) || !(xi > 0.0))
        throw InvalidParam("a, beta, delta, p_static and xi must be strictly positive");
    if (!(e_frac >= 0.0 && e_frac <= 1.0))
        throw InvalidParam("e_frac must lie in [0, 1]");
    if (!(alpha > 1.0))
        throw InvalidParam("alpha must exceed 1");
    if (deadline < 0.0)
        throw NegativeDeadline();
    if (phi) {
        if (!(*phi > 0.0 && *phi <= 1.0))
            throw InvalidParam("phi must lie in (0, 1]");
        if (std::abs(alpha - (2.0 * *phi + 1.0)) > 1e-12)
            throw InvalidParam("alpha must equal 2*phi + 1 when phi is supplied");
    }
}

EconomicParams EconomicParams::with_phi(double a, double beta, double delta, double e_frac,
                                        double p_static, double xi, double phi, double deadline) {
    return EconomicParams(a, beta, delta, e_frac, p_static, xi, 2.0 * phi + 1.0, deadline, phi);
}

double charge_expectation(const queueing::QueueParams& q, const EconomicParams& econ) {
    return econ.a * q.r_bar * queueing::fw_exact(q, econ.deadline);
}

double revenue(const queueing::QueueParams& q, const EconomicParams& econ) {
    return q.lambda * charge_expectation(q, econ);
}

double dynamic_power(double s, const EconomicParams& econ) {
    return econ.xi * std::pow(s, econ.alpha);
}

double cost(const queueing::QueueParams& q, const EconomicParams& econ) {
    const double watts = econ.e_frac * q.rho() * dynamic_power(q.s, econ) +
                         econ.p_static * (1.0 - econ.e_frac);
    return q.m * (econ.beta + econ.delta * watts);
}

ProfitBreakdown profit_exact(const queueing::QueueParams& q, const EconomicParams& econ) {
    ProfitBreakdown out{};
    out.revenue = revenue(q, econ);
    out.cost = cost(q, econ);
    out.profit = out.revenue - out.cost;
    return out;
}

double cost_closed(double m, double s, double lambda, const EconomicParams& econ) {
    const double watts = econ.e_frac * lambda * econ.xi * std::pow(s, econ.alpha - 1.0) / m +
                         econ.p_static * (1.0 - econ.e_frac);
    return m * (econ.beta + econ.delta * watts);
}

double profit_closed(double m, double s, double lambda, const EconomicParams& econ) {
    const double rev = lambda * econ.a * queueing::fw_approx(m, s, lambda, econ.deadline);
    return rev - cost_closed(m, s, lambda, econ);
}

} // namespace robusched::economics
