#ifndef ROBUSCHED_QUEUEING_HPP
#define ROBUSCHED_QUEUEING_HPP

#include "robusched/errors.hpp"

namespace robusched::queueing {

// Ergodicity is enforced with a strict guard band: rho <= 1 - kErgodicGuard.
// The mean-wait formula diverges at rho = 1, so inputs arbitrarily close to
// saturation are rejected.
inline constexpr double kErgodicGuard = 1e-9;

// M/M/m system with m identical servers of speed s (m is treated as a
// positive real; the exact formulas use the log-gamma function in place of
// factorials). Arrival rate lambda, mean task size r_bar, service rate
// mu = s / r_bar per server.
struct QueueParams {
    double m;
    double s;
    double lambda;
    double r_bar;

    QueueParams(double m, double s, double lambda, double r_bar = 1.0);

    double mu() const { return s / r_bar; }
    double rho() const { return lambda * r_bar / (m * s); }
};

struct QueueMetrics {
    double rho;
    double p0;
    double pm;
    double pq;
    double t_mean;
    double fw_at_deadline;
};

// Continuous density at t plus the probability mass sitting at t = 0
// (requests that start service immediately).
struct WaitDensity {
    double continuous;
    double atom_at_zero;
};

double utilization(const QueueParams& p);

// Empty-system probability. For non-integer m the normalization sum runs
// k = 0 .. ceil(m)-1 and factorials are evaluated via lgamma.
double p0_exact(const QueueParams& p);

// Steady-state probability of exactly k requests in the system.
double pk_exact(const QueueParams& p, int k);

// Probability of exactly m requests (the k = m branch, m real).
double pm_exact(const QueueParams& p);

// Erlang-C waiting probability p_q = p_m / (1 - rho).
double pq_exact(const QueueParams& p);

WaitDensity waiting_pdf(const QueueParams& p, double t);

// Mean waiting time T = p_m / (m mu (1 - rho)^2).
double mean_wait_exact(const QueueParams& p);

// Probability that the wait does not exceed d:
// F_W(d) = 1 - p_q e^{-(1-rho) m mu d}.
double fw_exact(const QueueParams& p, double d);

// Stirling closed forms, continuous in m, with r_bar fixed to 1.
// These are the level-set models used by the boundary and optimizer code.
double pm_approx(double m, double s, double lambda);
double mean_wait_approx(double m, double s, double lambda);
double fw_approx(double m, double s, double lambda, double d);

QueueMetrics metrics(const QueueParams& p, double deadline);

} // namespace robusched::queueing

#endif
