#include "robusched/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace robusched::queueing {

namespace {

double log_sum_exp(const std::vector<double>& logs) {
    double hi = -HUGE_VAL;
    for (double v : logs) hi = std::max(hi, v);
    double acc = 0.0;
    for (double v : logs) acc += std::exp(v - hi);
    return hi + std::log(acc);
}

double log_sum_exp2(double a, double b) {
    double hi = std::max(a, b);
    return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

// log of [ sum_{k=0}^{ceil(m)-1} (m rho)^k / k!  +  (m rho)^m / m! * 1/(1-rho) ]
double log_p0_inverse(double m, double rho) {
    const double log_mr = std::log(m * rho);
    const int terms = static_cast<int>(std::ceil(m));
    std::vector<double> logs;
    logs.reserve(terms + 1);
    for (int k = 0; k < terms; ++k)
        logs.push_back(k * log_mr - std::lgamma(k + 1.0));
    logs.push_back(m * log_mr - std::lgamma(m + 1.0) - std::log1p(-rho));
    return log_sum_exp(logs);
}

// log of the Stirling tail sqrt(2 pi m) (1-rho) (e^rho / (e rho))^m.
double log_stirling_tail(double m, double rho) {
    return 0.5 * std::log(2.0 * M_PI * m) + std::log1p(-rho) + m * (rho - 1.0 - std::log(rho));
}

void require_ergodic(double m, double s, double lambda, double r_bar) {
    const double rho = lambda * r_bar / (m * s);
    if (!(rho <= 1.0 - kErgodicGuard))
        throw NonErgodic("non-ergodic queue: rho = " + std::to_string(rho) +
                         " (lambda*r_bar must stay below m*s)");
}

} // namespace

QueueParams::QueueParams(double m_, double s_, double lambda_, double r_bar_)
    : m(m_), s(s_), lambda(lambda_), r_bar(r_bar_) {
    if (!(m > 0.0) || !(s > 0.0) || !(lambda > 0.0) || !(r_bar > 0.0))
        throw InvalidParam("queue parameters must be strictly positive");
    require_ergodic(m, s, lambda, r_bar);
}

double utilization(const QueueParams& p) {
    return p.rho();
}

double p0_exact(const QueueParams& p) {
    return std::exp(-log_p0_inverse(p.m, p.rho()));
}

double pm_exact(const QueueParams& p) {
    const double rho = p.rho();
    const double log_p0 = -log_p0_inverse(p.m, rho);
    return std::exp(log_p0 + p.m * std::log(p.m * rho) - std::lgamma(p.m + 1.0));
}

double pk_exact(const QueueParams& p, int k) {
    if (k < 0) throw InvalidParam("state index k must be non-negative");
    const double rho = p.rho();
    const double log_p0 = -log_p0_inverse(p.m, rho);
    if (k < p.m)
        return std::exp(log_p0 + k * std::log(p.m * rho) - std::lgamma(k + 1.0));
    return std::exp(log_p0 + p.m * std::log(p.m) + k * std::log(rho) - std::lgamma(p.m + 1.0));
}

double pq_exact(const QueueParams& p) {
    return pm_exact(p) / (1.0 - p.rho());
}

WaitDensity waiting_pdf(const QueueParams& p, double t) {
    if (t < 0.0) throw NegativeTime();
    const double rho = p.rho();
    const double pm = pm_exact(p);
    const double rate = (1.0 - rho) * p.m * p.mu();
    return WaitDensity{p.m * p.mu() * pm * std::exp(-rate * t), 1.0 - pm / (1.0 - rho)};
}

double mean_wait_exact(const QueueParams& p) {
    const double rho = p.rho();
    return pm_exact(p) / (p.m * p.mu() * (1.0 - rho) * (1.0 - rho));
}

double fw_exact(const QueueParams& p, double d) {
    if (d < 0.0) throw NegativeDeadline();
    const double rho = p.rho();
    const double pq = pm_exact(p) / (1.0 - rho);
    return 1.0 - pq * std::exp(-(1.0 - rho) * p.m * p.mu() * d);
}

double pm_approx(double m, double s, double lambda) {
    require_ergodic(m, s, lambda, 1.0);
    const double rho = lambda / (m * s);
    // (1 - rho) / (tail + 1), evaluated in log space so large m cannot overflow.
    return (1.0 - rho) * std::exp(-log_sum_exp2(log_stirling_tail(m, rho), 0.0));
}

double mean_wait_approx(double m, double s, double lambda) {
    require_ergodic(m, s, lambda, 1.0);
    const double sm = s * m;
    const double gap = sm - lambda;
    const double log_num = m * (std::log(lambda) + 1.0);
    const double log_t1 = (m - 1.0) * std::log(sm) + 2.0 * std::log(gap) + lambda / s +
                          0.5 * std::log(2.0 * M_PI * m);
    const double log_t2 = std::log(gap) + m * (std::log(lambda) + 1.0);
    return std::exp(log_num - log_sum_exp2(log_t1, log_t2));
}

double fw_approx(double m, double s, double lambda, double d) {
    if (d < 0.0) throw NegativeDeadline();
    require_ergodic(m, s, lambda, 1.0);
    const double rho = lambda / (m * s);
    const double rate = m * s - lambda; // m mu (1 - rho) with r_bar = 1
    return 1.0 - std::exp(-rate * d - log_sum_exp2(log_stirling_tail(m, rho), 0.0));
}

QueueMetrics metrics(const QueueParams& p, double deadline) {
    QueueMetrics out{};
    out.rho = p.rho();
    out.p0 = p0_exact(p);
    out.pm = pm_exact(p);
    out.pq = out.pm / (1.0 - out.rho);
    out.t_mean = mean_wait_exact(p);
    out.fw_at_deadline = fw_exact(p, deadline);
    return out;
}

} // namespace robusched::queueing
