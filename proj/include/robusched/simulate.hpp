#ifndef ROBUSCHED_SIMULATE_HPP
#define ROBUSCHED_SIMULATE_HPP

#include "robusched/queueing.hpp"

#include <cstdint>
#include <vector>

namespace robusched::simulate {

struct SimConfig {
    queueing::QueueParams params;
    long n_arrivals = 1'000'000;
    long warmup = 10'000;
    std::uint64_t seed = 1;

    SimConfig(queueing::QueueParams p, long n, long w, std::uint64_t s);
};

struct Estimate {
    double value = 0.0;
    double ci_half = 0.0; // 95% half-width from 20 batch means

    bool contains(double x) const { return x >= value - ci_half && x <= value + ci_half; }
};

struct SimResult {
    Estimate mean_wait;
    Estimate frac_delayed;
    Estimate frac_within_deadline;
    long completed = 0;
    double m_requested = 0.0;
    int m_simulated = 0; // servers actually simulated (m rounded to nearest integer)
};

// Event-driven FIFO M/M/m run: exponential interarrivals (rate lambda) and
// service times (rate mu = s / r_bar), arrival/departure events on a
// time-ordered queue. Waits of the first `warmup` arrivals are discarded;
// confidence intervals use 20 batch means (waits are autocorrelated).
// Non-integer m is rounded to the nearest integer server count.
// When wait_dump is non-null it receives (arrival_time, wait) per counted request.
SimResult run_sim(const SimConfig& cfg, double deadline,
                  std::vector<std::pair<double, double>>* wait_dump = nullptr);

} // namespace robusched::simulate

#endif
