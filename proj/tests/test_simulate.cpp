#include <doctest.h>

#include "robusched/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace robusched;
using namespace robusched::simulate;
using robusched::queueing::QueueParams;

TEST_CASE("config validation") {
    CHECK_THROWS_AS(SimConfig(QueueParams(2, 1, 1), 100, 200, 1), InvalidParam);
    // rounded m = 3 with lambda = 3.2, s = 1 is non-ergodic even though
    // the continuous m = 3.4 request passes the QueueParams check
    CHECK_THROWS_AS(SimConfig(QueueParams(3.4, 1, 3.2), 1000, 10, 1), NonErgodic);
}

TEST_CASE("M/M/1 mean wait inside CI") {
    const SimConfig cfg(QueueParams(1, 2, 1), 200'000, 5'000, 42);
    const SimResult res = run_sim(cfg, 1.0);
    CHECK(res.completed == 195'000);
    CHECK(res.m_simulated == 1);
    CHECK(res.mean_wait.contains(0.5)); // M/M/1: E[W] = lambda / (mu (mu - lambda))
}

TEST_CASE("delay fraction and deadline fraction match analytics") {
    const QueueParams q(3, 2, 4);
    const SimConfig cfg(q, 250'000, 5'000, 7);
    const SimResult res = run_sim(cfg, 1.0);
    CHECK(res.frac_delayed.contains(queueing::pq_exact(q)));
    CHECK(res.frac_within_deadline.contains(queueing::fw_exact(q, 1.0)));

    // deadline 0 keeps only the zero-wait requests
    const SimResult zero = run_sim(cfg, 0.0);
    CHECK(zero.frac_within_deadline.contains(1.0 - queueing::pq_exact(q)));
    CHECK_THROWS_AS(run_sim(cfg, -1.0), NegativeDeadline);
}

TEST_CASE("waits are non-negative and immediate service waits are zero") {
    const SimConfig cfg(QueueParams(2, 2, 1), 20'000, 0, 3);
    std::vector<std::pair<double, double>> dump;
    const SimResult res = run_sim(cfg, 1.0, &dump);
    CHECK(static_cast<long>(dump.size()) == res.completed);
    long zero_waits = 0;
    double prev_arrival = -1.0;
    for (const auto& [at, w] : dump) {
        CHECK(w >= 0.0);
        CHECK(at > prev_arrival);
        prev_arrival = at;
        if (w == 0.0) ++zero_waits;
    }
    // the very first arrival finds the system idle
    CHECK(dump.front().second == 0.0);
    // at rho = 0.25 most requests start immediately
    CHECK(zero_waits > res.completed / 2);
}

TEST_CASE("seed determinism") {
    const SimConfig cfg(QueueParams(3, 2, 4), 50'000, 1'000, 99);
    const SimResult a = run_sim(cfg, 1.0);
    const SimResult b = run_sim(cfg, 1.0);
    CHECK(a.mean_wait.value == b.mean_wait.value);
    CHECK(a.mean_wait.ci_half == b.mean_wait.ci_half);
    CHECK(a.frac_delayed.value == b.frac_delayed.value);
    CHECK(a.frac_within_deadline.value == b.frac_within_deadline.value);

    const SimConfig other(QueueParams(3, 2, 4), 50'000, 1'000, 100);
    CHECK(run_sim(other, 1.0).mean_wait.value != a.mean_wait.value);
}

TEST_CASE("analytic mean wait bracketed across utilizations") {
    struct Case {
        double m, s, lambda;
    };
    // rho = 0.3, 0.5, 2/3, 0.8, 0.9 with integer m
    const Case cases[] = {{2, 1, 0.6}, {2, 1, 1.0}, {3, 2, 4.0}, {4, 1, 3.2}, {5, 1, 4.5}};
    int hits = 0;
    for (const Case& c : cases) {
        const QueueParams q(c.m, c.s, c.lambda);
        const SimConfig cfg(q, 400'000, 10'000, 2024);
        const SimResult res = run_sim(cfg, 1.0);
        if (res.mean_wait.contains(queueing::mean_wait_exact(q))) ++hits;
    }
    CHECK(hits >= 4);
}

TEST_CASE("delayed waits follow the conditional exponential law") {
    // Kolmogorov-Smirnov distance between the positive waits and
    // Exp((1-rho) m mu) stays small at 1e5 delayed samples.
    const QueueParams q(3, 2, 4);
    const SimConfig cfg(q, 240'000, 5'000, 5);
    std::vector<std::pair<double, double>> dump;
    run_sim(cfg, 1.0, &dump);
    std::vector<double> delayed;
    for (const auto& [at, w] : dump)
        if (w > 0.0) delayed.push_back(w);
    REQUIRE(delayed.size() >= 100'000);
    std::sort(delayed.begin(), delayed.end());
    const double rate = (1.0 - q.rho()) * q.m * q.mu();
    double ks = 0.0;
    const double n = static_cast<double>(delayed.size());
    for (std::size_t i = 0; i < delayed.size(); ++i) {
        const double cdf = 1.0 - std::exp(-rate * delayed[i]);
        ks = std::max(ks, std::abs(cdf - (i + 1) / n));
        ks = std::max(ks, std::abs(cdf - i / n));
    }
    CHECK(ks <= 0.02);
}
