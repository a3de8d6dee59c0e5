#include "robusched/simulate.hpp"

#include "robusched/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <string>

namespace robusched::simulate {

namespace {

// t quantile at 0.975 with 19 degrees of freedom (20 batches).
constexpr double kT975Df19 = 2.093024054408263;

struct Event {
    double time;
    int kind; // 0 = arrival, 1 = departure
    long id;

    bool operator>(const Event& other) const {
        if (time != other.time) return time > other.time;
        if (kind != other.kind) return kind > other.kind;
        return id > other.id;
    }
};

Estimate batch_estimate(const std::vector<double>& batch_means) {
    const int n = static_cast<int>(batch_means.size());
    double mean = 0.0;
    for (double v : batch_means) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : batch_means) var += (v - mean) * (v - mean);
    var /= (n - 1);
    return Estimate{mean, kT975Df19 * std::sqrt(var / n)};
}

} // namespace

SimConfig::SimConfig(queueing::QueueParams p, long n, long w, std::uint64_t s)
    : params(p), n_arrivals(n), warmup(w), seed(s) {
    if (!(n_arrivals > warmup) || warmup < 0)
        throw InvalidParam("need n_arrivals > warmup >= 0");
    const int m_int = std::max(1, static_cast<int>(std::llround(params.m)));
    if (!(params.lambda * params.r_bar < m_int * params.s))
        throw NonErgodic("rounded server count " + std::to_string(m_int) +
                         " cannot keep up with the offered load");
}

SimResult run_sim(const SimConfig& cfg, double deadline,
                  std::vector<std::pair<double, double>>* wait_dump) {
    if (deadline < 0.0) throw NegativeDeadline();
    const int m = std::max(1, static_cast<int>(std::llround(cfg.params.m)));
    const double lambda = cfg.params.lambda;
    const double mu = cfg.params.mu();

    Rng arrivals_rng = Rng(cfg.seed).split(1);
    Rng service_rng = Rng(cfg.seed).split(2);

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;
    std::deque<std::pair<long, double>> fifo; // (arrival id, arrival time)
    std::vector<double> arrival_time(cfg.n_arrivals);
    std::vector<double> wait(cfg.n_arrivals - cfg.warmup);

    int idle = m;
    long arrived = 0;

    auto start_service = [&](long id, double now) {
        const double w = now - arrival_time[id];
        if (id >= cfg.warmup) wait[id - cfg.warmup] = w;
        events.push(Event{now + service_rng.exponential(mu), 1, id});
    };

    events.push(Event{arrivals_rng.exponential(lambda), 0, 0});
    while (!events.empty()) {
        const Event ev = events.top();
        events.pop();
        if (ev.kind == 0) {
            arrival_time[ev.id] = ev.time;
            ++arrived;
            if (arrived < cfg.n_arrivals)
                events.push(Event{ev.time + arrivals_rng.exponential(lambda), 0, ev.id + 1});
            if (idle > 0) {
                --idle;
                start_service(ev.id, ev.time);
            } else {
                fifo.emplace_back(ev.id, ev.time);
            }
        } else {
            if (!fifo.empty()) {
                const auto [id, at] = fifo.front();
                fifo.pop_front();
                start_service(id, ev.time);
            } else {
                ++idle;
            }
        }
    }

    SimResult out;
    out.completed = static_cast<long>(wait.size());
    out.m_requested = cfg.params.m;
    out.m_simulated = m;

    if (wait_dump) {
        wait_dump->clear();
        wait_dump->reserve(wait.size());
        for (long i = 0; i < out.completed; ++i)
            wait_dump->emplace_back(arrival_time[i + cfg.warmup], wait[i]);
    }

    constexpr int kBatches = 20;
    std::vector<double> mw(kBatches), fd(kBatches), fw(kBatches);
    const long per = out.completed / kBatches;
    for (int b = 0; b < kBatches; ++b) {
        const long lo = b * per;
        const long hi = (b == kBatches - 1) ? out.completed : lo + per;
        double sum = 0.0;
        long delayed = 0, within = 0;
        for (long i = lo; i < hi; ++i) {
            sum += wait[i];
            if (wait[i] > 0.0) ++delayed;
            if (wait[i] <= deadline) ++within;
        }
        const double cnt = static_cast<double>(hi - lo);
        mw[b] = sum / cnt;
        fd[b] = delayed / cnt;
        fw[b] = within / cnt;
    }
    out.mean_wait = batch_estimate(mw);
    out.frac_delayed = batch_estimate(fd);
    out.frac_within_deadline = batch_estimate(fw);
    return out;
}

} // namespace robusched::simulate
