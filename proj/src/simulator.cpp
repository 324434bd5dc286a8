#include "pla/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace pla {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) built from the top 53 bits; identical across
// platforms, unlike std::uniform_real_distribution.
struct Uniform01 {
    std::mt19937_64 rng;
    explicit Uniform01(std::uint64_t s) : rng(s) {}
    double operator()() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
};

struct Fragment {
    int msg;
};

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t scenario_index) {
    return splitmix64(seed ^ splitmix64(scenario_index));
}

SimResult run_sim(const ScenarioParams& sp, const SimConfig& sc) {
    if (sc.n_messages < 1) throw std::invalid_argument("n_messages must be >= 1");
    const auto rep = validate_scenario(sp);
    if (!rep.ok())
        throw std::invalid_argument("invalid scenario: " + rep.errors.front());

    const auto derived = derive_params(sp);
    const int frags_per_msg = derived.packets_per_publish;
    const int cap = derived.msgs_per_retx_packet;
    const double hb_period = sp.h_ms + sp.hb_extra_ms;
    const int n = sc.n_messages;

    Uniform01 rand(mix_seed(sc.seed, sc.scenario_index));

    std::vector<int> frags_left(n, frags_per_msg);
    std::vector<double> completed_at(n, -1.0);
    std::deque<Fragment> missing;      // subscriber-side, sequence order
    long long unconfirmed = 0;         // writer-side, per fragment
    double next_hb = -1.0;             // < 0: heartbeat timer inactive
    bool hb_active = false;

    SimResult result;

    int i = 0;
    while (true) {
        const bool more_pubs = i < n;
        if (!more_pubs && !hb_active) break;
        if (!more_pubs && !sc.drain) break;
        const double tp = static_cast<double>(i) * sp.r_ms;

        if (more_pubs && (!hb_active || tp <= next_hb)) {
            // publish event (wins ties)
            unconfirmed += frags_per_msg;
            for (int f = 0; f < frags_per_msg; ++f) {
                if (rand() < sp.p) {
                    if (--frags_left[i] == 0) completed_at[i] = tp;
                } else {
                    missing.push_back({i});
                }
            }
            if (!hb_active) {
                next_hb = tp + sp.h_ms;  // timer rearms h after idle
                hb_active = true;
            }
            ++i;
            continue;
        }

        // heartbeat timer fires
        const double t = next_hb;
        if (unconfirmed == 0) {
            hb_active = false;  // everything confirmed since the last round
            continue;
        }
        if (sc.record_events) result.heartbeat_times_ms.push_back(t);
        if (rand() < sp.p && rand() < sp.p) {  // heartbeat, then acknack
            // the acknack positively acks all fragments the subscriber holds
            unconfirmed = static_cast<long long>(missing.size());
            if (!missing.empty()) {
                const std::size_t npackets = (missing.size() + cap - 1) / cap;
                std::deque<Fragment> still_missing;
                for (std::size_t k = 0; k < npackets; ++k) {
                    const std::size_t lo = k * cap;
                    const std::size_t hi = std::min(missing.size(), lo + cap);
                    if (rand() < sp.p) {
                        for (std::size_t idx = lo; idx < hi; ++idx) {
                            const int msg = missing[idx].msg;
                            if (--frags_left[msg] == 0) completed_at[msg] = t;
                        }
                    } else {
                        for (std::size_t idx = lo; idx < hi; ++idx)
                            still_missing.push_back(missing[idx]);
                    }
                }
                missing.swap(still_missing);
                // retransmissions carry a piggyback heartbeat; its acknack
                // (if it arrives) confirms this round immediately
                if (rand() < sp.p)
                    unconfirmed = static_cast<long long>(missing.size());
            }
        }
        next_hb = t + hb_period;
    }

    // in-order delivery: a message reaches the application once it and all
    // of its predecessors are complete
    result.delays_ms.reserve(n);
    double app_time = 0.0;
    for (int k = 0; k < n; ++k) {
        if (completed_at[k] < 0.0) {
            result.undelivered = n - k;
            break;
        }
        app_time = std::max(app_time, completed_at[k]);
        result.delays_ms.push_back(app_time - static_cast<double>(k) * sp.r_ms);
    }
    if (!result.delays_ms.empty())
        result.metrics = empirical_metrics(result.delays_ms);
    return result;
}

LatencyMetrics empirical_metrics(std::span<const double> delays_ms) {
    if (delays_ms.empty())
        throw std::invalid_argument("empirical_metrics: no delays");
    const double n = static_cast<double>(delays_ms.size());
    double zeros = 0.0, sum = 0.0;
    for (double d : delays_ms) {
        if (d == 0.0) zeros += 1.0;
        sum += d;
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (double d : delays_ms) ss += (d - mean) * (d - mean);
    LatencyMetrics m;
    m.mdr_pct = 100.0 * zeros / n;
    m.avg_latency_ms = mean;
    m.jitter_ms = std::sqrt(ss / n);  // population standard deviation
    return m;
}

}  // namespace pla
