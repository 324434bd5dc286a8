#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pla/metrics.hpp"
#include "pla/scenario.hpp"

namespace pla {

struct SimConfig {
    int n_messages = 5000;
    std::uint64_t seed = 0;
    std::uint64_t scenario_index = 0;  // stream split: one run per (seed, index)
    bool drain = true;   // keep heartbeats running after the last publish
    bool record_events = false;  // capture heartbeat firing times
};

struct SimResult {
    std::vector<double> delays_ms;  // per delivered message, publish order
    LatencyMetrics metrics;
    int undelivered = 0;            // only with drain = false
    std::vector<double> heartbeat_times_ms;  // record_events only
};

// Deterministic seed mixing so sweeps are reproducible regardless of how
// scenarios are distributed over threads.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t scenario_index);

// Seeded discrete-event simulation of the reliability loop with zero
// propagation delay. Publishes emit ceil(m) fragments; the heartbeat timer
// runs at h + hb_extra while the writer has unconfirmed data, stops when an
// acknack has confirmed everything, and rearms h after the publish that
// breaks the idle state. Retransmissions batch ceil(1/m) messages per packet
// and carry a piggyback heartbeat so a successful round confirms promptly.
// Messages reach the application in publish order; a message's delay is the
// time its last fragment (and all predecessors) arrived minus publish time.
SimResult run_sim(const ScenarioParams& sp, const SimConfig& sc);

// MDR = share of exact zeros; mean and population standard deviation.
// Throws std::invalid_argument on empty input.
LatencyMetrics empirical_metrics(std::span<const double> delays_ms);

}  // namespace pla
