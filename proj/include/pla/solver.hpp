#pragma once

#include <vector>

#include "pla/distribution.hpp"
#include "pla/scenario.hpp"

namespace pla {

enum class TimelineMode { Nominal, Drifted };

struct SolverConfig {
    double epsilon = 1e-9;          // cycle-distance convergence tolerance
    int max_cycles = 10000;
    int kmax_floor = 64;            // initial k_max = max(floor, ceil(10 u))
    double tail_tol = 1e-12;        // top-bucket mass that triggers k_max doubling
    double series_tail_tol = 1e-10; // latency series truncation
    int series_max_v = 10000;
    TimelineMode timeline_mode = TimelineMode::Nominal;
    bool jitter_phase_means_only = false;  // comparison variant, see jitter()
};

struct TimelineEvent {
    double time_ms;
    enum Kind { Publish, Heartbeat } kind;
};

struct EventTimeline {
    std::vector<TimelineEvent> events;  // ascending; Publish first on ties
    double horizon_ms = 0.0;
};

// Steady-state cycle length R = LCM(r, h) / r, computed on a 0.1 ms integer
// grid. Throws std::invalid_argument when r or h does not sit on the grid.
int period_R(double r_ms, double h_ms);

// Publishes at i*r; heartbeats at j*h (Nominal) or j*(h + hb_extra) (Drifted),
// both up to and including horizon_ms.
EventTimeline build_timeline(const ScenarioParams& sp, const SolverConfig& cfg,
                             double horizon_ms);

struct SteadyStateCycle {
    std::vector<UnackedDistribution> dists;  // post-publish snapshots, phase 1 at t = 0 mod LCM
    int period = 0;
    bool converged = false;
    int cycles_used = 0;
    double final_distance = 0.0;
    double max_top_bucket = 0.0;  // truncation diagnostic over the final cycle
};

// L-infinity distance over all phases and indices; shorter distributions are
// zero-padded. Throws std::invalid_argument when the cycle lengths differ.
double cycle_distance(const SteadyStateCycle& a, const SteadyStateCycle& b);

// Iterates Pub/Hb over the event timeline from the all-acked state until two
// consecutive cycles of post-publish snapshots agree within cfg.epsilon.
// Non-convergence within max_cycles is reported, not thrown. k_max doubles
// and the solve restarts while the top bucket holds more than cfg.tail_tol.
SteadyStateCycle solve_steady_state(const ScenarioParams& sp,
                                    const SolverConfig& cfg);

}  // namespace pla
