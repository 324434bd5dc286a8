#pragma once

#include <vector>

#include "pla/scenario.hpp"
#include "pla/solver.hpp"

namespace pla {

struct LatencyMetrics {
    double mdr_pct = 0.0;
    double avg_latency_ms = 0.0;
    double jitter_ms = 0.0;
};

enum class OffsetCase { EqualPeriods, PublishFaster, HeartbeatFaster };

// Expected offset from each phase's publish event to the first heartbeat
// that can trigger a retransmission for it.
struct OffsetModel {
    OffsetCase kind = OffsetCase::EqualPeriods;
    std::vector<double> per_publish_tc_ms;  // aligned with SteadyStateCycle::dists
    std::vector<double> pattern_deltas_ms;  // HeartbeatFaster only
    int weight_hb_count = 0;                // Hb applications behind the delta_1 weight
};

// 100 * mean over phases of P[0].
double mdr(const SteadyStateCycle& q);

OffsetModel offset_model(const ScenarioParams& sp, const SteadyStateCycle& q);

struct PhaseLatency {
    double mean_ms = 0.0;
    double second_moment = 0.0;  // E[delay^2], same series with squared times
    double residual = 0.0;       // mass left when the series was cut off
    int heartbeats_used = 0;
    bool truncated_early = false;  // residual still above 1e-6 at cutoff
};

// Expected delay for one phase: sum over v >= 1 of
// [Hb^v(P)[0] - Hb^(v-1)(P)[0]] * ((v-1) h + tc), truncated when the
// remaining mass drops below cfg.series_tail_tol; the remainder is charged
// at the last time point.
PhaseLatency phase_latency(const UnackedDistribution& P, double tc_ms,
                           double h_ms, int msgs_per_retx_packet, double p,
                           const SolverConfig& cfg);

double aggregate_latency(const SteadyStateCycle& q, const OffsetModel& off,
                         const ScenarioParams& sp, const SolverConfig& cfg);

// Standard deviation of the per-message delay across the cycle. Uses the
// per-message second moment within each phase; the variant using only phase
// means sits behind cfg.jitter_phase_means_only.
double jitter(const SteadyStateCycle& q, const OffsetModel& off,
              const ScenarioParams& sp, const SolverConfig& cfg);

struct AnalysisResult {
    LatencyMetrics metrics;
    int period = 0;
    int cycles_used = 0;
    bool converged = true;
    double final_distance = 0.0;
    double max_top_bucket = 0.0;
    double tail_mass = 0.0;  // folded past k_max during the final cycle
    double worst_series_residual = 0.0;
    bool series_truncated_early = false;
};

// Full pipeline: solve, offsets, metrics.
AnalysisResult analyze_scenario(const ScenarioParams& sp,
                                const SolverConfig& cfg = {});

}  // namespace pla
