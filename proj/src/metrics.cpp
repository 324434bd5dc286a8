#include "pla/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "pla/operators.hpp"

namespace pla {

namespace {

double positive_mod(double a, double m) {
    double v = std::fmod(a, m);
    return v < 0.0 ? v + m : v;
}

// Mean offset over the (possibly wrapped) segment [s, e) within [0, h).
double segment_mean(double s, double e, double h) {
    if (e > s) return (e + s) / 2.0;
    // wraps past h: [s, h) plus [0, e)
    return ((h * h - s * s) / 2.0 + e * e / 2.0) / ((h - s) + e);
}

PhaseLatency phase_series(const std::vector<double>& P0, double tc_ms,
                          double h_ms, const RetransmitKernel& kernel,
                          const SolverConfig& cfg) {
    PhaseLatency out;
    std::vector<double> cur = P0, next;
    double prev_zero = cur[0];
    for (int v = 1; v <= cfg.series_max_v; ++v) {
        detail::hb_into(cur, kernel, next);
        cur.swap(next);
        const double gained = cur[0] - prev_zero;
        const double t = (v - 1) * h_ms + tc_ms;
        out.mean_ms += gained * t;
        out.second_moment += gained * t * t;
        prev_zero = cur[0];
        out.heartbeats_used = v;
        const double residual = 1.0 - cur[0];
        if (residual < cfg.series_tail_tol) {
            out.residual = residual;
            out.mean_ms += residual * t;  // conservative remainder
            out.second_moment += residual * t * t;
            return out;
        }
        out.residual = residual;
    }
    const double t_last = (out.heartbeats_used - 1) * h_ms + tc_ms;
    out.mean_ms += out.residual * t_last;
    out.second_moment += out.residual * t_last * t_last;
    out.truncated_early = out.residual > 1e-6;
    return out;
}

OffsetModel offsets_with_kernel(const ScenarioParams& sp,
                                const SteadyStateCycle& q,
                                const RetransmitKernel& kernel) {
    OffsetModel off;
    const double r = sp.r_ms, h = sp.h_ms;
    const int R = q.period;

    if (r == h) {
        off.kind = OffsetCase::EqualPeriods;
        off.per_publish_tc_ms.assign(R, r / 2.0);
        return off;
    }
    if (r < h) {
        // The drifting heartbeat sweeps phase n's first-heartbeat offset over
        // [-(n-1) r, -(n-2) r) mod h, with phase 1 (the publish the heartbeat
        // lands right after) keeping [0, r).
        off.kind = OffsetCase::PublishFaster;
        off.per_publish_tc_ms.reserve(R);
        for (int n = 1; n <= R; ++n) {
            const double s = positive_mod(-(n - 1) * r, h);
            const double e = positive_mod(s + r, h);
            off.per_publish_tc_ms.push_back(segment_mean(s, e, h));
        }
        return off;
    }

    off.kind = OffsetCase::HeartbeatFaster;
    const auto rg = static_cast<std::int64_t>(std::llround(r * 10.0));
    const auto hg = static_cast<std::int64_t>(std::llround(h * 10.0));
    std::int64_t pattern_len = 1;
    while ((pattern_len + 1) * hg / rg != pattern_len * hg / rg) ++pattern_len;
    for (std::int64_t l = 1; l <= pattern_len; ++l)
        off.pattern_deltas_ms.push_back(
            static_cast<double>((l * hg) % rg) / 10.0);

    const int big_h = static_cast<int>(std::lcm(rg, hg) / hg) - 1;
    off.weight_hb_count = std::max(1, big_h - 1);

    double fixed_part = 0.0;
    for (std::size_t l = 1; l < off.pattern_deltas_ms.size(); ++l)
        fixed_part += off.pattern_deltas_ms[l];

    std::vector<double> cur, next;
    off.per_publish_tc_ms.reserve(R);
    for (int n = 0; n < R; ++n) {
        cur = q.dists[n].probs();
        for (int i = 0; i < off.weight_hb_count; ++i) {
            detail::hb_into(cur, kernel, next);
            cur.swap(next);
        }
        const double weight = cur[0];  // all data acked: restart costs h
        off.per_publish_tc_ms.push_back(
            (weight * off.pattern_deltas_ms[0] + fixed_part) /
            static_cast<double>(pattern_len));
    }
    return off;
}

}  // namespace

double mdr(const SteadyStateCycle& q) {
    if (q.dists.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& d : q.dists) acc += d[0];
    return 100.0 * acc / static_cast<double>(q.dists.size());
}

OffsetModel offset_model(const ScenarioParams& sp, const SteadyStateCycle& q) {
    const auto derived = derive_params(sp);
    RetransmitKernel kernel(derived.msgs_per_retx_packet, sp.p);
    return offsets_with_kernel(sp, q, kernel);
}

PhaseLatency phase_latency(const UnackedDistribution& P, double tc_ms,
                           double h_ms, int msgs_per_retx_packet, double p,
                           const SolverConfig& cfg) {
    RetransmitKernel kernel(msgs_per_retx_packet, p);
    return phase_series(P.probs(), tc_ms, h_ms, kernel, cfg);
}

namespace {

std::vector<PhaseLatency> all_phases(const SteadyStateCycle& q,
                                     const OffsetModel& off,
                                     const ScenarioParams& sp,
                                     const SolverConfig& cfg) {
    if (off.per_publish_tc_ms.size() != q.dists.size())
        throw std::invalid_argument("offset model not aligned with cycle");
    const auto derived = derive_params(sp);
    RetransmitKernel kernel(derived.msgs_per_retx_packet, sp.p);
    std::vector<PhaseLatency> phases;
    phases.reserve(q.dists.size());
    for (std::size_t n = 0; n < q.dists.size(); ++n)
        phases.push_back(phase_series(q.dists[n].probs(),
                                      off.per_publish_tc_ms[n], sp.h_ms, kernel,
                                      cfg));
    return phases;
}

double mean_latency(const std::vector<PhaseLatency>& phases) {
    double acc = 0.0;
    for (const auto& ph : phases) acc += ph.mean_ms;
    return acc / static_cast<double>(phases.size());
}

double jitter_from(const std::vector<PhaseLatency>& phases, double mean,
                   bool phase_means_only) {
    double acc = 0.0;
    for (const auto& ph : phases)
        acc += phase_means_only ? ph.mean_ms * ph.mean_ms : ph.second_moment;
    double var = acc / static_cast<double>(phases.size()) - mean * mean;
    if (var < 0.0) var = 0.0;  // rounding of a degenerate cycle
    return std::sqrt(var);
}

}  // namespace

double aggregate_latency(const SteadyStateCycle& q, const OffsetModel& off,
                         const ScenarioParams& sp, const SolverConfig& cfg) {
    return mean_latency(all_phases(q, off, sp, cfg));
}

double jitter(const SteadyStateCycle& q, const OffsetModel& off,
              const ScenarioParams& sp, const SolverConfig& cfg) {
    const auto phases = all_phases(q, off, sp, cfg);
    return jitter_from(phases, mean_latency(phases), cfg.jitter_phase_means_only);
}

AnalysisResult analyze_scenario(const ScenarioParams& sp,
                                const SolverConfig& cfg) {
    AnalysisResult res;
    SteadyStateCycle q = solve_steady_state(sp, cfg);
    res.period = q.period;
    res.cycles_used = q.cycles_used;
    res.converged = q.converged;
    res.final_distance = q.final_distance;
    res.max_top_bucket = q.max_top_bucket;
    res.tail_mass = q.dists.empty() ? 0.0 : q.dists.front().tail_mass();

    const auto derived = derive_params(sp);
    RetransmitKernel kernel(derived.msgs_per_retx_packet, sp.p);
    const OffsetModel off = offsets_with_kernel(sp, q, kernel);

    std::vector<PhaseLatency> phases;
    phases.reserve(q.dists.size());
    for (std::size_t n = 0; n < q.dists.size(); ++n) {
        phases.push_back(phase_series(q.dists[n].probs(),
                                      off.per_publish_tc_ms[n], sp.h_ms, kernel,
                                      cfg));
        res.worst_series_residual =
            std::max(res.worst_series_residual, phases.back().residual);
        res.series_truncated_early |= phases.back().truncated_early;
    }
    res.metrics.mdr_pct = mdr(q);
    res.metrics.avg_latency_ms = mean_latency(phases);
    res.metrics.jitter_ms = jitter_from(phases, res.metrics.avg_latency_ms,
                                        cfg.jitter_phase_means_only);
    return res;
}

}  // namespace pla
