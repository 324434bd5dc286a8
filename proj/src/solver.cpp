#include "pla/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "pla/operators.hpp"

namespace pla {

namespace {

constexpr double kGridMs = 0.1;  // common time grid for r and h

std::int64_t to_grid(double ms, const char* what) {
    const double scaled = ms / kGridMs;
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-6 || rounded < 1.0)
        throw std::invalid_argument(std::string(what) +
                                    " is not representable on the 0.1 ms grid");
    return static_cast<std::int64_t>(rounded);
}

struct CyclePattern {
    // event kinds for one LCM period in time order (Publish first on ties)
    std::vector<TimelineEvent::Kind> kinds;
    int publishes = 0;
};

CyclePattern nominal_pattern(std::int64_t r_grid, std::int64_t h_grid,
                             std::int64_t lcm_grid) {
    CyclePattern pat;
    std::int64_t tp = 0, th = 0;
    while (tp < lcm_grid || th < lcm_grid) {
        const bool pub_next =
            tp < lcm_grid && (th >= lcm_grid || tp <= th);  // tie: publish first
        if (pub_next) {
            pat.kinds.push_back(TimelineEvent::Publish);
            ++pat.publishes;
            tp += r_grid;
        } else {
            pat.kinds.push_back(TimelineEvent::Heartbeat);
            th += h_grid;
        }
    }
    return pat;
}

}  // namespace

int period_R(double r_ms, double h_ms) {
    const std::int64_t r = to_grid(r_ms, "r");
    const std::int64_t h = to_grid(h_ms, "h");
    return static_cast<int>(std::lcm(r, h) / r);
}

EventTimeline build_timeline(const ScenarioParams& sp, const SolverConfig& cfg,
                             double horizon_ms) {
    EventTimeline tl;
    tl.horizon_ms = horizon_ms;
    const double hb_period = cfg.timeline_mode == TimelineMode::Drifted
                                 ? sp.h_ms + sp.hb_extra_ms
                                 : sp.h_ms;
    for (std::int64_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * sp.r_ms;
        if (t > horizon_ms) break;
        tl.events.push_back({t, TimelineEvent::Publish});
    }
    for (std::int64_t j = 0;; ++j) {
        const double t = static_cast<double>(j) * hb_period;
        if (t > horizon_ms) break;
        tl.events.push_back({t, TimelineEvent::Heartbeat});
    }
    std::stable_sort(tl.events.begin(), tl.events.end(),
                     [](const TimelineEvent& a, const TimelineEvent& b) {
                         if (a.time_ms != b.time_ms) return a.time_ms < b.time_ms;
                         return a.kind < b.kind;  // Publish before Heartbeat
                     });
    return tl;
}

double cycle_distance(const SteadyStateCycle& a, const SteadyStateCycle& b) {
    if (a.dists.size() != b.dists.size())
        throw std::invalid_argument("cycle length mismatch");
    double dist = 0.0;
    for (std::size_t n = 0; n < a.dists.size(); ++n) {
        const auto& pa = a.dists[n].probs();
        const auto& pb = b.dists[n].probs();
        const std::size_t len = std::max(pa.size(), pb.size());
        for (std::size_t k = 0; k < len; ++k) {
            const double va = k < pa.size() ? pa[k] : 0.0;
            const double vb = k < pb.size() ? pb[k] : 0.0;
            dist = std::max(dist, std::abs(va - vb));
        }
    }
    return dist;
}

namespace {

// One solve attempt at a fixed k_max. Returns the cycle; the caller decides
// whether the truncation bound was generous enough.
SteadyStateCycle solve_at_kmax(const ScenarioParams& sp, const SolverConfig& cfg,
                               std::size_t kmax) {
    const auto derived = derive_params(sp);
    const std::int64_t r_grid = to_grid(sp.r_ms, "r");
    const std::int64_t h_grid = to_grid(sp.h_ms, "h");
    const std::int64_t lcm_grid = std::lcm(r_grid, h_grid);
    const int R = static_cast<int>(lcm_grid / r_grid);

    const auto pub_w = detail::pub_weights(derived.packets_per_publish, sp.p);
    RetransmitKernel kernel(derived.msgs_per_retx_packet, sp.p);

    std::vector<double> state(kmax + 1, 0.0), scratch;
    state[0] = 1.0;

    SteadyStateCycle result;
    result.period = R;

    const bool drifted = cfg.timeline_mode == TimelineMode::Drifted;
    const CyclePattern pattern =
        drifted ? CyclePattern{} : nominal_pattern(r_grid, h_grid, lcm_grid);

    // Drifted mode cannot reuse a periodic pattern; events are merged lazily.
    std::int64_t pub_index = 0;
    double next_hb = 0.0;
    const double hb_period = sp.h_ms + sp.hb_extra_ms;

    std::vector<std::vector<double>> cur, prev;
    double folded = 0.0;

    for (int cycle = 0; cycle < cfg.max_cycles; ++cycle) {
        cur.clear();
        folded = 0.0;
        if (!drifted) {
            for (auto kind : pattern.kinds) {
                if (kind == TimelineEvent::Publish) {
                    detail::pub_into(state, pub_w, scratch, &folded);
                    state.swap(scratch);
                    cur.push_back(state);
                } else {
                    detail::hb_into(state, kernel, scratch);
                    state.swap(scratch);
                }
            }
        } else {
            int pubs_this_cycle = 0;
            while (pubs_this_cycle < R) {
                const double tp = static_cast<double>(pub_index) * sp.r_ms;
                if (tp <= next_hb) {  // tie: publish first
                    detail::pub_into(state, pub_w, scratch, &folded);
                    state.swap(scratch);
                    cur.push_back(state);
                    ++pub_index;
                    ++pubs_this_cycle;
                } else {
                    detail::hb_into(state, kernel, scratch);
                    state.swap(scratch);
                    next_hb += hb_period;
                }
            }
        }

        // cycles_used counts the cycle after which the snapshots stopped
        // changing; a lossless run therefore converges in one cycle
        result.cycles_used = cycle + 1;
        if (!prev.empty()) {
            double dist = 0.0;
            for (int n = 0; n < R; ++n)
                for (std::size_t k = 0; k <= kmax; ++k)
                    dist = std::max(dist, std::abs(cur[n][k] - prev[n][k]));
            result.final_distance = dist;
            if (dist < cfg.epsilon) {
                result.converged = true;
                result.cycles_used = cycle;
                break;
            }
        }
        prev = cur;
    }

    result.dists.reserve(cur.size());
    for (auto& v : cur) {
        result.max_top_bucket = std::max(result.max_top_bucket, v[kmax]);
        // tail_mass reports what the final cycle folded into the top bucket
        result.dists.push_back(
            UnackedDistribution::from_normalized(std::move(v), folded));
    }
    return result;
}

}  // namespace

SteadyStateCycle solve_steady_state(const ScenarioParams& sp,
                                    const SolverConfig& cfg) {
    const auto rep = validate_scenario(sp);
    if (!rep.ok())
        throw std::invalid_argument("invalid scenario: " + rep.errors.front());
    if (cfg.max_cycles < 1 || cfg.epsilon <= 0.0 || cfg.tail_tol <= 0.0)
        throw std::invalid_argument("solver caps and tolerances must be positive");

    const auto derived = derive_params(sp);
    std::size_t kmax = static_cast<std::size_t>(std::max(
        cfg.kmax_floor,
        static_cast<int>(std::ceil(10.0 * derived.packets_per_publish))));
    constexpr std::size_t kHardCap = 1 << 16;

    for (;;) {
        SteadyStateCycle cycle = solve_at_kmax(sp, cfg, kmax);
        if (cycle.max_top_bucket <= cfg.tail_tol || kmax >= kHardCap)
            return cycle;
        kmax *= 2;  // truncation bound too tight; retry
    }
}

}  // namespace pla
