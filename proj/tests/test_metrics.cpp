#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "pla/metrics.hpp"
#include "pla/operators.hpp"
#include "pla/solver.hpp"

using namespace pla;

namespace {

ScenarioParams make(double m, double r, double h, double p) {
    ScenarioParams sp;
    sp.m = m;
    sp.r_ms = r;
    sp.h_ms = h;
    sp.p = p;
    return sp;
}

SteadyStateCycle cycle_of(std::vector<UnackedDistribution> dists) {
    SteadyStateCycle q;
    q.period = static_cast<int>(dists.size());
    q.dists = std::move(dists);
    q.converged = true;
    return q;
}

}  // namespace

TEST_CASE("mdr averages the zero buckets") {
    auto q1 = cycle_of({UnackedDistribution::delta0(4)});
    CHECK(mdr(q1) == 100.0);

    auto q2 = cycle_of({UnackedDistribution::from_probs({1.0, 0.0}),
                        UnackedDistribution::from_probs({0.8, 0.2})});
    CHECK(mdr(q2) == doctest::Approx(90.0).epsilon(1e-12));
}

TEST_CASE("offset model: equal periods") {
    auto sp = make(1, 100, 100, 0.9);
    auto q = solve_steady_state(sp, {});
    auto off = offset_model(sp, q);
    CHECK(off.kind == OffsetCase::EqualPeriods);
    REQUIRE(off.per_publish_tc_ms.size() == 1);
    CHECK(off.per_publish_tc_ms[0] == doctest::Approx(50.0));
}

TEST_CASE("offset model: publish faster than heartbeat") {
    auto sp = make(1, 50, 100, 0.9);
    auto q = solve_steady_state(sp, {});
    auto off = offset_model(sp, q);
    CHECK(off.kind == OffsetCase::PublishFaster);
    REQUIRE(off.per_publish_tc_ms.size() == 2);
    CHECK(off.per_publish_tc_ms[0] == doctest::Approx(25.0));  // segment [0, 50)
    CHECK(off.per_publish_tc_ms[1] == doctest::Approx(75.0));  // wrapped [50, 100)

    // R = 4: phase 1 keeps [0, r); later phases walk the sweep backwards
    auto sp4 = make(1, 50, 200, 0.9);
    auto q4 = solve_steady_state(sp4, {});
    auto off4 = offset_model(sp4, q4);
    REQUIRE(off4.per_publish_tc_ms.size() == 4);
    CHECK(off4.per_publish_tc_ms[0] == doctest::Approx(25.0));
    CHECK(off4.per_publish_tc_ms[1] == doctest::Approx(175.0));
    CHECK(off4.per_publish_tc_ms[2] == doctest::Approx(125.0));
    CHECK(off4.per_publish_tc_ms[3] == doctest::Approx(75.0));
}

TEST_CASE("publish-faster segments tile the heartbeat interval") {
    for (auto [r, h] : {std::pair{50.0, 100.0}, std::pair{50.0, 200.0},
                        std::pair{100.0, 200.0}}) {
        auto sp = make(1, r, h, 0.9);
        auto q = solve_steady_state(sp, {});
        auto off = offset_model(sp, q);
        // R segments of length r cover [0, h) exactly LCM/h times
        const double total = r * static_cast<double>(q.period);
        const double lcm = std::lcm(static_cast<int>(r), static_cast<int>(h));
        CHECK(total == doctest::Approx(lcm));
        for (double tc : off.per_publish_tc_ms) {
            CHECK(tc >= 0.0);
            CHECK(tc <= h);
        }
    }
}

TEST_CASE("offset model: heartbeat faster, restart pattern") {
    // r=500, h=250: pattern {250, 0}, one Hb application behind the weight
    auto sp = make(1, 500, 250, 0.85);
    auto q = solve_steady_state(sp, {});
    auto off = offset_model(sp, q);
    CHECK(off.kind == OffsetCase::HeartbeatFaster);
    REQUIRE(off.pattern_deltas_ms.size() == 2);
    CHECK(off.pattern_deltas_ms[0] == doctest::Approx(250.0));
    CHECK(off.pattern_deltas_ms[1] == doctest::Approx(0.0));
    CHECK(off.weight_hb_count == 1);  // max(1, H - 1) with H = 1
    REQUIRE(off.per_publish_tc_ms.size() == 1);

    // the weight is the zero bucket after one heartbeat application
    RetransmitKernel kernel(1, 0.85);
    auto after = hb_apply(q.dists[0], kernel);
    CHECK(off.per_publish_tc_ms[0] ==
          doctest::Approx(after[0] * 250.0 / 2.0).epsilon(1e-12));

    // lossless: weight 1, so t_c = (250 + 0) / 2
    auto sp1 = make(1, 500, 250, 1.0);
    auto q1 = solve_steady_state(sp1, {});
    auto off1 = offset_model(sp1, q1);
    CHECK(off1.per_publish_tc_ms[0] == doctest::Approx(125.0));
}

TEST_CASE("offset model: heartbeat faster with longer restart chain") {
    // r=200, h=50: H = 3, weight uses two Hb applications, pattern length 1
    auto sp = make(1, 200, 50, 0.9);
    auto q = solve_steady_state(sp, {});
    auto off = offset_model(sp, q);
    REQUIRE(off.pattern_deltas_ms.size() == 1);
    CHECK(off.pattern_deltas_ms[0] == doctest::Approx(50.0));
    CHECK(off.weight_hb_count == 2);
}

TEST_CASE("phase latency series") {
    SolverConfig cfg;
    auto zero = phase_latency(UnackedDistribution::delta0(4), 25, 100, 1, 0.9, cfg);
    CHECK(zero.mean_ms == doctest::Approx(0.0));
    CHECK(zero.second_moment == doctest::Approx(0.0));

    // p = 1: the first heartbeat clears everything: 0.1 * 50
    auto d = UnackedDistribution::from_probs({0.9, 0.1});
    auto one = phase_latency(d, 50, 100, 1, 1.0, cfg);
    CHECK(one.mean_ms == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(one.second_moment == doctest::Approx(0.1 * 50 * 50).epsilon(1e-12));
    CHECK(one.heartbeats_used == 1);

    // geometric over heartbeats: mean = sum q (1-q)^(v-1) [(v-1) h + tc]
    const double p = 0.9, q3 = p * p * p;
    auto geo = phase_latency(UnackedDistribution::from_probs({0.0, 1.0}), 30,
                             100, 1, p, cfg);
    const double expect = 30.0 + 100.0 * (1.0 - q3) / q3;
    CHECK(geo.mean_ms == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("phase latency grows with the heartbeat period at fixed tc ratio") {
    SolverConfig cfg;
    auto d = UnackedDistribution::from_probs({0.6, 0.3, 0.1});
    double prev = 0.0;
    for (double h : {50.0, 100.0, 200.0, 400.0}) {
        auto ph = phase_latency(d, h / 4.0, h, 1, 0.85, cfg);
        CHECK(ph.mean_ms > prev);
        prev = ph.mean_ms;
    }
}

TEST_CASE("aggregate latency averages phases; jitter needs second moments") {
    auto sp = make(1, 50, 50, 0.95);
    SolverConfig cfg;
    auto q = solve_steady_state(sp, cfg);
    auto off = offset_model(sp, q);
    const double lat = aggregate_latency(q, off, sp, cfg);
    const double jit = jitter(q, off, sp, cfg);
    CHECK(lat == doctest::Approx(1.92).epsilon(0.01));
    CHECK(jit == doctest::Approx(9.35).epsilon(0.01));

    // with phase means only, a single-phase cycle has zero variance
    SolverConfig flat = cfg;
    flat.jitter_phase_means_only = true;
    CHECK(jitter(q, off, sp, flat) == doctest::Approx(0.0));
}

TEST_CASE("deterministic equal phase latencies give zero jitter") {
    // p = 1 and all mass on one unacked message: every phase clears at the
    // first heartbeat, always at the same offset
    auto d = UnackedDistribution::from_probs({0.0, 1.0});
    auto q = cycle_of({d, d});
    OffsetModel off;
    off.kind = OffsetCase::EqualPeriods;
    off.per_publish_tc_ms = {40.0, 40.0};
    auto sp = make(1, 80, 80, 1.0);
    SolverConfig cfg;
    CHECK(aggregate_latency(q, off, sp, cfg) == doctest::Approx(40.0));
    CHECK(jitter(q, off, sp, cfg) == doctest::Approx(0.0));
}

TEST_CASE("full pipeline reproduces the reference triples") {
    // r=50 h=50 m=1 p=0.95 -> 94.21 / 1.92 / 9.35
    auto res = analyze_scenario(make(1, 50, 50, 0.95), {});
    CHECK(res.metrics.mdr_pct == doctest::Approx(94.21).epsilon(2e-4));
    CHECK(res.metrics.avg_latency_ms == doctest::Approx(1.92).epsilon(0.01));
    CHECK(res.metrics.jitter_ms == doctest::Approx(9.35).epsilon(0.01));

    // r=50 h=200 m=0.008 p=0.95 -> latency 16.57 (row 61)
    auto row61 = analyze_scenario(make(0.008, 50, 200, 0.95), {});
    CHECK(row61.metrics.avg_latency_ms == doctest::Approx(16.57).epsilon(0.01));

    // r=200 h=200 m=10 p=0.75 -> 0.87 / 661.53 / 492.97 (row 270)
    auto row270 = analyze_scenario(make(10, 200, 200, 0.75), {});
    CHECK(row270.metrics.mdr_pct == doctest::Approx(0.87).epsilon(0.02));
    CHECK(row270.metrics.avg_latency_ms == doctest::Approx(661.53).epsilon(0.005));
    CHECK(row270.metrics.jitter_ms == doctest::Approx(492.97).epsilon(0.02));
}

TEST_CASE("rotating phases and offsets together leaves the metrics fixed") {
    auto sp = make(1, 50, 200, 0.85);
    SolverConfig cfg;
    auto q = solve_steady_state(sp, cfg);
    auto off = offset_model(sp, q);
    const double lat = aggregate_latency(q, off, sp, cfg);
    const double jit = jitter(q, off, sp, cfg);

    // the phase-mean-only variant can never exceed the second-moment jitter
    SolverConfig flat = cfg;
    flat.jitter_phase_means_only = true;
    CHECK(jitter(q, off, sp, flat) <= jit);
    for (int rot = 1; rot < q.period; ++rot) {
        SteadyStateCycle qr = q;
        OffsetModel offr = off;
        std::rotate(qr.dists.begin(), qr.dists.begin() + rot, qr.dists.end());
        std::rotate(offr.per_publish_tc_ms.begin(),
                    offr.per_publish_tc_ms.begin() + rot,
                    offr.per_publish_tc_ms.end());
        CHECK(aggregate_latency(qr, offr, sp, cfg) ==
              doctest::Approx(lat).epsilon(1e-12));
        CHECK(jitter(qr, offr, sp, cfg) == doctest::Approx(jit).epsilon(1e-12));
    }
}

TEST_CASE("lossless channel yields the degenerate triple") {
    for (double m : {0.5, 1.0, 5.0}) {
        auto res = analyze_scenario(make(m, 100, 50, 1.0), {});
        CHECK(res.metrics.mdr_pct == 100.0);
        CHECK(res.metrics.avg_latency_ms == 0.0);
        CHECK(res.metrics.jitter_ms == 0.0);
    }
}
