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

}  // namespace

TEST_CASE("period_R on the reference period pairs") {
    CHECK(period_R(50, 200) == 4);
    CHECK(period_R(100, 200) == 2);
    CHECK(period_R(200, 200) == 1);
    CHECK(period_R(50, 100) == 2);
    CHECK(period_R(200, 50) == 1);
    CHECK(period_R(0.3, 0.2) == 2);  // exercises the 0.1 ms grid
}

TEST_CASE("period_R rejects off-grid periods") {
    CHECK_THROWS_AS(period_R(50.0, 33.337), std::invalid_argument);
    CHECK_THROWS_AS(period_R(0.05, 50), std::invalid_argument);
}

TEST_CASE("build_timeline merges the two arithmetic sequences") {
    SolverConfig cfg;
    auto tl = build_timeline(make(1, 50, 200, 0.9), cfg, 400);
    REQUIRE(tl.events.size() == 12);  // 9 publishes + 3 heartbeats
    CHECK(tl.events[0].time_ms == 0);
    CHECK(tl.events[0].kind == TimelineEvent::Publish);
    CHECK(tl.events[1].time_ms == 0);
    CHECK(tl.events[1].kind == TimelineEvent::Heartbeat);
    CHECK(tl.events.back().time_ms == 400);
    CHECK(tl.events.back().kind == TimelineEvent::Heartbeat);

    auto equal = build_timeline(make(1, 50, 50, 0.9), cfg, 100);
    REQUIRE(equal.events.size() == 6);
    for (std::size_t i = 0; i < 6; i += 2) {
        CHECK(equal.events[i].kind == TimelineEvent::Publish);
        CHECK(equal.events[i + 1].kind == TimelineEvent::Heartbeat);
        CHECK(equal.events[i].time_ms == equal.events[i + 1].time_ms);
    }
}

TEST_CASE("build_timeline drifted mode inflates heartbeat spacing") {
    SolverConfig cfg;
    cfg.timeline_mode = TimelineMode::Drifted;
    auto tl = build_timeline(make(1, 100, 100, 0.9), cfg, 300);
    std::vector<double> hb;
    for (const auto& e : tl.events)
        if (e.kind == TimelineEvent::Heartbeat) hb.push_back(e.time_ms);
    REQUIRE(hb.size() == 3);  // 300.6 falls past the horizon
    CHECK(hb[0] == doctest::Approx(0.0));
    CHECK(hb[1] == doctest::Approx(100.2));
    CHECK(hb[2] == doctest::Approx(200.4));
}

TEST_CASE("cycle_distance is an L-infinity metric over phases") {
    auto d = UnackedDistribution::from_probs({0.6, 0.4});
    SteadyStateCycle a, b;
    a.dists = {d, d};
    b.dists = {d, d};
    a.period = b.period = 2;
    CHECK(cycle_distance(a, b) == 0.0);

    b.dists[1] = UnackedDistribution::from_probs({0.6 + 1e-3, 0.4 - 1e-3});
    CHECK(cycle_distance(a, b) == doctest::Approx(1e-3).epsilon(1e-9));

    SteadyStateCycle c;
    c.dists = {d};
    CHECK_THROWS_AS(cycle_distance(a, c), std::invalid_argument);
}

TEST_CASE("lossless channel collapses to the all-acked state") {
    for (double m : {0.008, 1.0, 10.0}) {
        for (double r : {50.0, 200.0}) {
            auto q = solve_steady_state(make(m, r, 100, 1.0), {});
            CHECK(q.converged);
            CHECK(q.cycles_used == 1);
            for (const auto& d : q.dists) CHECK(d[0] == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("steady state reproduces the reference zero-unacked levels") {
    // r=50, h=200, m=1, p=0.95: period 4, mean zero-bucket 0.8538
    auto q = solve_steady_state(make(1, 50, 200, 0.95), {});
    CHECK(q.period == 4);
    CHECK(q.converged);
    REQUIRE(q.dists.size() == 4);
    double mean = 0.0;
    for (const auto& d : q.dists) mean += d[0] / 4.0;
    CHECK(mean == doctest::Approx(0.8538).epsilon(1e-4));

    // r=h=50, m=1, p=0.75: single phase at 0.5410
    auto q2 = solve_steady_state(make(1, 50, 50, 0.75), {});
    REQUIRE(q2.dists.size() == 1);
    CHECK(q2.dists[0][0] == doctest::Approx(0.5410).epsilon(1e-3));
}

TEST_CASE("converged cycles are fixed points and normalized") {
    SolverConfig cfg;
    for (auto [m, r, h, p] : {std::tuple{1.0, 50.0, 200.0, 0.85},
                              std::tuple{3.0, 100.0, 50.0, 0.9},
                              std::tuple{0.5, 200.0, 100.0, 0.75}}) {
        auto sp = make(m, r, h, p);
        auto q = solve_steady_state(sp, cfg);
        REQUIRE(q.converged);
        for (const auto& d : q.dists)
            CHECK(d.sum() == doctest::Approx(1.0).epsilon(1e-9));

        // replay one more full cycle of events, starting just after the last
        // publish of the converged cycle (trailing heartbeats come first)
        const auto derived = derive_params(sp);
        RetransmitKernel kernel(derived.msgs_per_retx_packet, p);
        const double lcm_ms = std::lcm(static_cast<int>(r), static_cast<int>(h));
        auto tl = build_timeline(sp, cfg, lcm_ms - 1e-9);
        std::size_t last_pub = 0;
        for (std::size_t i = 0; i < tl.events.size(); ++i)
            if (tl.events[i].kind == TimelineEvent::Publish) last_pub = i;
        std::vector<TimelineEvent> order(tl.events.begin() + last_pub + 1,
                                         tl.events.end());
        order.insert(order.end(), tl.events.begin(),
                     tl.events.begin() + last_pub + 1);
        UnackedDistribution cur = q.dists.back();
        std::vector<UnackedDistribution> replay;
        for (const auto& ev : order) {
            if (ev.kind == TimelineEvent::Publish) {
                cur = pub_apply(cur, derived.packets_per_publish, p);
                replay.push_back(cur);
            } else {
                cur = hb_apply(cur, kernel);
            }
        }
        REQUIRE(replay.size() == q.dists.size());
        double dist = 0.0;
        for (std::size_t n = 0; n < replay.size(); ++n)
            for (std::size_t k = 0; k <= replay[n].k_max(); ++k)
                dist = std::max(dist, std::abs(replay[n][(std::int64_t)k] -
                                               q.dists[n][(std::int64_t)k]));
        CHECK(dist < 2.0 * cfg.epsilon);
    }
}

TEST_CASE("snapshot period detected by brute force matches period_R") {
    for (auto [r, h] : {std::pair{50.0, 100.0}, std::pair{50.0, 200.0},
                        std::pair{100.0, 200.0}, std::pair{200.0, 200.0},
                        std::pair{100.0, 50.0}}) {
        auto sp = make(1, r, h, 0.85);
        auto q = solve_steady_state(sp, {});
        REQUIRE(q.converged);
        const int R = q.period;
        CHECK(R == period_R(r, h));
        // within one converged cycle, no shorter rotation reproduces itself
        int detected = R;
        for (int cand = 1; cand < R; ++cand) {
            if (R % cand != 0) continue;
            double dist = 0.0;
            for (int n = 0; n < R; ++n) {
                const auto& a = q.dists[n];
                const auto& b = q.dists[(n + cand) % R];
                for (std::size_t k = 0; k <= a.k_max(); ++k)
                    dist = std::max(
                        dist, std::abs(a[(std::int64_t)k] - b[(std::int64_t)k]));
            }
            if (dist < 1e-7) {
                detected = cand;
                break;
            }
        }
        // equal periods give genuinely distinct phases except R = 1
        if (R > 1) CHECK(detected == R);
    }
}

TEST_CASE("unconverged solves are reported, not thrown") {
    SolverConfig cfg;
    cfg.max_cycles = 1;
    cfg.epsilon = 1e-15;
    auto q = solve_steady_state(make(3, 50, 50, 0.8), cfg);
    CHECK_FALSE(q.converged);
    CHECK(q.cycles_used == 1);
}

TEST_CASE("drifted timeline mode still converges near the nominal solution") {
    SolverConfig nominal, drifted;
    drifted.timeline_mode = TimelineMode::Drifted;
    drifted.epsilon = 1e-6;  // the drifted pattern is only nearly periodic
    auto qn = solve_steady_state(make(1, 50, 50, 0.9), nominal);
    auto qd = solve_steady_state(make(1, 50, 50, 0.9), drifted);
    REQUIRE(qn.converged);
    REQUIRE(qd.converged);
    CHECK(qd.dists[0][0] ==
          doctest::Approx(qn.dists[0][0]).epsilon(0.02));
}
