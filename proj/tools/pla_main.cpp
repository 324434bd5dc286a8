// Scenario runner: analytic engine, simulator, grid sweeps and validation
// against the bundled reference table.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pla/metrics.hpp"
#include "pla/reference.hpp"
#include "pla/scenario.hpp"
#include "pla/simulator.hpp"
#include "pla/solver.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitThreshold = 1;
constexpr int kExitUsage = 2;

// Acceptance thresholds for validate --mode analytic.
struct Thresholds {
    double mdr_tight = 0.10, mdr_loose = 0.50;        // absolute points
    double lat_tight = 1.0, lat_loose = 3.0;          // percent
    double lat_small_abs_tight = 0.05, lat_small_abs_loose = 0.15;  // ms, when reference < 5 ms
    double jit_tight = 2.0, jit_loose = 6.0;          // percent
    double mdr_tight_quota = 0.90, lat_tight_quota = 0.90, jit_tight_quota = 0.85;
};

struct ScenarioJob {
    pla::ScenarioParams sp;
    std::uint64_t index = 0;
};

void run_parallel(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& work) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int n_threads = std::min<std::size_t>(jobs, count);
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                work(i);
            }
        });
    for (auto& th : pool) th.join();
}

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

void apply_solver_json(const json& j, pla::SolverConfig& cfg) {
    if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
    if (j.contains("max_cycles")) cfg.max_cycles = j["max_cycles"].get<int>();
    if (j.contains("kmax_floor")) cfg.kmax_floor = j["kmax_floor"].get<int>();
    if (j.contains("tail_tol")) cfg.tail_tol = j["tail_tol"].get<double>();
    if (j.contains("series_tail_tol"))
        cfg.series_tail_tol = j["series_tail_tol"].get<double>();
    if (j.contains("series_max_v")) cfg.series_max_v = j["series_max_v"].get<int>();
    if (j.contains("timeline_mode"))
        cfg.timeline_mode = j["timeline_mode"].get<std::string>() == "drifted"
                                ? pla::TimelineMode::Drifted
                                : pla::TimelineMode::Nominal;
}

int check_scenario(const pla::ScenarioParams& sp) {
    const auto rep = pla::validate_scenario(sp);
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    if (!rep.ok()) {
        for (const auto& e : rep.errors) std::cerr << "error: " << e << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

json analysis_json(const pla::ScenarioParams& sp, const pla::AnalysisResult& res) {
    return json{{"m", sp.m},
                {"r", sp.r_ms},
                {"h", sp.h_ms},
                {"p", sp.p},
                {"mdr_pct", res.metrics.mdr_pct},
                {"avg_latency_ms", res.metrics.avg_latency_ms},
                {"jitter_ms", res.metrics.jitter_ms},
                {"period", res.period},
                {"cycles_used", res.cycles_used},
                {"converged", res.converged},
                {"final_distance", res.final_distance},
                {"max_top_bucket", res.max_top_bucket},
                {"tail_mass", res.tail_mass},
                {"series_residual", res.worst_series_residual},
                {"series_truncated_early", res.series_truncated_early}};
}

const char* kAnalyzeCsvHeader =
    "m,r,h,p,mdr_pct,avg_latency_ms,jitter_ms,period,cycles_used,converged";

std::string analysis_csv_row(const pla::ScenarioParams& sp,
                             const pla::AnalysisResult& res) {
    std::ostringstream os;
    os << sp.m << ',' << sp.r_ms << ',' << sp.h_ms << ',' << sp.p << ','
       << fmt(res.metrics.mdr_pct) << ',' << fmt(res.metrics.avg_latency_ms)
       << ',' << fmt(res.metrics.jitter_ms) << ',' << res.period << ','
       << res.cycles_used << ',' << (res.converged ? 1 : 0);
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reliability and latency engine for periodic "
                 "publish/subscribe over lossy links"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // keep -h free for --h

    pla::ScenarioParams sp;
    pla::SolverConfig cfg;
    std::string out_path, format = "text", file_path;
    int jobs = 1;

    auto add_scenario_flags = [&](CLI::App* cmd) {
        cmd->set_help_flag("--help", "print help");
        cmd->add_option("--m", sp.m, "message-to-MTU ratio");
        cmd->add_option("--r", sp.r_ms, "publish period, ms");
        cmd->add_option("--h", sp.h_ms, "heartbeat period, ms");
        cmd->add_option("--p", sp.p, "packet delivery probability");
        cmd->add_option("--mtu", sp.mtu_bytes, "MTU in bytes (informational)");
        cmd->add_option("--hb-extra", sp.hb_extra_ms,
                        "heartbeat period inflation, ms");
    };
    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--epsilon", cfg.epsilon, "convergence tolerance");
        cmd->add_option("--kmax", cfg.kmax_floor, "initial truncation bound");
        cmd->add_option("--max-cycles", cfg.max_cycles, "cycle cap");
        std::string mode;
        cmd->add_option_function<std::string>(
            "--timeline",
            [&cfg](const std::string& v) {
                cfg.timeline_mode = v == "drifted" ? pla::TimelineMode::Drifted
                                                   : pla::TimelineMode::Nominal;
            },
            "nominal|drifted heartbeat timeline");
    };

    // ---- analyze
    auto* analyze = app.add_subcommand("analyze", "analytic metrics for scenarios");
    add_scenario_flags(analyze);
    add_solver_flags(analyze);
    analyze->add_option("--file", file_path, "scenario JSON file");
    analyze->add_option("--out", out_path, "output file (default stdout)");
    analyze->add_option("--format", format, "text|csv|json");

    // ---- simulate
    pla::SimConfig sim_cfg;
    std::string trace_path;
    auto* simulate = app.add_subcommand("simulate", "seeded discrete-event run");
    add_scenario_flags(simulate);
    simulate->add_option("--n", sim_cfg.n_messages, "messages to publish");
    simulate->add_option("--seed", sim_cfg.seed, "RNG seed");
    simulate->add_option("--index", sim_cfg.scenario_index,
                         "scenario index for stream splitting");
    simulate->add_flag("!--no-drain", sim_cfg.drain,
                       "stop at the last publish instead of draining");
    simulate->add_option("--trace", trace_path, "write per-message delay trace");
    simulate->add_option("--out", out_path, "output file (default stdout)");
    simulate->add_option("--format", format, "text|csv|json");

    // ---- sweep
    std::string grid_path, plot_path, sweep_mode = "analytic";
    auto* sweep = app.add_subcommand("sweep", "Cartesian scenario sweep");
    sweep->add_option("--grid", grid_path, "grid JSON file")->required();
    sweep->add_option("--out", out_path, "output CSV (default stdout)");
    sweep->add_option("--plot-data", plot_path,
                      "long-format (m, h, metric) file for surface plots");
    sweep->add_option("--mode", sweep_mode, "analytic|simulate|both");
    sweep->add_option("--jobs", jobs, "parallel scenario evaluations");
    sweep->add_option("--n", sim_cfg.n_messages, "messages per simulation");
    sweep->add_option("--seed", sim_cfg.seed, "base RNG seed");

    // ---- validate
    std::string data_path, val_mode = "analytic";
    int val_seeds = 1;
    auto* validate = app.add_subcommand(
        "validate", "compare engine output against the bundled reference");
    validate->add_option("--data", data_path, "reference CSV path");
    validate->add_option("--mode", val_mode, "analytic|simulate|both");
    validate->add_option("--out", out_path, "per-row comparison CSV");
    validate->add_option("--jobs", jobs, "parallel scenario evaluations");
    validate->add_option("--seeds", val_seeds, "seeds per row in simulate mode");
    validate->add_option("--n", sim_cfg.n_messages, "messages per simulation");
    validate->add_option("--seed", sim_cfg.seed, "base RNG seed");

    // ---- report
    auto* report = app.add_subcommand(
        "report", "reference-table summary and self-consistency check");
    report->add_option("--data", data_path, "reference CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*analyze) {
            std::vector<pla::ScenarioParams> scenarios;
            if (!file_path.empty()) {
                std::ifstream in(file_path);
                if (!in) throw std::runtime_error("cannot open " + file_path);
                json j = json::parse(in);
                if (j.contains("solver")) apply_solver_json(j["solver"], cfg);
                auto parse_sp = [&](const json& js) {
                    pla::ScenarioParams s = sp;
                    s.m = js.at("m").get<double>();
                    s.r_ms = js.at("r").get<double>();
                    s.h_ms = js.at("h").get<double>();
                    s.p = js.at("p").get<double>();
                    return s;
                };
                if (j.contains("scenario")) {
                    scenarios.push_back(parse_sp(j["scenario"]));
                } else if (j.contains("scenarios")) {
                    for (const auto& js : j["scenarios"]) scenarios.push_back(parse_sp(js));
                } else {
                    throw std::runtime_error("no 'scenario' or 'scenarios' key");
                }
            } else {
                scenarios.push_back(sp);
            }
            for (const auto& s : scenarios)
                if (int rc = check_scenario(s); rc != kExitOk) return rc;

            std::ofstream file;
            auto& os = open_out(file, out_path);
            json jout = json::array();
            if (format == "csv") os << kAnalyzeCsvHeader << "\n";
            for (const auto& s : scenarios) {
                const auto res = pla::analyze_scenario(s, cfg);
                if (format == "json") {
                    jout.push_back(analysis_json(s, res));
                } else if (format == "csv") {
                    os << analysis_csv_row(s, res) << "\n";
                } else {
                    os << "scenario m=" << s.m << " r=" << s.r_ms
                       << " h=" << s.h_ms << " p=" << s.p << "\n"
                       << "  MDR      " << fmt(res.metrics.mdr_pct, 2) << " %\n"
                       << "  latency  " << fmt(res.metrics.avg_latency_ms, 2)
                       << " ms\n"
                       << "  jitter   " << fmt(res.metrics.jitter_ms, 2) << " ms\n"
                       << "  period R=" << res.period << " cycles="
                       << res.cycles_used << " converged="
                       << (res.converged ? "yes" : "no")
                       << " final_distance=" << res.final_distance
                       << " top_bucket=" << res.max_top_bucket
                       << " tail_mass=" << res.tail_mass
                       << " series_residual=" << res.worst_series_residual
                       << (res.series_truncated_early
                               ? " [series truncated early]"
                               : "")
                       << "\n";
                }
            }
            if (format == "json") os << jout.dump(2) << "\n";
            return kExitOk;
        }

        if (*simulate) {
            if (int rc = check_scenario(sp); rc != kExitOk) return rc;
            const auto res = pla::run_sim(sp, sim_cfg);
            if (!trace_path.empty()) {
                std::ofstream tr(trace_path);
                if (!tr) throw std::runtime_error("cannot write " + trace_path);
                tr << "# delays_ms; m=" << sp.m << " r=" << sp.r_ms
                   << " h=" << sp.h_ms << " p=" << sp.p
                   << " n=" << sim_cfg.n_messages << " seed=" << sim_cfg.seed
                   << " index=" << sim_cfg.scenario_index << "\n";
                for (double d : res.delays_ms) tr << d << "\n";
            }
            std::ofstream file;
            auto& os = open_out(file, out_path);
            if (format == "json") {
                os << json{{"m", sp.m},
                           {"r", sp.r_ms},
                           {"h", sp.h_ms},
                           {"p", sp.p},
                           {"n", sim_cfg.n_messages},
                           {"seed", sim_cfg.seed},
                           {"mdr_pct", res.metrics.mdr_pct},
                           {"avg_latency_ms", res.metrics.avg_latency_ms},
                           {"jitter_ms", res.metrics.jitter_ms},
                           {"undelivered", res.undelivered}}
                          .dump(2)
                   << "\n";
            } else if (format == "csv") {
                os << "m,r,h,p,n,seed,mdr_pct,avg_latency_ms,jitter_ms,undelivered\n"
                   << sp.m << ',' << sp.r_ms << ',' << sp.h_ms << ',' << sp.p
                   << ',' << sim_cfg.n_messages << ',' << sim_cfg.seed << ','
                   << fmt(res.metrics.mdr_pct) << ','
                   << fmt(res.metrics.avg_latency_ms) << ','
                   << fmt(res.metrics.jitter_ms) << ',' << res.undelivered
                   << "\n";
            } else {
                os << "simulated " << sim_cfg.n_messages << " messages (seed "
                   << sim_cfg.seed << ")\n"
                   << "  MDR      " << fmt(res.metrics.mdr_pct, 2) << " %\n"
                   << "  latency  " << fmt(res.metrics.avg_latency_ms, 2) << " ms\n"
                   << "  jitter   " << fmt(res.metrics.jitter_ms, 2) << " ms\n"
                   << "  undelivered " << res.undelivered << "\n";
            }
            return kExitOk;
        }

        if (*sweep) {
            std::ifstream in(grid_path);
            if (!in) throw std::runtime_error("cannot open " + grid_path);
            json j = json::parse(in);
            if (j.contains("solver")) apply_solver_json(j["solver"], cfg);
            if (!j.contains("grid")) throw std::runtime_error("no 'grid' key");
            const auto& g = j["grid"];
            auto axis = [&](const char* name, double fallback) {
                std::vector<double> v;
                if (g.contains(name))
                    for (const auto& x : g[name]) v.push_back(x.get<double>());
                if (v.empty()) v.push_back(fallback);
                return v;
            };
            const auto ms = axis("m", sp.m);
            const auto rs = axis("r", sp.r_ms);
            const auto hs = axis("h", sp.h_ms);
            const auto ps = axis("p", sp.p);

            std::vector<ScenarioJob> jobs_list;
            for (double rv : rs)
                for (double hv : hs)
                    for (double mv : ms)
                        for (double pv : ps) {
                            pla::ScenarioParams s = sp;
                            s.m = mv; s.r_ms = rv; s.h_ms = hv; s.p = pv;
                            jobs_list.push_back({s, jobs_list.size()});
                        }
            if (jobs_list.empty()) throw std::runtime_error("empty grid");
            for (const auto& jb : jobs_list)
                if (int rc = check_scenario(jb.sp); rc != kExitOk) return rc;

            const bool do_ana = sweep_mode != "simulate";
            const bool do_sim = sweep_mode != "analytic";
            std::vector<pla::AnalysisResult> ana(jobs_list.size());
            std::vector<pla::LatencyMetrics> sim(jobs_list.size());
            run_parallel(jobs_list.size(), jobs, [&](std::size_t i) {
                if (do_ana) ana[i] = pla::analyze_scenario(jobs_list[i].sp, cfg);
                if (do_sim) {
                    pla::SimConfig c = sim_cfg;
                    c.scenario_index = jobs_list[i].index;
                    sim[i] = pla::run_sim(jobs_list[i].sp, c).metrics;
                }
            });

            std::ofstream file;
            auto& os = open_out(file, out_path);
            os << "m,r,h,p";
            if (do_ana) os << ",mdr_pct,avg_latency_ms,jitter_ms,period,cycles_used";
            if (do_sim) os << ",sim_mdr_pct,sim_avg_latency_ms,sim_jitter_ms";
            os << "\n";
            for (std::size_t i = 0; i < jobs_list.size(); ++i) {
                const auto& s = jobs_list[i].sp;
                os << s.m << ',' << s.r_ms << ',' << s.h_ms << ',' << s.p;
                if (do_ana)
                    os << ',' << fmt(ana[i].metrics.mdr_pct) << ','
                       << fmt(ana[i].metrics.avg_latency_ms) << ','
                       << fmt(ana[i].metrics.jitter_ms) << ',' << ana[i].period
                       << ',' << ana[i].cycles_used;
                if (do_sim)
                    os << ',' << fmt(sim[i].mdr_pct) << ','
                       << fmt(sim[i].avg_latency_ms) << ','
                       << fmt(sim[i].jitter_ms);
                os << "\n";
            }
            if (!plot_path.empty()) {
                std::ofstream pf(plot_path);
                if (!pf) throw std::runtime_error("cannot write " + plot_path);
                pf << "m,h,metric,value\n";
                for (std::size_t i = 0; i < jobs_list.size(); ++i) {
                    const auto& s = jobs_list[i].sp;
                    const auto& mme = do_ana ? ana[i].metrics : sim[i];
                    pf << s.m << ',' << s.h_ms << ",mdr," << fmt(mme.mdr_pct) << "\n"
                       << s.m << ',' << s.h_ms << ",latency,"
                       << fmt(mme.avg_latency_ms) << "\n"
                       << s.m << ',' << s.h_ms << ",jitter," << fmt(mme.jitter_ms)
                       << "\n";
                }
            }
            return kExitOk;
        }

        if (*validate || *report) {
            const auto path = data_path.empty() ? pla::default_reference_path()
                                                : std::filesystem::path(data_path);
            const auto rows = pla::load_reference(path);

            if (*report) {
                const auto s = pla::summarize_errors(rows);
                int bad = 0;
                for (const auto& r : rows)
                    if (std::abs(std::abs(r.mdr_a - r.mdr_e) - r.mdr_err) >
                        0.01 + 1e-9)
                        ++bad;
                std::cout << "reference rows: " << rows.size() << "\n"
                          << "mean error  MDR " << fmt(s.mdr_mean, 2) << " pts,  "
                          << "latency " << fmt(s.lat_mean, 2) << " %,  jitter "
                          << fmt(s.jit_mean, 2) << " %\n"
                          << "error std   MDR " << fmt(s.mdr_std, 2) << " pts,  "
                          << "latency " << fmt(s.lat_std, 2) << " %,  jitter "
                          << fmt(s.jit_std, 2) << " %\n"
                          << "rows with inconsistent stored MDR error: " << bad
                          << "\n";
                return bad == 0 ? kExitOk : kExitThreshold;
            }

            const bool do_ana = val_mode != "simulate";
            const bool do_sim = val_mode != "analytic";
            struct RowResult {
                pla::AnalysisResult ana;
                pla::LatencyMetrics sim;
            };
            std::vector<RowResult> res(rows.size());
            run_parallel(rows.size(), jobs, [&](std::size_t i) {
                pla::ScenarioParams s;
                s.m = rows[i].m; s.r_ms = rows[i].r_ms; s.h_ms = rows[i].h_ms;
                s.p = rows[i].p;
                if (do_ana) res[i].ana = pla::analyze_scenario(s, cfg);
                if (do_sim) {
                    double mdr = 0, lat = 0, jit = 0;
                    for (int sd = 0; sd < val_seeds; ++sd) {
                        pla::SimConfig c = sim_cfg;
                        c.seed = sim_cfg.seed + sd;
                        c.scenario_index = rows[i].idx;
                        const auto m = pla::run_sim(s, c).metrics;
                        mdr += m.mdr_pct; lat += m.avg_latency_ms; jit += m.jitter_ms;
                    }
                    res[i].sim = {mdr / val_seeds, lat / val_seeds, jit / val_seeds};
                }
            });

            std::ofstream file;
            std::ostream* csv = nullptr;
            if (!out_path.empty()) {
                csv = &open_out(file, out_path);
                *csv << "idx,r,h,m,p,mdr_a,mdr_e,mdr_err,lat_a,lat_e,lat_err_pct,"
                        "jit_a,jit_e,jit_err_pct";
                if (do_ana) *csv << ",mdr_ours,lat_ours,jit_ours,d_mdr,d_lat_pct,d_jit_pct";
                if (do_sim) *csv << ",mdr_sim,lat_sim,jit_sim";
                *csv << "\n";
            }

            Thresholds th;
            int mdr_tight = 0, lat_tight = 0, jit_tight = 0;
            std::vector<std::string> failures;
            int sim_ci_failures = 0;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto& r = rows[i];
                double d_mdr = 0, d_lat_pct = 0, d_jit_pct = 0;
                if (do_ana) {
                    const auto& m = res[i].ana.metrics;
                    d_mdr = std::abs(m.mdr_pct - r.mdr_a);
                    const double d_lat_abs = std::abs(m.avg_latency_ms - r.lat_a);
                    d_lat_pct = r.lat_a > 0 ? 100.0 * d_lat_abs / r.lat_a : 0.0;
                    d_jit_pct = r.jit_a > 0
                                    ? 100.0 * std::abs(m.jitter_ms - r.jit_a) / r.jit_a
                                    : 0.0;
                    const bool small_lat = r.lat_a < 5.0;
                    const bool lat_ok_tight =
                        d_lat_pct <= th.lat_tight ||
                        (small_lat && d_lat_abs <= th.lat_small_abs_tight);
                    const bool lat_ok_loose =
                        d_lat_pct <= th.lat_loose ||
                        (small_lat && d_lat_abs <= th.lat_small_abs_loose);
                    if (d_mdr <= th.mdr_tight) ++mdr_tight;
                    if (lat_ok_tight) ++lat_tight;
                    if (d_jit_pct <= th.jit_tight) ++jit_tight;
                    if (d_mdr > th.mdr_loose)
                        failures.push_back("row " + std::to_string(r.idx) +
                                           ": MDR off by " + fmt(d_mdr, 3));
                    if (!lat_ok_loose)
                        failures.push_back("row " + std::to_string(r.idx) +
                                           ": latency off by " + fmt(d_lat_pct, 2) + "%");
                    if (d_jit_pct > th.jit_loose)
                        failures.push_back("row " + std::to_string(r.idx) +
                                           ": jitter off by " + fmt(d_jit_pct, 2) + "%");
                }
                if (do_sim) {
                    const double q = r.mdr_e / 100.0;
                    const double se =
                        100.0 * std::sqrt(std::max(q * (1.0 - q), 1e-6) /
                                          (static_cast<double>(sim_cfg.n_messages) *
                                           val_seeds));
                    if (std::abs(res[i].sim.mdr_pct - r.mdr_e) > 3.0 * se + 1.5)
                        ++sim_ci_failures;
                }
                if (csv) {
                    *csv << r.idx << ',' << r.r_ms << ',' << r.h_ms << ',' << r.m
                         << ',' << r.p << ',' << r.mdr_a << ',' << r.mdr_e << ','
                         << r.mdr_err << ',' << r.lat_a << ',' << r.lat_e << ','
                         << r.lat_err_pct << ',' << r.jit_a << ',' << r.jit_e
                         << ',' << r.jit_err_pct;
                    if (do_ana) {
                        const auto& m = res[i].ana.metrics;
                        *csv << ',' << fmt(m.mdr_pct) << ','
                             << fmt(m.avg_latency_ms) << ',' << fmt(m.jitter_ms)
                             << ',' << fmt(d_mdr) << ',' << fmt(d_lat_pct) << ','
                             << fmt(d_jit_pct);
                    }
                    if (do_sim)
                        *csv << ',' << fmt(res[i].sim.mdr_pct) << ','
                             << fmt(res[i].sim.avg_latency_ms) << ','
                             << fmt(res[i].sim.jitter_ms);
                    *csv << "\n";
                }
            }

            bool ok = true;
            const double n = static_cast<double>(rows.size());
            if (do_ana) {
                const double f_mdr = mdr_tight / n, f_lat = lat_tight / n,
                             f_jit = jit_tight / n;
                std::cout << "analytic vs reference analytical columns (" << rows.size()
                          << " rows)\n"
                          << "  MDR     within " << th.mdr_tight << " pts on "
                          << fmt(100 * f_mdr, 1) << "% of rows (need >= "
                          << 100 * th.mdr_tight_quota << "%)\n"
                          << "  latency within tight bound on " << fmt(100 * f_lat, 1)
                          << "% of rows (need >= " << 100 * th.lat_tight_quota << "%)\n"
                          << "  jitter  within " << th.jit_tight << "% on "
                          << fmt(100 * f_jit, 1) << "% of rows (need >= "
                          << 100 * th.jit_tight_quota << "%)\n";
                for (const auto& fmsg : failures) std::cout << "  FAIL " << fmsg << "\n";
                ok = ok && failures.empty() && f_mdr >= th.mdr_tight_quota &&
                     f_lat >= th.lat_tight_quota && f_jit >= th.jit_tight_quota;
            }
            if (do_sim) {
                std::cout << "simulated vs reference experimental columns: "
                          << sim_ci_failures << " rows outside 3-sigma+1.5pt MDR band\n";
                ok = ok && sim_ci_failures <= static_cast<int>(0.1 * n);
            }
            std::cout << (ok ? "VALIDATE PASS" : "VALIDATE FAIL") << "\n";
            return ok ? kExitOk : kExitThreshold;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
