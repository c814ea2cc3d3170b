#include "etpc/batch.hpp"

#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace etpc {

namespace {

struct JobResult {
    std::vector<RunRecord> records;
};

RunRecord make_record(const std::string& path_name, const std::string& strategy,
                      std::size_t ic_index, const ErrorState& ic) {
    RunRecord rec;
    rec.path_name = path_name;
    rec.strategy = strategy;
    rec.ic_index = ic_index;
    rec.ic = ic;
    return rec;
}

nlohmann::json quartiles_json(const Quartiles& q) {
    return {{"q1", q.q1}, {"median", q.median}, {"q3", q.q3}, {"n", q.n}};
}

}  // namespace

BatchSummary run_batch(const SimConfig& config, std::vector<RunRecord>* records_out,
                       const BatchProgress& progress) {
    config.params.validate();
    if (config.paths.empty()) throw std::invalid_argument("batch config has no paths");

    const bool want_etc = config.strategy_enabled("etc");
    const bool want_etpc = config.strategy_enabled("etpc");
    const bool want_ttc1 = config.strategy_enabled("ttc1");
    const bool want_ttc2 = config.strategy_enabled("ttc2");
    if (!(want_etc || want_etpc)) {
        throw std::invalid_argument("batch needs at least one of etc/etpc enabled");
    }

    const std::vector<ErrorState> ics =
        sample_initial_conditions(config.n_initial_conditions, config.seed);

    // One shared reference cache per path; immutable across worker threads.
    std::vector<ReferenceTrajectory> refs;
    refs.reserve(config.paths.size());
    for (const auto& path : config.paths) {
        PathSpec spec = path;
        spec.duration = config.T_e;
        refs.emplace_back(spec, config.T_e + config.params.T + config.params.h,
                          config.params.h);
    }

    const std::size_t n_jobs = config.paths.size() * ics.size();
    std::vector<JobResult> results(n_jobs);

    const auto run_job = [&](std::size_t job) {
        const std::size_t path_index = job / ics.size();
        const std::size_t ic_index = job % ics.size();
        const ReferenceTrajectory& ref = refs[path_index];
        const std::string& path_name = ref.spec().name;

        Scenario scenario;
        scenario.path = ref.spec();
        scenario.params = config.params;
        scenario.initial_error = ics[ic_index];
        scenario.T_e = config.T_e;
        scenario.seed = config.seed;

        auto& out = results[job].records;

        const auto run_primary = [&](StrategyKind kind, const std::string& label,
                                     bool record, bool derive, const std::string& derived_label) {
            RunRecord rec = make_record(path_name, label, ic_index, ics[ic_index]);
            SimTrace trace;
            bool ok = true;
            try {
                trace = run(scenario, Strategy{kind, 0.0}, ref);
                rec.metrics = compute_metrics(trace, config.params.epsilon_sq);
            } catch (const std::exception& ex) {
                ok = false;
                rec.fault = true;
                rec.fault_message = ex.what();
            }
            if (record) out.push_back(rec);
            if (!derive) return;
            RunRecord ttc = make_record(path_name, derived_label, ic_index, ics[ic_index]);
            if (!ok) {
                ttc.fault = true;
                ttc.fault_message = "primary " + label + " run faulted";
            } else {
                try {
                    ttc.ttc_period = derive_ttc_period(trace);
                    const SimTrace ttc_trace =
                        run(scenario, Strategy{StrategyKind::kTtc, ttc.ttc_period}, ref);
                    ttc.metrics = compute_metrics(ttc_trace, config.params.epsilon_sq);
                } catch (const std::exception& ex) {
                    ttc.fault = true;
                    ttc.fault_message = ex.what();
                }
            }
            out.push_back(ttc);
        };

        if (want_etc || want_ttc1) {
            run_primary(StrategyKind::kEtc, "etc", want_etc, want_ttc1, "ttc1");
        }
        if (want_etpc || want_ttc2) {
            run_primary(StrategyKind::kEtpc, "etpc", want_etpc, want_ttc2, "ttc2");
        }
    };

    unsigned n_threads = config.threads;
    if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_jobs));

    std::atomic<std::size_t> completed{0};
    const auto run_and_count = [&](std::size_t job) {
        run_job(job);
        const std::size_t done = completed.fetch_add(1) + 1;
        if (progress) progress(done, n_jobs);
    };

    if (n_threads <= 1) {
        for (std::size_t job = 0; job < n_jobs; ++job) run_and_count(job);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t job = next.fetch_add(1); job < n_jobs;
                     job = next.fetch_add(1)) {
                    run_and_count(job);
                }
            });
        }
        for (auto& worker : workers) worker.join();
    }

    // Flatten in job order so the aggregate is independent of scheduling.
    std::vector<RunRecord> records;
    records.reserve(n_jobs * 4);
    for (auto& result : results) {
        for (auto& rec : result.records) records.push_back(std::move(rec));
    }

    nlohmann::json summary;
    summary["schema"] = "etpc-batch-summary-v1";
    summary["config"] = config.to_json();

    nlohmann::json paths_json;
    for (const auto& ref : refs) {
        const std::string& path_name = ref.spec().name;
        nlohmann::json strategies_json;
        double median_nt_etc = std::numeric_limits<double>::quiet_NaN();
        double median_ns_etc = std::numeric_limits<double>::quiet_NaN();
        double median_nt_etpc = std::numeric_limits<double>::quiet_NaN();
        double median_ns_etpc = std::numeric_limits<double>::quiet_NaN();

        for (const std::string& strategy : {std::string("etc"), std::string("etpc"),
                                            std::string("ttc1"), std::string("ttc2")}) {
            std::vector<double> nt, ns, tc, eps1, tail, events, payload;
            std::size_t faults = 0;
            std::size_t non_converged = 0;
            std::size_t runs = 0;
            for (const auto& rec : records) {
                if (rec.path_name != path_name || rec.strategy != strategy) continue;
                ++runs;
                if (rec.fault) {
                    ++faults;
                    continue;
                }
                nt.push_back(rec.metrics.N_t);
                ns.push_back(rec.metrics.N_s);
                events.push_back(rec.metrics.total_events);
                payload.push_back(static_cast<double>(rec.metrics.payload_total));
                tail.push_back(rec.metrics.v_tail_max);
                if (rec.metrics.converged) {
                    tc.push_back(rec.metrics.T_c);
                    eps1.push_back(rec.metrics.eps1_sq);
                } else {
                    ++non_converged;
                }
            }
            if (runs == 0) continue;
            nlohmann::json sj;
            sj["runs"] = runs;
            sj["faults"] = faults;
            sj["non_converged"] = non_converged;
            sj["N_t"] = quartiles_json(quartiles_of(nt));
            sj["N_s"] = quartiles_json(quartiles_of(ns));
            sj["T_c"] = quartiles_json(quartiles_of(tc));
            sj["eps1_sq"] = quartiles_json(quartiles_of(eps1));
            sj["v_tail_max"] = quartiles_json(quartiles_of(tail));
            sj["events_total"] = quartiles_json(quartiles_of(events));
            sj["payload_bytes"] = quartiles_json(quartiles_of(payload));
            strategies_json[strategy] = sj;

            const double median_nt = quantile(nt, 0.5);
            const double median_ns = quantile(ns, 0.5);
            if (strategy == "etc") {
                median_nt_etc = median_nt;
                median_ns_etc = median_ns;
            } else if (strategy == "etpc") {
                median_nt_etpc = median_nt;
                median_ns_etpc = median_ns;
            }
        }

        nlohmann::json path_json;
        path_json["strategies"] = strategies_json;
        if (std::isfinite(median_nt_etc) && std::isfinite(median_nt_etpc)) {
            nlohmann::json red;
            red["N_t_pct"] = median_nt_etc > 0.0
                                 ? 100.0 * (median_nt_etc - median_nt_etpc) / median_nt_etc
                                 : 0.0;
            red["N_s_pct"] = median_ns_etc > 0.0
                                 ? 100.0 * (median_ns_etc - median_ns_etpc) / median_ns_etc
                                 : 0.0;
            path_json["etpc_reduction_vs_etc"] = red;
        }
        paths_json[path_name] = path_json;
    }
    summary["paths"] = paths_json;

    if (records_out) *records_out = std::move(records);
    return BatchSummary{std::move(summary)};
}

void write_runs_csv(const std::vector<RunRecord>& records, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(f, "path,strategy,ic_index,x_e0,y_e0,theta_e0,ttc_period,fault,"
                    "converged,T_c,N_t,N_s,eps1_sq,v_tail_max,total_events,"
                    "min_gap,mean_gap,payload_total\n");
    for (const auto& rec : records) {
        std::fprintf(f, "%s,%s,%zu,%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g,%d,%d,%.17g,"
                        "%.17g,%d,%.17g,%.17g,%lld\n",
                     rec.path_name.c_str(), rec.strategy.c_str(), rec.ic_index,
                     rec.ic.x_e, rec.ic.y_e, rec.ic.theta_e, rec.ttc_period,
                     rec.fault ? 1 : 0, rec.metrics.converged ? 1 : 0, rec.metrics.T_c,
                     rec.metrics.N_t, rec.metrics.N_s, rec.metrics.eps1_sq,
                     rec.metrics.v_tail_max, rec.metrics.total_events,
                     rec.metrics.min_gap, rec.metrics.mean_gap,
                     static_cast<long long>(rec.metrics.payload_total));
    }
    std::fclose(f);
}

}  // namespace etpc
