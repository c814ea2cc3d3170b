#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "etpc/batch.hpp"
#include "etpc/config.hpp"
#include "etpc/metrics.hpp"
#include "etpc/simulation.hpp"

namespace fs = std::filesystem;

namespace {

etpc::StrategyKind parse_strategy(const std::string& name) {
    if (name == "etpc") return etpc::StrategyKind::kEtpc;
    if (name == "etc") return etpc::StrategyKind::kEtc;
    if (name == "ttc") return etpc::StrategyKind::kTtc;
    throw CLI::ValidationError("strategy must be one of etpc|etc|ttc");
}

nlohmann::json metrics_json(const etpc::RunMetrics& m) {
    nlohmann::json j;
    j["converged"] = m.converged;
    j["T_c"] = m.T_c;
    j["N_t"] = m.N_t;
    j["N_s"] = m.N_s;
    j["eps1_sq"] = m.eps1_sq;
    j["v_tail_max"] = m.v_tail_max;
    j["total_events"] = m.total_events;
    j["min_inter_event"] = m.min_gap;
    j["mean_inter_event"] = m.mean_gap;
    j["payload_total_bytes"] = m.payload_total;
    return j;
}

// Robot pose recovered from the tracking error and the reference pose
// (inverse of the error frame transform).
etpc::Pose robot_pose(const etpc::ErrorState& X, const etpc::Pose& ref) {
    const double theta = ref.theta - X.theta_e;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {ref.x - (c * X.x_e - s * X.y_e), ref.y - (s * X.x_e + c * X.y_e), theta};
}

void emit_plot_data(const etpc::SimTrace& trace, const etpc::ReferenceTrajectory& ref,
                    const fs::path& dir, const std::string& prefix = "plot") {
    {
        std::ofstream out(dir / (prefix + "_v.csv"));
        out << "t,V\n";
        for (std::size_t i = 0; i < trace.t.size(); ++i) {
            out << trace.t[i] << ',' << trace.V[i] << '\n';
        }
    }
    {
        std::ofstream out(dir / (prefix + "_error.csv"));
        out << "t,x_e,y_e,theta_e\n";
        for (std::size_t i = 0; i < trace.t.size(); ++i) {
            out << trace.t[i] << ',' << trace.x_e[i] << ',' << trace.y_e[i] << ','
                << trace.theta_e[i] << '\n';
        }
    }
    {
        std::ofstream out(dir / (prefix + "_path.csv"));
        out << "t,x_ref,y_ref,x_robot,y_robot\n";
        for (std::size_t i = 0; i < trace.t.size(); ++i) {
            const etpc::RefSample r = ref.sample(trace.t[i]);
            const etpc::Pose robot = robot_pose(
                {trace.x_e[i], trace.y_e[i], trace.theta_e[i]}, r.pose);
            out << trace.t[i] << ',' << r.pose.x << ',' << r.pose.y << ',' << robot.x
                << ',' << robot.y << '\n';
        }
    }
    {
        std::ofstream out(dir / (prefix + "_events.csv"));
        out << "k,t_k\n";
        for (std::size_t k = 0; k < trace.events.size(); ++k) {
            out << k << ',' << trace.events[k].t << '\n';
        }
    }
}

// One showcase run per (path, strategy) on the first sampled initial
// condition, written under <out>/plots.
void emit_batch_plot_data(const etpc::SimConfig& cfg, const fs::path& out_dir) {
    const fs::path dir = out_dir / "plots";
    fs::create_directories(dir);
    const etpc::ErrorState ic = etpc::sample_initial_conditions(1, cfg.seed).front();
    for (const auto& path : cfg.paths) {
        etpc::PathSpec spec = path;
        spec.duration = cfg.T_e;
        const etpc::ReferenceTrajectory ref(spec, cfg.T_e + cfg.params.T + cfg.params.h,
                                            cfg.params.h);
        etpc::Scenario sc;
        sc.path = spec;
        sc.params = cfg.params;
        sc.initial_error = ic;
        sc.T_e = cfg.T_e;
        sc.seed = cfg.seed;
        for (auto kind : {etpc::StrategyKind::kEtc, etpc::StrategyKind::kEtpc}) {
            const std::string label = etpc::strategy_name(kind);
            try {
                const etpc::SimTrace trace = etpc::run(sc, etpc::Strategy{kind, 0.0}, ref);
                emit_plot_data(trace, ref, dir, spec.name + "_" + label);
            } catch (const std::exception& ex) {
                std::cerr << "plot run " << spec.name << "/" << label
                          << " failed: " << ex.what() << '\n';
            }
        }
    }
}

int cmd_simulate(const std::string& config_file, const std::string& strategy_name,
                 const std::string& out_dir, const std::string& path_name,
                 const std::string& ic_text, double ttc_period_override,
                 bool has_seed, std::uint64_t seed, bool plot_data) {
    etpc::SimConfig cfg = config_file.empty() ? etpc::SimConfig::defaults()
                                              : etpc::SimConfig::load(config_file);
    if (has_seed) cfg.seed = seed;

    const etpc::PathSpec* path = path_name.empty() ? &cfg.paths.front()
                                                   : cfg.find_path(path_name);
    if (!path) {
        std::cerr << "unknown path '" << path_name << "'; config defines:";
        for (const auto& p : cfg.paths) std::cerr << ' ' << p.name;
        std::cerr << '\n';
        return 1;
    }

    etpc::Scenario scenario;
    scenario.path = *path;
    scenario.path.duration = cfg.T_e;
    scenario.params = cfg.params;
    scenario.T_e = cfg.T_e;
    scenario.seed = cfg.seed;
    if (ic_text.empty()) {
        scenario.initial_error = etpc::sample_initial_conditions(1, cfg.seed).front();
    } else {
        etpc::ErrorState X;
        if (std::sscanf(ic_text.c_str(), "%lf,%lf,%lf", &X.x_e, &X.y_e, &X.theta_e) != 3) {
            std::cerr << "--ic expects \"x_e,y_e,theta_e\"\n";
            return 1;
        }
        scenario.initial_error = X;
    }

    etpc::Strategy strategy{parse_strategy(strategy_name), 0.0};
    if (strategy.kind == etpc::StrategyKind::kTtc) {
        strategy.ttc_period = ttc_period_override > 0.0 ? ttc_period_override
                                                        : cfg.ttc_period;
    }

    const etpc::ReferenceTrajectory ref(scenario.path,
                                        cfg.T_e + cfg.params.T + cfg.params.h,
                                        cfg.params.h);
    const etpc::SimTrace trace = etpc::run(scenario, strategy, ref);
    const etpc::RunMetrics metrics = etpc::compute_metrics(trace, cfg.params.epsilon_sq);

    fs::create_directories(out_dir);
    etpc::write_trace_csv(trace, (fs::path(out_dir) / "trace.csv").string());
    etpc::write_events_csv(trace, (fs::path(out_dir) / "events.csv").string());
    {
        nlohmann::json j = metrics_json(metrics);
        j["strategy"] = strategy_name;
        j["path"] = scenario.path.name;
        j["seed"] = cfg.seed;
        j["initial_error"] = {scenario.initial_error.x_e, scenario.initial_error.y_e,
                              scenario.initial_error.theta_e};
        if (strategy.kind == etpc::StrategyKind::kTtc) {
            j["ttc_period"] = strategy.ttc_period;
        }
        std::ofstream out(fs::path(out_dir) / "metrics.json");
        out << j.dump(2) << '\n';
    }
    if (plot_data) emit_plot_data(trace, ref, out_dir);

    std::cout << "wrote " << out_dir << "/trace.csv (" << trace.t.size() << " rows, "
              << trace.events.size() << " events)\n";
    return 0;
}

int cmd_batch(const std::string& config_file, const std::string& out_dir,
              bool has_seed, std::uint64_t seed, unsigned threads, bool plot_data) {
    etpc::SimConfig cfg = config_file.empty() ? etpc::SimConfig::defaults()
                                              : etpc::SimConfig::load(config_file);
    if (has_seed) cfg.seed = seed;
    if (threads > 0) cfg.threads = threads;

    const auto progress = [](std::size_t done, std::size_t total) {
        if (done % 25 == 0 || done == total) {
            std::fprintf(stderr, "\r%zu/%zu jobs", done, total);
            if (done == total) std::fprintf(stderr, "\n");
        }
    };

    std::vector<etpc::RunRecord> records;
    const etpc::BatchSummary summary = etpc::run_batch(cfg, &records, progress);

    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "summary.json");
        out << summary.to_string();
    }
    etpc::write_runs_csv(records, (fs::path(out_dir) / "runs.csv").string());
    if (plot_data) emit_batch_plot_data(cfg, out_dir);

    std::cout << "batch complete: " << records.size() << " runs over "
              << cfg.paths.size() << " paths; summary in " << out_dir
              << "/summary.json\n";
    return 0;
}

int cmd_metrics(const std::string& trace_file, double epsilon_sq) {
    const etpc::SimTrace trace = etpc::read_trace_csv(trace_file);
    const etpc::RunMetrics metrics = etpc::compute_metrics(trace, epsilon_sq);
    nlohmann::json j = metrics_json(metrics);
    j["trace"] = trace_file;
    j["epsilon_sq"] = epsilon_sq;
    // Payload sizes are not stored in the trace CSV.
    j.erase("payload_total_bytes");
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-triggered polynomial control simulation for unicycle "
                 "trajectory tracking"};
    app.require_subcommand(1);

    std::string config_file;
    std::string out_dir = "out";
    std::string strategy = "etpc";
    std::string path_name;
    std::string ic_text;
    std::uint64_t seed = 0;
    bool has_seed = false;
    double ttc_period = 0.0;
    bool plot_data = false;
    unsigned threads = 0;
    std::string trace_file;
    double epsilon_sq = 0.01;

    auto* sim = app.add_subcommand("simulate", "Run one closed-loop scenario");
    sim->add_option("--config", config_file, "JSON run configuration");
    sim->add_option("--strategy", strategy, "etpc|etc|ttc")->capture_default_str();
    sim->add_option("--out", out_dir, "output directory")->capture_default_str();
    sim->add_option("--path", path_name, "path name from the config catalog");
    sim->add_option("--ic", ic_text, "initial error \"x_e,y_e,theta_e\"");
    sim->add_option("--ttc-period", ttc_period, "TTC update period [s]");
    sim->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
        has_seed = true;
    });
    sim->add_flag("--emit-plot-data", plot_data,
                  "also write V(t), error, path-trace and event-raster CSVs");

    auto* batch = app.add_subcommand("batch", "Run the full evaluation protocol");
    batch->add_option("--config", config_file, "JSON run configuration");
    batch->add_option("--out", out_dir, "output directory")->capture_default_str();
    batch->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
        has_seed = true;
    });
    batch->add_option("--threads", threads, "worker threads (0 = hardware)");
    batch->add_flag("--emit-plot-data", plot_data,
                    "also write one showcase run per path/strategy under <out>/plots");

    auto* metrics = app.add_subcommand("metrics", "Metrics from a trace CSV");
    metrics->add_option("--trace", trace_file, "trace CSV")->required();
    metrics->add_option("--epsilon-sq", epsilon_sq, "trigger floor epsilon^2")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            return cmd_simulate(config_file, strategy, out_dir, path_name, ic_text,
                                ttc_period, has_seed, seed, plot_data);
        }
        if (batch->parsed()) {
            return cmd_batch(config_file, out_dir, has_seed, seed, threads, plot_data);
        }
        if (metrics->parsed()) {
            return cmd_metrics(trace_file, epsilon_sq);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
