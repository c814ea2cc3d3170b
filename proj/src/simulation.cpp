#include "etpc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "etpc/dynamics.hpp"
#include "etpc/faults.hpp"
#include "etpc/polyfit.hpp"
#include "etpc/triggering.hpp"

namespace etpc {

std::string strategy_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::kEtpc: return "etpc";
        case StrategyKind::kEtc: return "etc";
        case StrategyKind::kTtc: return "ttc";
    }
    return "?";
}

int payload_bytes(const Strategy& strategy, int p) {
    if (strategy.kind == StrategyKind::kEtpc) return 4 * 2 * (p + 1);
    return 4;
}

SimTrace run(const Scenario& scenario, const Strategy& strategy,
             const ReferenceTrajectory& ref) {
    const ControllerParams& prm = scenario.params;
    prm.validate();

    const A1Report a1 = validate_A1(scenario.path, prm.h);
    if (!a1.ok) {
        throw std::invalid_argument("reference inputs violate the boundedness "
                                    "assumption: " + a1.violation);
    }

    const double h = prm.h;
    const auto n_steps_signed = std::llround(scenario.T_e / h);
    if (n_steps_signed < 1 || std::abs(scenario.T_e - static_cast<double>(n_steps_signed) * h) > 1e-9) {
        throw std::invalid_argument("T_e must be a positive multiple of h");
    }
    const auto n_steps = static_cast<std::size_t>(n_steps_signed);

    std::size_t period_steps = 0;
    if (strategy.kind == StrategyKind::kTtc) {
        const auto steps = std::llround(strategy.ttc_period / h);
        if (steps < 1 || std::abs(strategy.ttc_period - static_cast<double>(steps) * h) > 1e-9) {
            throw std::invalid_argument("TTC period must be a positive multiple of h");
        }
        period_steps = static_cast<std::size_t>(steps);
    }

    SimTrace trace;
    trace.h = h;
    const std::size_t rows = n_steps + 1;
    trace.t.reserve(rows);
    trace.x_e.reserve(rows);
    trace.y_e.reserve(rows);
    trace.theta_e.reserve(rows);
    trace.V.reserve(rows);
    trace.v.reserve(rows);
    trace.omega.reserve(rows);
    trace.Sigma.reserve(rows);
    trace.Lambda.reserve(rows);
    trace.event_flag.reserve(rows);

    ErrorState X = scenario.initial_error;
    CoefficientPacket packet;
    double t_last_event = 0.0;

    const auto u_at = [&](double t) -> ControlInput {
        if (strategy.kind == StrategyKind::kEtpc) {
            return eval_poly(packet, t - t_last_event);
        }
        return {packet.a[0][0], packet.a[0][1]};
    };

    const auto fire_event = [&](double t_now) {
        try {
            if (strategy.kind == StrategyKind::kEtpc) {
                const HorizonSamples samples = predict_horizon(X, t_now, ref, prm);
                packet = solve_coefficients(samples, prm, t_now);
            } else {
                const ControlInput held = ideal_control(X, ref.at_time(t_now), prm);
                packet = CoefficientPacket{{{held.v, held.omega}}, t_now};
            }
        } catch (const std::exception& ex) {
            throw SimulationFault(trace.events.size(), ex.what());
        }
        t_last_event = t_now;
        trace.events.push_back({t_now, packet, payload_bytes(strategy, prm.p)});
    };

    const auto log_row = [&](double t, const TriggerState& ts, const ControlInput& u,
                             bool fired) {
        trace.t.push_back(t);
        trace.x_e.push_back(X.x_e);
        trace.y_e.push_back(X.y_e);
        trace.theta_e.push_back(X.theta_e);
        trace.V.push_back(ts.V);
        trace.v.push_back(u.v);
        trace.omega.push_back(u.omega);
        trace.Sigma.push_back(ts.Sigma);
        trace.Lambda.push_back(ts.Lambda);
        trace.event_flag.push_back(fired ? 1 : 0);
    };

    const auto field = [&](const std::array<double, 3>& s, double t) {
        return to_array(error_field(to_error_state(s), ref.at_time(t), u_at(t)));
    };

    // t0 = 0 is an event by definition, for every strategy.
    fire_event(0.0);
    {
        const RefSample& r0 = ref.at_time(0.0);
        const ControlInput u0 = u_at(0.0);
        TriggerState ts = evaluate_trigger(X, {0.0, 0.0}, r0, prm);
        ts.eps_k_sq = ts.V;
        log_row(0.0, ts, u0, true);
    }

    double eps_k_sq = trace.V.front();
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t_i = static_cast<double>(i) * h;
        const double t_next = static_cast<double>(i + 1) * h;

        X = to_error_state(rk4_step<3>(to_array(X), t_i, h, field));

        const RefSample& r = ref.at_time(t_next);
        ControlInput u_now = u_at(t_next);
        const ControlInput u_hat = ideal_control(X, r, prm);
        TriggerState ts = evaluate_trigger(
            X, {u_now.v - u_hat.v, u_now.omega - u_hat.omega}, r, prm);

        bool fired = false;
        if (strategy.kind == StrategyKind::kTtc) {
            fired = ((i + 1) % period_steps == 0);
        } else {
            fired = ts.fires(prm.sigma, prm.epsilon_sq);
        }
        if (fired) {
            fire_event(t_next);
            // The refit pins the applied input to the ideal control at the
            // event state, so the control error resets to zero exactly.
            u_now = u_at(t_next);
            ts.Lambda = 0.0;
            ts.e = {0.0, 0.0};
            eps_k_sq = ts.V;
        }
        ts.eps_k_sq = eps_k_sq;
        log_row(t_next, ts, u_now, fired);
    }
    return trace;
}

SimTrace run(const Scenario& scenario, const Strategy& strategy) {
    const ReferenceTrajectory ref(scenario.path,
                                  scenario.T_e + scenario.params.T + scenario.params.h,
                                  scenario.params.h);
    return run(scenario, strategy, ref);
}

double derive_ttc_period(const SimTrace& trace) {
    if (trace.events.empty()) {
        throw std::invalid_argument("trace has no events");
    }
    const double raw = trace.duration() / static_cast<double>(trace.events.size());
    const auto steps = std::max<long long>(1, std::llround(raw / trace.h));
    return static_cast<double>(steps) * trace.h;
}

namespace {

void write_double(std::FILE* f, double value, bool last) {
    std::fprintf(f, "%.17g%c", value, last ? '\n' : ',');
}

}  // namespace

void write_trace_csv(const SimTrace& trace, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(f, "t,x_e,y_e,theta_e,V,v,omega,event_flag\n");
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        write_double(f, trace.t[i], false);
        write_double(f, trace.x_e[i], false);
        write_double(f, trace.y_e[i], false);
        write_double(f, trace.theta_e[i], false);
        write_double(f, trace.V[i], false);
        write_double(f, trace.v[i], false);
        write_double(f, trace.omega[i], false);
        std::fprintf(f, "%d\n", static_cast<int>(trace.event_flag[i]));
    }
    std::fclose(f);
}

void write_events_csv(const SimTrace& trace, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    int max_degree = 0;
    for (const auto& ev : trace.events) max_degree = std::max(max_degree, ev.packet.degree());
    std::fprintf(f, "t_k");
    for (int j = 0; j <= max_degree; ++j) std::fprintf(f, ",a%d_v,a%d_omega", j, j);
    std::fprintf(f, ",payload_bytes\n");
    for (const auto& ev : trace.events) {
        std::fprintf(f, "%.17g", ev.t);
        for (int j = 0; j <= max_degree; ++j) {
            const bool present = j <= ev.packet.degree();
            std::fprintf(f, ",%.17g,%.17g", present ? ev.packet.a[j][0] : 0.0,
                         present ? ev.packet.a[j][1] : 0.0);
        }
        std::fprintf(f, ",%d\n", ev.payload_bytes);
    }
    std::fclose(f);
}

SimTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty trace file: " + path);
    if (line.rfind("t,x_e,y_e,theta_e,V,v,omega,event_flag", 0) != 0) {
        throw std::runtime_error("unexpected trace header: " + line);
    }
    SimTrace trace;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double values[7];
        for (double& value : values) {
            if (!std::getline(row, cell, ',')) {
                throw std::runtime_error("short trace row: " + line);
            }
            value = std::stod(cell);
        }
        if (!std::getline(row, cell, ',')) throw std::runtime_error("short trace row");
        const int flag = std::stoi(cell);
        trace.t.push_back(values[0]);
        trace.x_e.push_back(values[1]);
        trace.y_e.push_back(values[2]);
        trace.theta_e.push_back(values[3]);
        trace.V.push_back(values[4]);
        trace.v.push_back(values[5]);
        trace.omega.push_back(values[6]);
        trace.Sigma.push_back(0.0);
        trace.Lambda.push_back(0.0);
        trace.event_flag.push_back(flag ? 1 : 0);
        if (flag) trace.events.push_back({values[0], {}, 0});
    }
    if (trace.t.size() >= 2) trace.h = trace.t[1] - trace.t[0];
    return trace;
}

}  // namespace etpc
