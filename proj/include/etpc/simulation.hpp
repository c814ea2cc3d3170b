#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "etpc/controller.hpp"
#include "etpc/reference.hpp"
#include "etpc/types.hpp"

namespace etpc {

enum class StrategyKind { kEtpc, kEtc, kTtc };

struct Strategy {
    StrategyKind kind = StrategyKind::kEtpc;
    /// TTC only; must be a positive integer multiple of the step h.
    double ttc_period = 0.0;
};

std::string strategy_name(StrategyKind kind);

/// One closed-loop run: a path, the shared parameter set, the initial
/// tracking error and the horizon. The seed tags where the initial
/// condition came from; the run itself is deterministic.
struct Scenario {
    PathSpec path;
    ControllerParams params;
    ErrorState initial_error{};
    double T_e = 60.0;
    std::uint64_t seed = 0;
};

struct TraceEvent {
    double t = 0.0;
    CoefficientPacket packet;  // degree 0 for ETC/TTC holds
    int payload_bytes = 0;
};

/// Time-indexed log of one run. All vectors share the grid length
/// n_steps + 1; events are strictly increasing in time with the first
/// one at t = 0.
struct SimTrace {
    double h = 0.0;
    std::vector<double> t;
    std::vector<double> x_e, y_e, theta_e;
    std::vector<double> V;
    std::vector<double> v, omega;
    std::vector<double> Sigma, Lambda;
    std::vector<std::uint8_t> event_flag;
    std::vector<TraceEvent> events;

    double duration() const { return t.empty() ? 0.0 : t.back(); }
};

/// Runs the closed loop on the fixed grid. t = 0 is always an event.
/// ETPC fits a fresh packet at each event and applies the polynomial
/// between events (re-evaluated at RK4 stage times, with the domain
/// extended past T when the next event is late). ETC holds the ideal
/// control sampled at the event. Both check the trigger once per step
/// after the state update. TTC updates its held sample periodically and
/// never triggers.
SimTrace run(const Scenario& scenario, const Strategy& strategy,
             const ReferenceTrajectory& ref);

/// Convenience overload that builds the reference cache over
/// [0, T_e + T + h].
SimTrace run(const Scenario& scenario, const Strategy& strategy);

/// Matching-frequency period for a TTC baseline: T_e / event count,
/// rounded to the nearest multiple of h (at least h).
double derive_ttc_period(const SimTrace& trace);

/// Bytes of useful payload per event: 4 for held samples (ETC/TTC),
/// 4 bytes x 2 channels x (p+1) coefficients for ETPC.
int payload_bytes(const Strategy& strategy, int p);

/// Trace CSV: t, x_e, y_e, theta_e, V, v, omega, event_flag.
void write_trace_csv(const SimTrace& trace, const std::string& path);

/// Events sidecar CSV: t_k plus the flattened coefficient rows.
void write_events_csv(const SimTrace& trace, const std::string& path);

/// Reads back a trace CSV (events reconstructed from the flag column;
/// packets and payload sizes are not stored in that file).
SimTrace read_trace_csv(const std::string& path);

}  // namespace etpc
