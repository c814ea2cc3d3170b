#pragma once

#include <stdexcept>
#include <string>

namespace etpc {

/// Non-finite derivative encountered inside a fixed-step integration.
/// Carries the stage time at which the field evaluation went bad.
struct IntegrationFault : std::runtime_error {
    explicit IntegrationFault(double t_stage)
        : std::runtime_error("non-finite field evaluation at t=" + std::to_string(t_stage)),
          t(t_stage) {}
    double t;
};

/// Horizon prediction produced a non-finite state or control sample.
struct PredictionFault : std::runtime_error {
    PredictionFault(double t_event_, const std::string& detail)
        : std::runtime_error("horizon prediction failed at event time t=" +
                             std::to_string(t_event_) + ": " + detail),
          t_event(t_event_) {}
    double t_event;
};

/// The normal-equations solve failed or returned non-finite coefficients.
struct SolverFault : std::runtime_error {
    SolverFault(int degree_, double horizon_, const std::string& detail)
        : std::runtime_error("coefficient solve failed (p=" + std::to_string(degree_) +
                             ", T=" + std::to_string(horizon_) + "): " + detail),
          degree(degree_), horizon(horizon_) {}
    int degree;
    double horizon;
};

/// Query outside the valid time range of a reference trajectory.
struct DomainFault : std::runtime_error {
    explicit DomainFault(const std::string& detail) : std::runtime_error(detail) {}
};

/// Wraps a fault raised while servicing an event, tagging the event index.
struct SimulationFault : std::runtime_error {
    SimulationFault(std::size_t event_index_, const std::string& detail)
        : std::runtime_error("event " + std::to_string(event_index_) + ": " + detail),
          event_index(event_index_) {}
    std::size_t event_index;
};

}  // namespace etpc
