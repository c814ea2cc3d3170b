#pragma once

#include "etpc/controller.hpp"
#include "etpc/types.hpp"

namespace etpc {

/// Per-step trigger diagnostics. e is the control error u - u_hat(X,t);
/// eps_k_sq is V at the most recent event.
struct TriggerState {
    double V = 0.0;
    double Sigma = 0.0;
    double Lambda = 0.0;
    ControlInput e{};
    double eps_k_sq = 0.0;

    bool fires(double sigma_frac, double epsilon_sq) const {
        return Lambda >= (1.0 - sigma_frac) * Sigma && V >= epsilon_sq;
    }
};

/// Lyapunov energy V = x1^2/2 + y_e^2/2 + theta_e^2/(2 gamma) with
/// x1 = x_e - c3 omega_hat(X,t) y_e, omega_hat evaluated at the actual
/// state X.
double lyapunov(const ErrorState& X, const RefSample& r, const ControllerParams& prm);

/// Decay rate Sigma = c1 x1^2 + c2 theta_e^2 + c3 omega_hat^2 y_e^2 >= 0.
double sigma_term(const ErrorState& X, const RefSample& r, const ControllerParams& prm);

/// Perturbation rate Lambda = (dV/dX) G(X) e, with the analytic state
/// gradient of V (including the omega_hat dependence inside x1).
/// Along the closed loop, dV/dt = -Sigma + Lambda.
double lambda_term(const ErrorState& X, const ControlInput& e, const RefSample& r,
                   const ControllerParams& prm);

/// Event rule: fire iff Lambda >= (1 - sigma) Sigma and V >= epsilon^2,
/// which is dV >= -sigma Sigma rewritten through dV = -Sigma + Lambda.
bool should_trigger(const ErrorState& X, const ControlInput& e, const RefSample& r,
                    const ControllerParams& prm);

/// Computes V, Sigma and Lambda in one pass (the engine's per-step path).
TriggerState evaluate_trigger(const ErrorState& X, const ControlInput& e,
                              const RefSample& r, const ControllerParams& prm);

}  // namespace etpc
