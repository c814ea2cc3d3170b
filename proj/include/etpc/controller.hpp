#pragma once

#include "etpc/types.hpp"

namespace etpc {

/// Gains and fitting knobs shared by the controller, the coefficient
/// fit, the triggering rule and the simulation engine.
struct ControllerParams {
    double c1 = 0.02;          // linear-error gain
    double c2 = 0.05;          // heading-error gain
    double c3 = 0.01;          // cross-coupling gain
    double gamma = 100.0;      // angular feedback gain
    double sigma = 0.5;        // trigger fraction, in (0,1)
    double epsilon_sq = 0.01;  // trigger floor on V
    double delta1 = 0.0;       // v-channel magnitude penalty
    double delta2 = 0.0;       // omega-channel magnitude penalty
    double T = 1.0;            // prediction horizon, s
    int p = 1;                 // polynomial degree, 0..6
    double h = 0.005;          // integration step, s

    /// Throws std::invalid_argument on any out-of-range field.
    void validate() const;
};

/// sin(x)/x with the removable singularity; series below |x| = 1e-4.
double sinc(double x);

/// d/dx sinc(x) = (x cos x - sin x) / x^2; series below |x| = 1e-4.
double sinc_prime(double x);

/// Angular-rate component of the ideal feedback law.
double ideal_omega(const ErrorState& X, const RefSample& r, const ControllerParams& prm);

/// Continuous-time ideal feedback law (v_hat, omega_hat). omega_hat is
/// evaluated first since it feeds the v channel.
ControlInput ideal_control(const ErrorState& X, const RefSample& r,
                           const ControllerParams& prm);

}  // namespace etpc
