#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "etpc/faults.hpp"
#include "etpc/types.hpp"

namespace etpc {

/// Tracking error in the robot frame: rotate the world-frame pose
/// difference by the robot heading.
ErrorState error_transform(const Pose& robot, const Pose& reference);

/// Control-affine error dynamics F(X,t) + G(X)u:
///   d(x_e)     = v_r cos(theta_e) - v + y_e omega
///   d(y_e)     = v_r sin(theta_e) - x_e omega
///   d(theta_e) = omega_r - omega
ErrorState error_field(const ErrorState& X, const RefSample& r, const ControlInput& u);

/// One fixed step of the unicycle kinematics with u held constant.
Pose plant_step(const Pose& pose, const ControlInput& u, double h);

/// Classical 4th-order Runge-Kutta step for a time-varying field.
/// Throws IntegrationFault (carrying the stage time) if any stage
/// derivative is non-finite.
template <std::size_t N, typename Field>
std::array<double, N> rk4_step(const std::array<double, N>& x, double t, double h,
                               Field&& field) {
    const auto checked = [](std::array<double, N> k, double t_stage) {
        for (double value : k) {
            if (!std::isfinite(value)) throw IntegrationFault(t_stage);
        }
        return k;
    };

    const std::array<double, N> k1 = checked(field(x, t), t);

    std::array<double, N> stage;
    for (std::size_t i = 0; i < N; ++i) stage[i] = x[i] + 0.5 * h * k1[i];
    const std::array<double, N> k2 = checked(field(stage, t + 0.5 * h), t + 0.5 * h);

    for (std::size_t i = 0; i < N; ++i) stage[i] = x[i] + 0.5 * h * k2[i];
    const std::array<double, N> k3 = checked(field(stage, t + 0.5 * h), t + 0.5 * h);

    for (std::size_t i = 0; i < N; ++i) stage[i] = x[i] + h * k3[i];
    const std::array<double, N> k4 = checked(field(stage, t + h), t + h);

    std::array<double, N> next;
    for (std::size_t i = 0; i < N; ++i) {
        next[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return next;
}

inline std::array<double, 3> to_array(const ErrorState& X) {
    return {X.x_e, X.y_e, X.theta_e};
}

inline ErrorState to_error_state(const std::array<double, 3>& a) {
    return {a[0], a[1], a[2]};
}

}  // namespace etpc
