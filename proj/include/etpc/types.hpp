#pragma once

#include <array>
#include <vector>

namespace etpc {

/// Planar pose. theta is unwrapped; nothing here normalizes angles.
struct Pose {
    double x = 0.0;      // m
    double y = 0.0;      // m
    double theta = 0.0;  // rad
};

/// Tracking error expressed in the robot frame.
struct ErrorState {
    double x_e = 0.0;      // m
    double y_e = 0.0;      // m
    double theta_e = 0.0;  // rad
};

/// Commanded linear and angular velocity.
struct ControlInput {
    double v = 0.0;      // m/s
    double omega = 0.0;  // rad/s
};

/// Reference pose plus its inputs and input rates at one time instant.
struct RefSample {
    Pose pose{};
    double v_r = 0.0;         // m/s
    double omega_r = 0.0;     // rad/s
    double vdot_r = 0.0;      // m/s^2
    double omegadot_r = 0.0;  // rad/s^2
};

/// Polynomial control coefficients transmitted at one event.
/// Row j holds the tau^j coefficients; column 0 is the v channel,
/// column 1 the omega channel. a[0] equals the ideal control at the
/// event state, which is the equality constraint of the fit.
struct CoefficientPacket {
    std::vector<std::array<double, 2>> a;
    double t_event = 0.0;

    int degree() const { return static_cast<int>(a.size()) - 1; }
};

}  // namespace etpc
