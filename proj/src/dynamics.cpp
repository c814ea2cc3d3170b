#include "etpc/dynamics.hpp"

#include <cmath>

namespace etpc {

ErrorState error_transform(const Pose& robot, const Pose& reference) {
    const double dx = reference.x - robot.x;
    const double dy = reference.y - robot.y;
    const double c = std::cos(robot.theta);
    const double s = std::sin(robot.theta);
    return {c * dx + s * dy, -s * dx + c * dy, reference.theta - robot.theta};
}

ErrorState error_field(const ErrorState& X, const RefSample& r, const ControlInput& u) {
    return {r.v_r * std::cos(X.theta_e) - u.v + X.y_e * u.omega,
            r.v_r * std::sin(X.theta_e) - X.x_e * u.omega,
            r.omega_r - u.omega};
}

Pose plant_step(const Pose& pose, const ControlInput& u, double h) {
    const auto field = [&u](const std::array<double, 3>& s, double /*t*/) {
        return std::array<double, 3>{u.v * std::cos(s[2]), u.v * std::sin(s[2]), u.omega};
    };
    const auto next = rk4_step<3>({pose.x, pose.y, pose.theta}, 0.0, h, field);
    return {next[0], next[1], next[2]};
}

}  // namespace etpc
