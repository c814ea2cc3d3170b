#include "etpc/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace etpc {

void ControllerParams::validate() const {
    const auto fail = [](const std::string& what) {
        throw std::invalid_argument("controller params: " + what);
    };
    if (!(c1 > 0.0) || !(c2 > 0.0) || !(c3 > 0.0)) fail("c1, c2, c3 must be > 0");
    if (!(gamma > 0.0)) fail("gamma must be > 0");
    if (!(sigma > 0.0) || !(sigma < 1.0)) fail("sigma must lie in (0, 1)");
    if (!(epsilon_sq > 0.0)) fail("epsilon_sq must be > 0");
    if (delta1 < 0.0 || delta2 < 0.0) fail("delta1, delta2 must be >= 0");
    if (!(T > 0.0)) fail("T must be > 0");
    if (p < 0 || p > 6) fail("p must lie in 0..6");
    if (!(h > 0.0)) fail("h must be > 0");
    if (T < h) fail("T must be at least h");
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return std::sin(x) / x;
}

double sinc_prime(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return -x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0));
    }
    return (x * std::cos(x) - std::sin(x)) / (x * x);
}

double ideal_omega(const ErrorState& X, const RefSample& r, const ControllerParams& prm) {
    return r.omega_r + prm.gamma * X.y_e * r.v_r * sinc(X.theta_e) +
           prm.c2 * prm.gamma * X.theta_e;
}

ControlInput ideal_control(const ErrorState& X, const RefSample& r,
                           const ControllerParams& prm) {
    const double s = sinc(X.theta_e);
    const double sin_th = std::sin(X.theta_e);
    const double cos_th = std::cos(X.theta_e);

    const double omega_hat = ideal_omega(X, r, prm);

    // v2 is the time derivative of omega_hat along the closed loop.
    const double v2 =
        r.omegadot_r +
        prm.gamma * r.v_r * s * (-omega_hat * X.x_e + r.v_r * sin_th) +
        prm.gamma * X.y_e * r.vdot_r * s +
        (prm.gamma * X.y_e * r.v_r * sinc_prime(X.theta_e) + prm.c2 * prm.gamma) *
            (r.omega_r - omega_hat);

    const double v1 = r.v_r * cos_th - prm.c3 * v2 * X.y_e +
                      prm.c3 * omega_hat * (omega_hat * X.x_e - r.v_r * sin_th);

    const double v_hat = v1 + prm.c1 * (X.x_e - prm.c3 * omega_hat * X.y_e);
    return {v_hat, omega_hat};
}

}  // namespace etpc
