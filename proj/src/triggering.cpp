#include "etpc/triggering.hpp"

namespace etpc {

namespace {

struct VGradient {
    double V;
    double Sigma;
    double d_x;    // dV/dx_e
    double d_y;    // dV/dy_e
    double d_th;   // dV/dtheta_e
};

// V, Sigma and the analytic state gradient of V in one evaluation.
// x1 = x_e - c3 omega_hat y_e couples the gradient to omega_hat's own
// partials: d(omega_hat)/dy_e = gamma v_r sinc(theta_e) and
// d(omega_hat)/dtheta_e = gamma y_e v_r sinc'(theta_e) + c2 gamma.
VGradient gradient(const ErrorState& X, const RefSample& r, const ControllerParams& prm) {
    const double omega_hat = ideal_omega(X, r, prm);
    const double x1 = X.x_e - prm.c3 * omega_hat * X.y_e;

    const double domega_dy = prm.gamma * r.v_r * sinc(X.theta_e);
    const double domega_dth = prm.gamma * X.y_e * r.v_r * sinc_prime(X.theta_e) +
                              prm.c2 * prm.gamma;

    VGradient g;
    g.V = 0.5 * x1 * x1 + 0.5 * X.y_e * X.y_e +
          X.theta_e * X.theta_e / (2.0 * prm.gamma);
    g.Sigma = prm.c1 * x1 * x1 + prm.c2 * X.theta_e * X.theta_e +
              prm.c3 * omega_hat * omega_hat * X.y_e * X.y_e;
    g.d_x = x1;
    g.d_y = x1 * (-prm.c3 * (omega_hat + X.y_e * domega_dy)) + X.y_e;
    g.d_th = x1 * (-prm.c3 * X.y_e * domega_dth) + X.theta_e / prm.gamma;
    return g;
}

double lambda_from_gradient(const VGradient& g, const ErrorState& X, const ControlInput& e) {
    // G(X) e = (-e_v + y_e e_w, -x_e e_w, -e_w)
    return g.d_x * (-e.v + X.y_e * e.omega) + g.d_y * (-X.x_e * e.omega) +
           g.d_th * (-e.omega);
}

}  // namespace

double lyapunov(const ErrorState& X, const RefSample& r, const ControllerParams& prm) {
    const double omega_hat = ideal_omega(X, r, prm);
    const double x1 = X.x_e - prm.c3 * omega_hat * X.y_e;
    return 0.5 * x1 * x1 + 0.5 * X.y_e * X.y_e +
           X.theta_e * X.theta_e / (2.0 * prm.gamma);
}

double sigma_term(const ErrorState& X, const RefSample& r, const ControllerParams& prm) {
    const double omega_hat = ideal_omega(X, r, prm);
    const double x1 = X.x_e - prm.c3 * omega_hat * X.y_e;
    return prm.c1 * x1 * x1 + prm.c2 * X.theta_e * X.theta_e +
           prm.c3 * omega_hat * omega_hat * X.y_e * X.y_e;
}

double lambda_term(const ErrorState& X, const ControlInput& e, const RefSample& r,
                   const ControllerParams& prm) {
    return lambda_from_gradient(gradient(X, r, prm), X, e);
}

bool should_trigger(const ErrorState& X, const ControlInput& e, const RefSample& r,
                    const ControllerParams& prm) {
    const VGradient g = gradient(X, r, prm);
    const double lambda = lambda_from_gradient(g, X, e);
    return lambda >= (1.0 - prm.sigma) * g.Sigma && g.V >= prm.epsilon_sq;
}

TriggerState evaluate_trigger(const ErrorState& X, const ControlInput& e,
                              const RefSample& r, const ControllerParams& prm) {
    const VGradient g = gradient(X, r, prm);
    TriggerState ts;
    ts.V = g.V;
    ts.Sigma = g.Sigma;
    ts.Lambda = lambda_from_gradient(g, X, e);
    ts.e = e;
    return ts;
}

}  // namespace etpc
