#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "etpc/controller.hpp"
#include "etpc/reference.hpp"
#include "etpc/types.hpp"

namespace etpc {

/// Ideal control sampled along the predicted horizon on the uniform grid
/// tau_j = j*h, j = 0..N with N*h = T. mu is the sample at tau = 0.
struct HorizonSamples {
    double h = 0.0;
    double T = 0.0;
    std::array<double, 2> mu{};
    std::vector<std::array<double, 2>> u_bar;  // [v, omega] per node
};

/// Simulates the controller-side copy of the error dynamics forward from
/// (X_k, t_k) over the horizon T and records the ideal control on the
/// grid. Throws PredictionFault if the state or a control sample goes
/// non-finite.
HorizonSamples predict_horizon(const ErrorState& X_k, double t_k,
                               const ReferenceTrajectory& ref,
                               const ControllerParams& prm);

/// Hessian of the per-channel fit objective over the free coefficients
/// a_1..a_p: entries 2(1+delta) T^(j+l+1)/(j+l+1). Positive definite for
/// p >= 1 (a scaled Gram matrix of linearly independent monomials);
/// empty for p = 0.
Eigen::MatrixXd hessian(int p, double T, double delta);

/// Right-hand side of the normal equations for one channel:
/// D_j = 2<u_bar, tau^j> - 2(1+delta) mu T^(j+1)/(j+1), j = 1..p, with
/// the inner products computed by composite Simpson on the sample grid.
Eigen::VectorXd rhs_vector(const HorizonSamples& s, int channel,
                           const ControllerParams& prm);

/// Solves both channels' fits in closed form. The constraint pins
/// a_0 = mu; for p >= 1 the free coefficients solve the normal equations,
/// assembled in the scaled basis s = tau/T to keep the system conditioned,
/// then rescaled by T^-j. Throws SolverFault on factorization failure or
/// non-finite output.
CoefficientPacket solve_coefficients(const HorizonSamples& s,
                                     const ControllerParams& prm,
                                     double t_event);

/// Horner evaluation of the packet at elapsed time tau since the event.
/// tau beyond the fit horizon is allowed; the polynomial domain simply
/// extends.
ControlInput eval_poly(const CoefficientPacket& packet, double tau);

/// Composite Simpson quadrature of uniformly sampled values. If the
/// interval count is odd the final sample is dropped.
double simpson(const std::vector<double>& f, double h);

}  // namespace etpc
