#include "etpc/polyfit.hpp"

#include <cmath>

#include "etpc/dynamics.hpp"
#include "etpc/faults.hpp"

namespace etpc {

double simpson(const std::vector<double>& f, double h) {
    if (f.size() < 3) return 0.0;
    std::size_t n = f.size() - 1;  // interval count
    if (n % 2 == 1) --n;           // drop the final sample
    double acc = f[0] + f[n];
    for (std::size_t i = 1; i < n; ++i) acc += f[i] * ((i % 2 == 1) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

HorizonSamples predict_horizon(const ErrorState& X_k, double t_k,
                               const ReferenceTrajectory& ref,
                               const ControllerParams& prm) {
    const std::size_t n = static_cast<std::size_t>(std::llround(prm.T / prm.h));
    if (t_k + static_cast<double>(n) * prm.h > ref.t_end() + 1e-9) {
        throw PredictionFault(t_k, "horizon exceeds the reference cache range");
    }

    HorizonSamples out;
    out.h = prm.h;
    out.T = static_cast<double>(n) * prm.h;
    out.u_bar.resize(n + 1);

    const auto field = [&](const std::array<double, 3>& s, double t) {
        const ErrorState X = to_error_state(s);
        const RefSample& r = ref.at_time(t);
        return to_array(error_field(X, r, ideal_control(X, r, prm)));
    };

    std::array<double, 3> state = to_array(X_k);
    try {
        for (std::size_t j = 0; j <= n; ++j) {
            const double t = t_k + static_cast<double>(j) * prm.h;
            const ControlInput u = ideal_control(to_error_state(state), ref.at_time(t), prm);
            if (!std::isfinite(u.v) || !std::isfinite(u.omega)) {
                throw PredictionFault(t_k, "non-finite control sample at tau=" +
                                               std::to_string(t - t_k));
            }
            out.u_bar[j] = {u.v, u.omega};
            if (j < n) state = rk4_step<3>(state, t, prm.h, field);
        }
    } catch (const IntegrationFault& fault) {
        throw PredictionFault(t_k, fault.what());
    }
    out.mu = out.u_bar[0];
    return out;
}

Eigen::MatrixXd hessian(int p, double T, double delta) {
    if (p <= 0) return Eigen::MatrixXd(0, 0);
    Eigen::MatrixXd H(p, p);
    for (int j = 1; j <= p; ++j) {
        for (int l = 1; l <= p; ++l) {
            H(j - 1, l - 1) = 2.0 * (1.0 + delta) * std::pow(T, j + l + 1) /
                              static_cast<double>(j + l + 1);
        }
    }
    return H;
}

namespace {

double channel_delta(const ControllerParams& prm, int channel) {
    return channel == 0 ? prm.delta1 : prm.delta2;
}

// <u_bar_i, (tau/T)^j> by composite Simpson on the sample grid.
double scaled_inner_product(const HorizonSamples& s, int channel, int j) {
    std::vector<double> integrand(s.u_bar.size());
    for (std::size_t i = 0; i < s.u_bar.size(); ++i) {
        const double scaled_tau = static_cast<double>(i) * s.h / s.T;
        integrand[i] = s.u_bar[i][channel] * std::pow(scaled_tau, j);
    }
    return simpson(integrand, s.h);
}

}  // namespace

Eigen::VectorXd rhs_vector(const HorizonSamples& s, int channel,
                           const ControllerParams& prm) {
    const int p = prm.p;
    const double delta = channel_delta(prm, channel);
    const double mu = s.mu[channel];
    Eigen::VectorXd D(p);
    for (int j = 1; j <= p; ++j) {
        // <u_bar, tau^j> = T^j <u_bar, (tau/T)^j>
        const double inner = std::pow(s.T, j) * scaled_inner_product(s, channel, j);
        D(j - 1) = 2.0 * inner -
                   2.0 * (1.0 + delta) * mu * std::pow(s.T, j + 1) /
                       static_cast<double>(j + 1);
    }
    return D;
}

CoefficientPacket solve_coefficients(const HorizonSamples& s,
                                     const ControllerParams& prm, double t_event) {
    const int p = prm.p;
    CoefficientPacket packet;
    packet.t_event = t_event;
    packet.a.assign(p + 1, {0.0, 0.0});
    packet.a[0] = {s.mu[0], s.mu[1]};
    if (p == 0) return packet;
    if (s.u_bar.size() < 3) {
        throw SolverFault(p, s.T, "horizon grid too short for quadrature");
    }

    for (int channel = 0; channel < 2; ++channel) {
        const double delta = channel_delta(prm, channel);
        const double mu = s.mu[channel];

        // Normal equations in the scaled basis (tau/T)^j: the matrix is
        // 2(1+delta) T / (j+l+1), a fixed Hilbert-like matrix independent
        // of T, so conditioning does not degrade with the horizon.
        Eigen::MatrixXd H(p, p);
        Eigen::VectorXd D(p);
        for (int j = 1; j <= p; ++j) {
            for (int l = 1; l <= p; ++l) {
                H(j - 1, l - 1) =
                    2.0 * (1.0 + delta) * s.T / static_cast<double>(j + l + 1);
            }
            D(j - 1) = 2.0 * scaled_inner_product(s, channel, j) -
                       2.0 * (1.0 + delta) * mu * s.T / static_cast<double>(j + 1);
        }

        const Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
            throw SolverFault(p, s.T, "normal equations are not positive definite");
        }
        const Eigen::VectorXd b = ldlt.solve(D);
        for (int j = 1; j <= p; ++j) {
            const double coeff = b(j - 1) / std::pow(s.T, j);
            if (!std::isfinite(coeff)) {
                throw SolverFault(p, s.T, "non-finite coefficient");
            }
            packet.a[j][channel] = coeff;
        }
    }
    return packet;
}

ControlInput eval_poly(const CoefficientPacket& packet, double tau) {
    double v = 0.0;
    double omega = 0.0;
    for (auto it = packet.a.rbegin(); it != packet.a.rend(); ++it) {
        v = v * tau + (*it)[0];
        omega = omega * tau + (*it)[1];
    }
    return {v, omega};
}

}  // namespace etpc
