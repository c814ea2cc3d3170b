#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "etpc/controller.hpp"
#include "etpc/dynamics.hpp"
#include "etpc/reference.hpp"
#include "etpc/rng.hpp"
#include "etpc/triggering.hpp"

using namespace etpc;

TEST_CASE("sinc and sinc_prime at and away from the singularity") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc_prime(0.0) == 0.0);
    CHECK(sinc(std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-15));

    // Central finite difference oracle for the derivative.
    const double fd = (sinc(0.5 + 1e-6) - sinc(0.5 - 1e-6)) / 2e-6;
    CHECK(std::abs(sinc_prime(0.5) - fd) / std::abs(fd) < 1e-6);

    // Series and direct formula agree through the switchover.
    for (double x : {9.9e-5, 1.00001e-4, 5e-5, 2e-4}) {
        CHECK(sinc(x) == doctest::Approx(std::sin(x) / x).epsilon(1e-14));
        const double direct = (x * std::cos(x) - std::sin(x)) / (x * x);
        CHECK(sinc_prime(x) == doctest::Approx(direct).epsilon(1e-9));
        CHECK(sinc(-x) == sinc(x));
        CHECK(sinc_prime(-x) == -sinc_prime(x));
    }
}

TEST_CASE("ideal_control equals the reference input at zero error, exactly") {
    Xoshiro256pp rng(3);
    const ControllerParams prm;
    for (int i = 0; i < 100; ++i) {
        RefSample r;
        r.v_r = rng.uniform(0.05, 0.5);
        r.omega_r = rng.uniform(-0.5, 0.5);
        r.vdot_r = rng.uniform(-0.1, 0.1);
        r.omegadot_r = rng.uniform(-0.1, 0.1);
        const ControlInput u = ideal_control({0, 0, 0}, r, prm);
        CHECK(u.v == r.v_r);
        CHECK(u.omega == r.omega_r);
    }
}

TEST_CASE("heading-only error moves omega by c2*gamma*theta_e") {
    const ControllerParams prm;
    RefSample r;
    r.v_r = 0.15;
    r.omega_r = 0.15;
    for (double theta : {-0.3, -0.01, 0.2, 1.0}) {
        const double w = ideal_omega({0, 0, theta}, r, prm);
        CHECK(w == doctest::Approx(r.omega_r + prm.c2 * prm.gamma * theta).epsilon(1e-15));
    }
}

TEST_CASE("ideal_control matches an independent transcription of the law") {
    // Same formulas, evaluated step by step through the intermediate
    // quantities, written separately from the implementation.
    const ControllerParams prm;  // gamma=100, c1=0.02, c2=0.05, c3=0.01
    const ErrorState X{0.1, -0.2, 0.05};
    RefSample r;
    r.v_r = 0.15;
    r.omega_r = 0.15;  // circle reference
    r.vdot_r = 0.0;
    r.omegadot_r = 0.0;

    const double sinc_th = std::sin(X.theta_e) / X.theta_e;
    const double sincp_th =
        (X.theta_e * std::cos(X.theta_e) - std::sin(X.theta_e)) / (X.theta_e * X.theta_e);
    const double w_hat = r.omega_r + prm.gamma * X.y_e * r.v_r * sinc_th +
                         prm.c2 * prm.gamma * X.theta_e;
    const double v2 = r.omegadot_r +
                      prm.gamma * r.v_r * sinc_th *
                          (-w_hat * X.x_e + r.v_r * std::sin(X.theta_e)) +
                      prm.gamma * X.y_e * r.vdot_r * sinc_th +
                      (prm.gamma * X.y_e * r.v_r * sincp_th + prm.c2 * prm.gamma) *
                          (r.omega_r - w_hat);
    const double v1 = r.v_r * std::cos(X.theta_e) - prm.c3 * v2 * X.y_e +
                      prm.c3 * w_hat * (w_hat * X.x_e - r.v_r * std::sin(X.theta_e));
    const double v_hat = v1 + prm.c1 * (X.x_e - prm.c3 * w_hat * X.y_e);

    const ControlInput u = ideal_control(X, r, prm);
    CHECK(u.omega == doctest::Approx(w_hat).epsilon(1e-14));
    CHECK(u.v == doctest::Approx(v_hat).epsilon(1e-14));
}

TEST_CASE("ideal_control is continuous: 1e-9 state perturbations move it < 1e-5") {
    Xoshiro256pp rng(17);
    const ControllerParams prm;
    RefSample r;
    r.v_r = 0.15;
    r.omega_r = 0.15;
    for (int i = 0; i < 200; ++i) {
        const ErrorState X{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-0.2, 0.2)};
        const ControlInput base = ideal_control(X, r, prm);
        for (int axis = 0; axis < 3; ++axis) {
            ErrorState Y = X;
            const double d = 1e-9;
            if (axis == 0) Y.x_e += d;
            if (axis == 1) Y.y_e += d;
            if (axis == 2) Y.theta_e += d;
            const ControlInput moved = ideal_control(Y, r, prm);
            CHECK(std::abs(moved.v - base.v) < 1e-5);
            CHECK(std::abs(moved.omega - base.omega) < 1e-5);
        }
    }
}

TEST_CASE("emulated continuous controller makes V non-increasing") {
    // Integrate the error dynamics with u = ideal_control evaluated at
    // every RK4 stage; V must never rise by more than 1e-9 per step.
    PathSpec circle;
    circle.kind = OmegaProfile::kConstant;
    circle.v_r = 0.15;
    circle.omega = 0.15;
    circle.duration = 10.0;
    const ControllerParams prm;
    const ReferenceTrajectory ref(circle, 10.0, prm.h);

    Xoshiro256pp rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        ErrorState X{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-0.2, 0.2)};
        const auto field = [&](const std::array<double, 3>& s, double t) {
            const ErrorState Xs = to_error_state(s);
            const RefSample& rr = ref.at_time(t);
            return to_array(error_field(Xs, rr, ideal_control(Xs, rr, prm)));
        };
        double v_prev = lyapunov(X, ref.at_time(0.0), prm);
        for (int i = 0; i < 1000; ++i) {  // 5 s
            const double t = i * prm.h;
            X = to_error_state(rk4_step<3>(to_array(X), t, prm.h, field));
            const double v_now = lyapunov(X, ref.at_time(t + prm.h), prm);
            CHECK(v_now <= v_prev + 1e-9);
            v_prev = v_now;
        }
    }
}

TEST_CASE("params validation rejects out-of-range fields") {
    ControllerParams prm;
    CHECK_NOTHROW(prm.validate());
    prm.sigma = 1.0;
    CHECK_THROWS_AS(prm.validate(), std::invalid_argument);
    prm = ControllerParams{};
    prm.p = 7;
    CHECK_THROWS_AS(prm.validate(), std::invalid_argument);
    prm = ControllerParams{};
    prm.epsilon_sq = 0.0;
    CHECK_THROWS_AS(prm.validate(), std::invalid_argument);
    prm = ControllerParams{};
    prm.delta1 = -0.1;
    CHECK_THROWS_AS(prm.validate(), std::invalid_argument);
}
