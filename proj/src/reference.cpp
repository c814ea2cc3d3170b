#include "etpc/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "etpc/dynamics.hpp"
#include "etpc/faults.hpp"

namespace etpc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Constant-omega motion from (pose0, t0) to t, exact.
Pose advance_constant(const Pose& pose0, double v, double omega, double dt) {
    if (omega == 0.0) {
        return {pose0.x + v * std::cos(pose0.theta) * dt,
                pose0.y + v * std::sin(pose0.theta) * dt, pose0.theta};
    }
    const double theta = pose0.theta + omega * dt;
    const double radius = v / omega;
    return {pose0.x + radius * (std::sin(theta) - std::sin(pose0.theta)),
            pose0.y - radius * (std::cos(theta) - std::cos(pose0.theta)), theta};
}

}  // namespace

A1Report validate_A1(const PathSpec& spec, double h) {
    A1Report report;
    report.c = std::abs(spec.v_r);
    if (report.c <= 0.0) {
        report.violation = "|v_r| has no positive lower bound (v_r = 0)";
        return report;
    }
    if (spec.kind == OmegaProfile::kPiecewiseConstant) {
        if (spec.segments.empty()) {
            report.violation = "piecewise profile without segments";
            return report;
        }
        for (const auto& seg : spec.segments) {
            if (!(seg.duration > 0.0)) {
                report.violation = "non-positive segment duration";
                return report;
            }
        }
    }

    // Grid supremum of |v_r|, |omega_r|, |vdot_r|, |omegadot_r| over the
    // path duration. vdot_r is identically zero (constant speed).
    double sup = std::abs(spec.v_r);
    const std::size_t n = static_cast<std::size_t>(std::llround(spec.duration / h));
    switch (spec.kind) {
        case OmegaProfile::kConstant:
            sup = std::max(sup, std::abs(spec.omega));
            break;
        case OmegaProfile::kPiecewiseConstant: {
            for (const auto& seg : spec.segments) sup = std::max(sup, std::abs(seg.omega));
            double max_jump = 0.0;
            for (std::size_t i = 0; i + 1 < spec.segments.size(); ++i) {
                max_jump = std::max(max_jump, std::abs(spec.segments[i + 1].omega -
                                                       spec.segments[i].omega));
            }
            max_jump = std::max(max_jump, std::abs(spec.segments.front().omega -
                                                   spec.segments.back().omega));
            if (max_jump > 0.0) {
                report.warnings.push_back(
                    "omega_r jumps by up to " + std::to_string(max_jump) +
                    " rad/s at switch times; |omegadot_r| is unbounded on a "
                    "measure-zero set and treated as 0 there");
            }
            break;
        }
        case OmegaProfile::kSinusoidal: {
            const double w = kTwoPi * spec.frequency;
            for (std::size_t i = 0; i <= n; ++i) {
                const double t = static_cast<double>(i) * h;
                sup = std::max(sup, std::abs(spec.amplitude * std::sin(w * t)));
                sup = std::max(sup, std::abs(spec.amplitude * w * std::cos(w * t)));
            }
            break;
        }
    }
    report.M = sup;
    report.ok = true;
    return report;
}

ReferenceTrajectory::ReferenceTrajectory(PathSpec spec, double t_end, double h)
    : spec_(std::move(spec)), h_(h), half_h_(0.5 * h), t_end_(t_end) {
    if (!(h > 0.0) || !(t_end > 0.0)) {
        throw std::invalid_argument("reference grid needs h > 0 and t_end > 0");
    }
    if (spec_.kind == OmegaProfile::kPiecewiseConstant) {
        if (spec_.segments.empty()) {
            throw std::invalid_argument("piecewise profile without segments");
        }
        // Expand the segment cycle until it covers [0, t_end].
        double t = 0.0;
        Pose pose = spec_.start;
        std::size_t i = 0;
        while (t <= t_end_) {
            const OmegaSegment& seg = spec_.segments[i % spec_.segments.size()];
            if (!(seg.duration > 0.0)) {
                throw std::invalid_argument("non-positive segment duration");
            }
            segments_.push_back({t, pose, seg.omega});
            pose = advance_constant(pose, spec_.v_r, seg.omega, seg.duration);
            t += seg.duration;
            ++i;
        }
        segments_.push_back({t, pose, spec_.segments[i % spec_.segments.size()].omega});
    }

    const std::size_t n_nodes =
        static_cast<std::size_t>(std::llround(t_end_ / half_h_)) + 1;
    nodes_.resize(n_nodes);

    if (spec_.kind == OmegaProfile::kSinusoidal) {
        // theta_r is closed form; x_r, y_r integrate by RK4 on the half-h
        // grid (the integrand depends on t only).
        const double w = kTwoPi * spec_.frequency;
        const double swing = (w == 0.0) ? 0.0 : spec_.amplitude / w;
        const auto theta_at = [&](double t) {
            return (w == 0.0) ? spec_.start.theta
                              : spec_.start.theta + swing * (1.0 - std::cos(w * t));
        };
        const auto field = [&](const std::array<double, 2>& /*xy*/, double t) {
            const double th = theta_at(t);
            return std::array<double, 2>{spec_.v_r * std::cos(th), spec_.v_r * std::sin(th)};
        };
        std::array<double, 2> xy{spec_.start.x, spec_.start.y};
        for (std::size_t i = 0; i < n_nodes; ++i) {
            const double t = static_cast<double>(i) * half_h_;
            RefSample& node = nodes_[i];
            node.pose = {xy[0], xy[1], theta_at(t)};
            node.v_r = spec_.v_r;
            node.omega_r = spec_.amplitude * std::sin(w * t);
            node.omegadot_r = spec_.amplitude * w * std::cos(w * t);
            if (i + 1 < n_nodes) xy = rk4_step<2>(xy, t, half_h_, field);
        }
    } else {
        for (std::size_t i = 0; i < n_nodes; ++i) {
            nodes_[i] = closed_form(static_cast<double>(i) * half_h_);
        }
    }
}

const ReferenceTrajectory::Segment& ReferenceTrajectory::segment_at(double t) const {
    // Last segment with t_start <= t.
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double value, const Segment& s) { return value < s.t_start; });
    return *(it - 1);
}

RefSample ReferenceTrajectory::closed_form(double t) const {
    RefSample sample;
    sample.v_r = spec_.v_r;
    switch (spec_.kind) {
        case OmegaProfile::kConstant:
            sample.pose = advance_constant(spec_.start, spec_.v_r, spec_.omega, t);
            sample.omega_r = spec_.omega;
            break;
        case OmegaProfile::kPiecewiseConstant: {
            const Segment& seg = segment_at(t);
            sample.pose = advance_constant(seg.pose_start, spec_.v_r, seg.omega, t - seg.t_start);
            sample.omega_r = seg.omega;  // right-continuous at switches
            break;
        }
        case OmegaProfile::kSinusoidal:
            throw std::logic_error("sinusoidal profile has no closed-form position");
    }
    return sample;
}

const RefSample& ReferenceTrajectory::at_time(double t) const {
    const auto index = std::llround(t / half_h_);
    if (index < 0 || static_cast<std::size_t>(index) >= nodes_.size()) {
        throw DomainFault("reference query t=" + std::to_string(t) +
                          " outside [0, " + std::to_string(t_end_) + "]");
    }
    if (std::abs(t - static_cast<double>(index) * half_h_) > 1e-9) {
        throw DomainFault("reference grid query t=" + std::to_string(t) +
                          " is not a multiple of h/2");
    }
    return nodes_[static_cast<std::size_t>(index)];
}

RefSample ReferenceTrajectory::sample(double t) const {
    if (t < -1e-12 || t > t_end_ + 1e-12) {
        throw DomainFault("reference query t=" + std::to_string(t) +
                          " outside [0, " + std::to_string(t_end_) + "]");
    }
    t = std::clamp(t, 0.0, t_end_);

    const auto index = std::llround(t / half_h_);
    if (index >= 0 && static_cast<std::size_t>(index) < nodes_.size() &&
        std::abs(t - static_cast<double>(index) * half_h_) <= 1e-9) {
        return nodes_[static_cast<std::size_t>(index)];
    }
    if (spec_.kind != OmegaProfile::kSinusoidal) return closed_form(t);

    // Cubic Hermite between the bracketing cache nodes for the position;
    // everything else is closed form.
    const auto i0 = static_cast<std::size_t>(t / half_h_);
    const std::size_t i1 = std::min(i0 + 1, nodes_.size() - 1);
    const RefSample& a = nodes_[i0];
    const RefSample& b = nodes_[i1];
    const double u = (t - static_cast<double>(i0) * half_h_) / half_h_;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);

    const double w = kTwoPi * spec_.frequency;
    const double swing = (w == 0.0) ? 0.0 : spec_.amplitude / w;
    const double theta = (w == 0.0) ? spec_.start.theta
                                    : spec_.start.theta + swing * (1.0 - std::cos(w * t));

    RefSample out;
    out.pose.x = h00 * a.pose.x + h10 * half_h_ * spec_.v_r * std::cos(a.pose.theta) +
                 h01 * b.pose.x + h11 * half_h_ * spec_.v_r * std::cos(b.pose.theta);
    out.pose.y = h00 * a.pose.y + h10 * half_h_ * spec_.v_r * std::sin(a.pose.theta) +
                 h01 * b.pose.y + h11 * half_h_ * spec_.v_r * std::sin(b.pose.theta);
    out.pose.theta = theta;
    out.v_r = spec_.v_r;
    out.omega_r = spec_.amplitude * std::sin(w * t);
    out.omegadot_r = spec_.amplitude * w * std::cos(w * t);
    return out;
}

}  // namespace etpc
