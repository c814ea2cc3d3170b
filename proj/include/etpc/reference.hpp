#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "etpc/types.hpp"

namespace etpc {

enum class OmegaProfile { kConstant, kPiecewiseConstant, kSinusoidal };

/// One leg of a piecewise-constant angular-velocity profile. Segments are
/// cycled to cover any requested duration.
struct OmegaSegment {
    double duration = 0.0;  // s
    double omega = 0.0;     // rad/s
};

/// Parameterization of one reference trajectory family. The reference
/// speed v_r is constant along the whole path.
struct PathSpec {
    std::string name = "path";
    OmegaProfile kind = OmegaProfile::kConstant;
    double v_r = 0.15;                    // m/s
    double omega = 0.0;                   // constant profile only, rad/s
    std::vector<OmegaSegment> segments;   // piecewise profile only
    double amplitude = 0.0;               // sinusoidal profile only, rad/s
    double frequency = 0.0;               // sinusoidal profile only, Hz
    Pose start{};
    double duration = 60.0;               // s
};

/// Result of checking the reference-input bounds: M bounds all of
/// |v_r|, |omega_r|, |vdot_r|, |omegadot_r| on the grid, c is the lower
/// bound on |v_r|. Piecewise omega jumps are warnings, not violations;
/// the derivative bound fails only on a measure-zero set there.
struct A1Report {
    bool ok = false;
    double M = 0.0;
    double c = 0.0;
    std::string violation;
    std::vector<std::string> warnings;
};

A1Report validate_A1(const PathSpec& spec, double h = 0.005);

/// Reference trajectory realized on a fixed grid of step h/2 covering
/// [0, t_end]. Half-step resolution exists so that RK4 stage times of an
/// h-stepped integration always land on cache nodes. Immutable after
/// construction; shareable across threads.
class ReferenceTrajectory {
public:
    ReferenceTrajectory(PathSpec spec, double t_end, double h);

    const PathSpec& spec() const { return spec_; }
    double h() const { return h_; }
    double t_end() const { return t_end_; }
    std::size_t node_count() const { return nodes_.size(); }

    /// Sample at a grid node; t must be a multiple of h/2 within 1e-9.
    /// This is the hot path used by the simulation engine.
    const RefSample& at_time(double t) const;

    /// Sample at arbitrary t in [0, t_end]. Exact closed form for the
    /// constant and piecewise profiles; the sinusoidal profile uses cubic
    /// Hermite interpolation of the cached positions between nodes.
    RefSample sample(double t) const;

private:
    struct Segment {
        double t_start = 0.0;
        Pose pose_start{};
        double omega = 0.0;
    };

    RefSample closed_form(double t) const;
    const Segment& segment_at(double t) const;

    PathSpec spec_;
    double h_ = 0.0;
    double half_h_ = 0.0;
    double t_end_ = 0.0;
    std::vector<Segment> segments_;   // piecewise profile, expanded over [0, t_end]
    std::vector<RefSample> nodes_;    // step h/2
};

}  // namespace etpc
