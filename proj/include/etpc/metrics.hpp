#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "etpc/simulation.hpp"
#include "etpc/types.hpp"

namespace etpc {

/// Per-run evaluation metrics. T_c is the first grid time with
/// V <= epsilon^2; the transient period is [0, T_c] and the steady-state
/// period (T_c, T_e]. eps1_sq = max V over [T_c, T_e] is only meaningful
/// when the run converged. v_tail_max = max V over [T_e/2, T_e] is always
/// defined and serves as the observed bound for runs that never converge.
struct RunMetrics {
    bool converged = false;
    double T_c = std::numeric_limits<double>::quiet_NaN();
    int N_t = 0;
    int N_s = 0;
    double eps1_sq = std::numeric_limits<double>::quiet_NaN();
    double v_tail_max = 0.0;
    int total_events = 0;
    double min_gap = std::numeric_limits<double>::quiet_NaN();
    double mean_gap = std::numeric_limits<double>::quiet_NaN();
    std::int64_t payload_total = 0;
};

RunMetrics compute_metrics(const SimTrace& trace, double epsilon_sq);

/// n i.i.d. initial tracking errors, uniform on
/// (-2, 2) m x (-2, 2) m x (-0.2, 0.2) rad, drawn with xoshiro256++
/// seeded from `seed`. Identical seed, identical list.
std::vector<ErrorState> sample_initial_conditions(std::size_t n, std::uint64_t seed);

/// Quantile by linear interpolation between closest ranks
/// (position q*(n-1)). NaN for an empty sample.
double quantile(std::vector<double> values, double q);

struct Quartiles {
    double q1 = std::numeric_limits<double>::quiet_NaN();
    double median = std::numeric_limits<double>::quiet_NaN();
    double q3 = std::numeric_limits<double>::quiet_NaN();
    std::size_t n = 0;
};

Quartiles quartiles_of(std::vector<double> values);

}  // namespace etpc
