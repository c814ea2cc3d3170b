#include "etpc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "etpc/rng.hpp"

namespace etpc {

RunMetrics compute_metrics(const SimTrace& trace, double epsilon_sq) {
    RunMetrics m;
    if (trace.t.empty()) return m;
    const double T_e = trace.duration();

    std::size_t crossing = trace.V.size();
    for (std::size_t i = 0; i < trace.V.size(); ++i) {
        if (trace.V[i] <= epsilon_sq) {
            crossing = i;
            break;
        }
    }
    m.converged = crossing < trace.V.size();
    m.total_events = static_cast<int>(trace.events.size());

    if (m.converged) {
        m.T_c = trace.t[crossing];
        double peak = 0.0;
        for (std::size_t i = crossing; i < trace.V.size(); ++i) {
            peak = std::max(peak, trace.V[i]);
        }
        m.eps1_sq = peak;
        int transient = 0;
        for (const auto& ev : trace.events) {
            if (ev.t <= m.T_c + 1e-12) ++transient;
        }
        m.N_t = transient;
        m.N_s = m.total_events - transient;
    } else {
        m.N_t = m.total_events;
        m.N_s = 0;
    }

    double tail_peak = 0.0;
    const double tail_start = 0.5 * T_e;
    for (std::size_t i = 0; i < trace.V.size(); ++i) {
        if (trace.t[i] >= tail_start - 1e-12) tail_peak = std::max(tail_peak, trace.V[i]);
    }
    m.v_tail_max = tail_peak;

    for (const auto& ev : trace.events) m.payload_total += ev.payload_bytes;

    if (trace.events.size() >= 2) {
        double min_gap = std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (std::size_t k = 1; k < trace.events.size(); ++k) {
            const double gap = trace.events[k].t - trace.events[k - 1].t;
            min_gap = std::min(min_gap, gap);
            sum += gap;
        }
        m.min_gap = min_gap;
        m.mean_gap = sum / static_cast<double>(trace.events.size() - 1);
    }
    return m;
}

std::vector<ErrorState> sample_initial_conditions(std::size_t n, std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    std::vector<ErrorState> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ErrorState X;
        X.x_e = rng.uniform(-2.0, 2.0);
        X.y_e = rng.uniform(-2.0, 2.0);
        X.theta_e = rng.uniform(-0.2, 0.2);
        out.push_back(X);
    }
    return out;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    q = std::clamp(q, 0.0, 1.0);
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

Quartiles quartiles_of(std::vector<double> values) {
    Quartiles out;
    out.n = values.size();
    if (values.empty()) return out;
    std::sort(values.begin(), values.end());
    const auto at = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return values[lo] + frac * (values[hi] - values[lo]);
    };
    out.q1 = at(0.25);
    out.median = at(0.5);
    out.q3 = at(0.75);
    return out;
}

}  // namespace etpc
