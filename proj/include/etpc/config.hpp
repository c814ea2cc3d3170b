#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "etpc/controller.hpp"
#include "etpc/reference.hpp"

namespace etpc {

/// Run configuration: parameter set, path catalog, batch protocol knobs.
/// Defaults reproduce the primary simulation profile (gamma=100, c1=0.02,
/// c2=0.05, c3=0.01, sigma=0.5, epsilon^2=0.01, T=1 s, h=5 ms, p=1,
/// delta=0) with the four-path catalog at v_r = 0.15 m/s.
struct SimConfig {
    std::uint64_t seed = 1;
    std::size_t n_initial_conditions = 1000;
    double T_e = 60.0;
    unsigned threads = 0;      // 0 = hardware concurrency
    double ttc_period = 0.5;   // stand-alone TTC runs only
    ControllerParams params{};
    std::vector<std::string> strategies = {"etc", "etpc", "ttc1", "ttc2"};
    std::vector<PathSpec> paths;

    static SimConfig defaults();
    static SimConfig from_json(const nlohmann::json& j);
    static SimConfig load(const std::string& file);

    nlohmann::json to_json() const;

    bool strategy_enabled(const std::string& name) const;
    const PathSpec* find_path(const std::string& name) const;
};

}  // namespace etpc
