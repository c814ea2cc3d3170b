#include "etpc/config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace etpc {

namespace {

std::string kind_name(OmegaProfile kind) {
    switch (kind) {
        case OmegaProfile::kConstant: return "constant-omega";
        case OmegaProfile::kPiecewiseConstant: return "piecewise-constant-omega";
        case OmegaProfile::kSinusoidal: return "sinusoidal-omega";
    }
    return "?";
}

OmegaProfile kind_from_name(const std::string& name) {
    if (name == "constant-omega") return OmegaProfile::kConstant;
    if (name == "piecewise-constant-omega") return OmegaProfile::kPiecewiseConstant;
    if (name == "sinusoidal-omega") return OmegaProfile::kSinusoidal;
    throw std::invalid_argument("unknown path kind: " + name);
}

}  // namespace

SimConfig SimConfig::defaults() {
    SimConfig cfg;

    PathSpec circle;
    circle.name = "circle";
    circle.kind = OmegaProfile::kConstant;
    circle.omega = 0.15;  // radius 1 m at v_r = 0.15 m/s

    PathSpec rectangle;
    rectangle.name = "rounded_rect";
    rectangle.kind = OmegaProfile::kPiecewiseConstant;
    rectangle.segments = {{10.0, 0.0}, {5.235, 0.3}, {6.0, 0.0}, {5.235, 0.3}};

    PathSpec s_curve;
    s_curve.name = "s_curve";
    s_curve.kind = OmegaProfile::kSinusoidal;
    s_curve.amplitude = 0.2;
    s_curve.frequency = 0.05;

    PathSpec zigzag;
    zigzag.name = "zigzag";
    zigzag.kind = OmegaProfile::kPiecewiseConstant;
    zigzag.segments = {{4.0, 0.0}, {3.49, 0.45}, {4.0, 0.0}, {3.49, -0.45}};

    cfg.paths = {circle, rectangle, s_curve, zigzag};
    for (auto& path : cfg.paths) {
        path.v_r = 0.15;
        path.duration = cfg.T_e;
    }
    return cfg;
}

SimConfig SimConfig::from_json(const nlohmann::json& j) {
    SimConfig cfg = defaults();
    cfg.seed = j.value("seed", cfg.seed);
    cfg.n_initial_conditions = j.value("n_initial_conditions", cfg.n_initial_conditions);
    cfg.T_e = j.value("T_e", cfg.T_e);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.ttc_period = j.value("ttc_period", cfg.ttc_period);
    if (j.contains("strategies")) {
        cfg.strategies = j.at("strategies").get<std::vector<std::string>>();
    }
    if (j.contains("params")) {
        const auto& p = j.at("params");
        cfg.params.c1 = p.value("c1", cfg.params.c1);
        cfg.params.c2 = p.value("c2", cfg.params.c2);
        cfg.params.c3 = p.value("c3", cfg.params.c3);
        cfg.params.gamma = p.value("gamma", cfg.params.gamma);
        cfg.params.sigma = p.value("sigma", cfg.params.sigma);
        cfg.params.epsilon_sq = p.value("epsilon_sq", cfg.params.epsilon_sq);
        cfg.params.delta1 = p.value("delta1", cfg.params.delta1);
        cfg.params.delta2 = p.value("delta2", cfg.params.delta2);
        cfg.params.T = p.value("T", cfg.params.T);
        cfg.params.p = p.value("p", cfg.params.p);
        cfg.params.h = p.value("h", cfg.params.h);
    }
    cfg.params.validate();
    if (j.contains("paths")) {
        cfg.paths.clear();
        for (const auto& pj : j.at("paths")) {
            PathSpec path;
            path.name = pj.value("name", std::string("path") +
                                             std::to_string(cfg.paths.size() + 1));
            path.kind = kind_from_name(pj.at("kind").get<std::string>());
            path.v_r = pj.value("v_r", 0.15);
            path.omega = pj.value("omega", 0.0);
            path.amplitude = pj.value("amplitude", 0.0);
            path.frequency = pj.value("frequency", 0.0);
            if (pj.contains("segments")) {
                for (const auto& seg : pj.at("segments")) {
                    path.segments.push_back({seg.at(0).get<double>(), seg.at(1).get<double>()});
                }
            }
            if (pj.contains("start")) {
                const auto& s = pj.at("start");
                path.start = {s.at(0).get<double>(), s.at(1).get<double>(),
                              s.at(2).get<double>()};
            }
            path.duration = cfg.T_e;
            cfg.paths.push_back(std::move(path));
        }
    } else {
        for (auto& path : cfg.paths) path.duration = cfg.T_e;
    }
    if (cfg.paths.empty()) throw std::invalid_argument("config has no paths");
    for (std::size_t i = 0; i < cfg.paths.size(); ++i) {
        for (std::size_t j = i + 1; j < cfg.paths.size(); ++j) {
            if (cfg.paths[i].name == cfg.paths[j].name) {
                throw std::invalid_argument("duplicate path name: " + cfg.paths[i].name);
            }
        }
    }
    return cfg;
}

SimConfig SimConfig::load(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config: " + file);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

nlohmann::json SimConfig::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["n_initial_conditions"] = n_initial_conditions;
    j["T_e"] = T_e;
    j["threads"] = threads;
    j["ttc_period"] = ttc_period;
    j["strategies"] = strategies;
    j["rng"] = "xoshiro256++ seeded via splitmix64; uniforms are the top 53 bits / 2^53";
    j["params"] = {{"c1", params.c1},       {"c2", params.c2},
                   {"c3", params.c3},       {"gamma", params.gamma},
                   {"sigma", params.sigma}, {"epsilon_sq", params.epsilon_sq},
                   {"delta1", params.delta1}, {"delta2", params.delta2},
                   {"T", params.T},         {"p", params.p},
                   {"h", params.h}};
    j["paths"] = nlohmann::json::array();
    for (const auto& path : paths) {
        nlohmann::json pj;
        pj["name"] = path.name;
        pj["kind"] = kind_name(path.kind);
        pj["v_r"] = path.v_r;
        pj["start"] = {path.start.x, path.start.y, path.start.theta};
        switch (path.kind) {
            case OmegaProfile::kConstant:
                pj["omega"] = path.omega;
                break;
            case OmegaProfile::kPiecewiseConstant: {
                auto segments = nlohmann::json::array();
                for (const auto& seg : path.segments) {
                    segments.push_back({seg.duration, seg.omega});
                }
                pj["segments"] = segments;
                break;
            }
            case OmegaProfile::kSinusoidal:
                pj["amplitude"] = path.amplitude;
                pj["frequency"] = path.frequency;
                break;
        }
        j["paths"].push_back(pj);
    }
    return j;
}

bool SimConfig::strategy_enabled(const std::string& name) const {
    return std::find(strategies.begin(), strategies.end(), name) != strategies.end();
}

const PathSpec* SimConfig::find_path(const std::string& name) const {
    for (const auto& path : paths) {
        if (path.name == name) return &path;
    }
    return nullptr;
}

}  // namespace etpc
