#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "etpc/config.hpp"
#include "etpc/metrics.hpp"

namespace etpc {

/// One completed (or faulted) run inside a batch.
struct RunRecord {
    std::string path_name;
    std::string strategy;      // "etc", "etpc", "ttc1", "ttc2"
    std::size_t ic_index = 0;
    ErrorState ic{};
    double ttc_period = 0.0;   // derived runs only
    bool fault = false;
    std::string fault_message;
    RunMetrics metrics{};
};

/// Aggregates of a full batch; serializes to a deterministic JSON
/// document (byte-identical for identical config + seed).
struct BatchSummary {
    nlohmann::json document;
    std::string to_string() const { return document.dump(2) + "\n"; }
};

/// Called after each completed (path, initial-condition) job with the
/// number of finished jobs and the total. May be invoked from worker
/// threads; keep it cheap and thread-safe.
using BatchProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Executes the full protocol: every enabled strategy on every catalog
/// path for every sampled initial condition, with TTC1/TTC2 periods
/// derived per corresponding ETC/ETPC run. Runs execute concurrently;
/// aggregation order is fixed by (path, ic) index, so the summary does
/// not depend on thread scheduling. Faulted runs are recorded, not fatal.
BatchSummary run_batch(const SimConfig& config, std::vector<RunRecord>* records_out,
                       const BatchProgress& progress = nullptr);

/// Per-run CSV, one row per RunRecord.
void write_runs_csv(const std::vector<RunRecord>& records, const std::string& path);

}  // namespace etpc
