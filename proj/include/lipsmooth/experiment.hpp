#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lipsmooth/metrics.hpp"

namespace lipsmooth {

// Everything a stage run produced.  `config` echoes the fully resolved
// parameters (defaults filled in), so the pair (config, seed) determines the
// metrics exactly; wall-clock timings live outside the deterministic payload
// and are serialized to a separate sidecar.
struct ExperimentReport {
    std::string stage;
    std::uint64_t seed = 0;
    nlohmann::ordered_json config;
    std::vector<MetricRow> metrics;
    std::vector<std::pair<std::string, double>> timings_ms;
    bool pass = false;
};

// Stage names accepted by run_stage, in report order.
const std::vector<std::string>& stage_names();

// Execute one named pipeline (suppart-check | core-approx | tube-check |
// crowns | lasry-lions | hilbert-e2e) with parameters from `config`
// (missing keys take the acceptance defaults).  "report" runs all six.
// Config violations throw std::invalid_argument named after the violated
// invariant.
ExperimentReport run_stage(const std::string& stage, nlohmann::ordered_json config);

// Load a JSON config file with a "stage" key and dispatch.
ExperimentReport run_experiment(const std::string& config_path);

// Write <out_dir>/metrics.csv and <out_dir>/report.json (both byte-identical
// across reruns of the same config and seed) plus <out_dir>/timings.csv.
void write_outputs(const ExperimentReport& rep, const std::string& out_dir);

}  // namespace lipsmooth
