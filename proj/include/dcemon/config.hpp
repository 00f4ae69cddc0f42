#pragma once

// Declarative experiment description (JSON) for the command-line runner.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcemon/evolve.hpp"
#include "dcemon/model.hpp"

namespace dcemon {

struct MonitorConfig {
    bool enabled = false;
    std::vector<double> rates;  // one per adjacent transition; a single value is broadcast
    int trajectories = 100;
    std::uint64_t seed = 0;
    double dt = 0.0;  // 0: inherit the evolution step
    int max_clicks = 0;
};

struct OutputConfig {
    bool absolute_time = false;  // CSV time axis; default is epsilon*t
    bool oracle = true;          // emit *_oracle columns when a closed form applies
    int precision = 17;
    std::string series = "series.csv";
    std::string snapshot_prefix = "photons_";
};

struct ExperimentConfig {
    DetectorSpec detector;
    ModulationSpec modulation;
    EvolutionConfig evolution;  // times stored in absolute units
    MonitorConfig monitor;
    OutputConfig output;

    bool operator==(const ExperimentConfig& other) const;
};

// Throws ConfigError listing every problem, each prefixed with its key path.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical form; parse_config(to_json(c).dump()) == c.
nlohmann::json to_json(const ExperimentConfig& config);

// FNV-1a of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace dcemon
