#pragma once

// CSV and manifest writers. Floats are printed like %.<precision>g (17 by
// default); files use LF line endings.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcemon/config.hpp"
#include "dcemon/fock.hpp"
#include "dcemon/monitor.hpp"
#include "dcemon/spectral.hpp"

namespace dcemon {

const char* code_version();

std::string format_double(double x, int precision = 17);

struct CsvOptions {
    bool absolute_time = false;
    int precision = 17;
};

struct OracleColumn {
    std::string name;  // written as <name>_oracle
    std::vector<std::optional<double>> values;
};

// t_dimensionless|t_absolute, n_mean, mandel_q, xvar_plus, xvar_minus, P_1..P_N, *_oracle
std::string series_csv(const ObservableSeries& series, const CsvOptions& options,
                       const std::vector<OracleColumn>& oracle = {});

// One row per photon number: time, n, probability.
std::string snapshot_csv(const ObservableSeries& series, std::size_t index, const CsvOptions& options);

// Closed-form overlays that apply to this configuration (empty: none apply).
std::vector<OracleColumn> oracle_columns(const ExperimentConfig& config, const ObservableSeries& series);

using Manifest = std::vector<std::pair<std::string, std::string>>;
std::string manifest_text(const Manifest& manifest);

std::string catalog_csv(const std::vector<ResonanceEntry>& entries, int precision = 17);
std::string spectrum_csv(const DressedCouplings& couplings, int precision = 17);
std::string coupling_csv(const DressedCouplings& couplings, int precision = 17);
std::string clicks_csv(const std::vector<TrajectoryRecord>& trajectories, const CsvOptions& options,
                       double epsilon);
std::string ensemble_csv(const EnsembleSeries& series, const CsvOptions& options, double epsilon);

// Writes bytes verbatim; throws IoError on failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace dcemon
