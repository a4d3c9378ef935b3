// config.hpp — JSON run configuration: parsing, validation, emission, and the
// task runner behind the command-line tool.

#pragma once

#include <string>
#include <vector>

#include "escat/scattering.hpp"

namespace escat {

struct SweepGrid {
    double min{-10.0};
    double max{10.0};
    int points{201};

    std::vector<double> values() const;
};

struct EvolveParams {
    double t_final{10.0};
    double dt{0.01};
    int sample_every{1};
    Eigen::MatrixXcd initial; // empty = pure lowest collective ground state
};

struct RunConfig {
    SystemSpec system;
    std::string task{"spectrum"}; // spectrum | evolve | mint-golden
    InputField drive;
    SweepGrid sweep;
    std::vector<Detector> detectors;
    EvolveParams evolve;
    std::string output_prefix{"run"};
    double weak_drive_warn{0.1};
};

// Strict parse: unknown keys and malformed values raise SchemaError carrying
// the JSON path of the offending field.
RunConfig parse_config(const std::string& text);

// Canonical emission; parse(emit(config)) reproduces the config.
std::string emit_config(const RunConfig& config);

// Deterministic FNV-1a hash of the canonical form, hex-encoded.
std::string config_hash(const RunConfig& config);

// Executes the configured task (optionally overridden), writing CSV results
// and a JSON metadata sidecar under out_dir/<prefix>_*. Returns 0 on success,
// 1 on user errors, 2 on internal errors; on failure writes a machine-readable
// error JSON to `error_out` if non-null.
int run(const RunConfig& config, const std::string& out_dir, int threads,
        const std::string& task_override = "", std::string* error_out = nullptr);

} // namespace escat
