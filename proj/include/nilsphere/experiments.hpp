#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nilsphere/group.hpp"

namespace nilsphere {

// One experiment invocation: name, model selection, numeric parameters,
// output directory for CSV tables, and the seed that fixes every random
// sample drawn during the run.
struct ExperimentConfig {
    std::string experiment;
    std::string group = "heisenberg1";
    std::string surface = "paraboloid";
    std::map<std::string, double> parameters;
    std::string output_dir = ".";
    std::uint64_t seed = 7;
    int threads = 0;

    double param(const std::string& key, double fallback) const;

    // parses the JSON config; relative output_dir is resolved against the
    // directory containing the file
    static ExperimentConfig from_json_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text,
                                           const std::string& base_dir);
};

// A single asserted bound: measured value against a closed window
// [lower, upper] (one side may be unbounded).
struct CheckResult {
    std::string name;
    double measured = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool has_lower = false;
    bool has_upper = false;
    bool pass = false;
};

struct RunReport {
    std::string experiment;
    std::string version;
    std::uint64_t seed = 0;
    int threads = 0;
    std::vector<CheckResult> checks;
    std::map<std::string, double> values;  // fitted constants and exponents
    std::vector<std::string> csv_files;
    double elapsed_seconds = 0.0;
    bool pass = false;        // all checks passed
    std::string error;        // non-empty on config/validation failure

    std::string to_json() const;
    void check_le(const std::string& name, double measured, double bound);
    void check_ge(const std::string& name, double measured, double bound);
    void check_in(const std::string& name, double measured, double lo, double hi);
    void check_flag(const std::string& name, bool ok);
};

struct ExperimentInfo {
    std::string name;
    std::string summary;
    std::string parameters;  // accepted numeric parameters with defaults
};

// stable (sorted) catalog of the available experiments
std::vector<ExperimentInfo> list_experiments();

// group builders addressable from configs: heisenberg1, heisenberg2,
// heisenberg1-doubled, appendix, htype, quaternionic, abelian
StepTwoGroup make_named_group(const std::string& name);

// Dispatches to the named experiment, writes CSV tables plus a JSON report
// into output_dir, and returns the report. Config problems are reported via
// RunReport::error; numeric failures via pass = false.
RunReport run_experiment(const ExperimentConfig& cfg);

}  // namespace nilsphere
