#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "specflow/errors.hpp"
#include "specflow/io.hpp"

namespace specflow {

struct GridSpec {
    double min = -1.0;
    double max = 1.0;
    std::size_t n = 1001;
};

struct McParams {
    int N = 256;      // gaussian / circular size
    int m = 256;      // chiral rows
    int n = 256;      // chiral cols
    int beta = 2;
    int trials = 16;
    int steps = 0;    // circular increments; 0 = minimal admissible
    int bins = 200;
    std::uint64_t seed = 1;
};

struct Scenario {
    std::string ensemble;  // gaussian | chiral | wishart | circular | jacobi
    double tau_hat = 0.0;
    double a_hat = 0.0;
    bool has_a_hat = false;
    SpectralMeasure initial;
    GridSpec grid;
    std::vector<std::string> outputs = {"density"};
    McParams mc;

    void validate() const;
    Json to_json() const;
    static Scenario from_json(const Json& j);
};

// shorthand initial measures: delta:x | pair:a | uniform:a:b | file:path,
// interpreted in the mass convention of the ensemble
SpectralMeasure parse_init(const std::string& text, const std::string& ensemble);

// maps an error code to the CLI exit code contract {0 ok, 2 config, 3 solver, 4 io}
int exit_code_for(ErrorCode code);

// runs all requested outputs; writes artifacts and report.json under out_dir.
// On failure removes this run's partial artifacts and rethrows.
Json run_scenario(const Scenario& sc, const std::filesystem::path& out_dir);

}  // namespace specflow
