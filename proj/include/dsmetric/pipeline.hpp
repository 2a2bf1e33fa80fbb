#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsmetric/eval.hpp"
#include "dsmetric/metric_core.hpp"
#include "dsmetric/trajectories.hpp"

namespace dsmetric {

// Command bodies shared by the CLI and the test suites: each renders its
// outputs as strings, so runs can be compared byte for byte.

struct KernelChoice {
    std::string kernel = "linear";   // linear | gaussian | szego
    std::string bandwidth = "auto";  // gaussian only: auto | <positive real>

    // auto bandwidth pools every observable of the given datasets
    KernelSpec resolve(const std::vector<TrajectorySet>& datasets, double* resolved) const;
};

struct ScheduleChoice {
    long tmax = 2000;
    std::string mode = "direct";  // direct | cesaro
    double rel_tol = 1e-4;
    double zero_tol = 1e-12;

    AngleSchedule resolve() const;
};

struct SynthConfig {
    std::string kind;  // rotation | ar | linear
    long T = 100;
    // rotation
    double alpha_mod = 1.0;
    std::optional<std::pair<long long, long long>> theta_frac;
    std::optional<double> theta_irr;
    cplx z0{0.9, 0.0};
    std::vector<long> shifts{0};
    // ar
    std::vector<double> ar_coeffs;
    std::vector<double> ar_init;  // defaults to all ones
    // linear: rows ';'-separated, entries ','-separated, complex as re:im
    std::string a_matrix;
    std::string c_matrix;               // defaults to identity
    std::vector<std::string> x0_specs;  // defaults to the all-ones vector
};

std::string run_synth(const SynthConfig& cfg);  // trajectory CSV

struct MetricConfig {
    std::vector<std::string> inputs;
    KernelChoice kernel;
    int m = 1;
    ScheduleChoice schedule;
    std::string coupling = "grid";
    int jobs = 0;
    std::uint64_t seed = 0;
};

struct MetricOutputs {
    std::string distances_csv;
    std::string report_json;
    int exit_code = 0;  // 0 ok, 2 when some pair failed to converge
};

MetricOutputs run_metric(const MetricConfig& cfg);

struct ClassifyConfig {
    std::string ucr_path;
    KernelChoice kernel{"gaussian", "auto"};
    int m = 2;
    ScheduleChoice schedule;
    std::string coupling = "grid";
    int embed_dim = 2;
    int embed_lag = 1;
    int k = 3;
    int folds = 10;
    int trials = 10;
    std::uint64_t seed = 0;
    int jobs = 0;
};

struct ClassifyOutputs {
    std::string distances_csv;
    std::string report_json;
    double mean_error = 0.0;
};

ClassifyOutputs run_classify(const ClassifyConfig& cfg);

struct OracleConfig {
    std::string kind;  // rotation | ar | subspace
    int m = 1;         // rotation: 1 or 2
    double alpha_mod = 1.0, beta_mod = 1.0;
    std::optional<std::pair<long long, long long>> alpha_frac, beta_frac;
    std::optional<double> alpha_irr, beta_irr;
    cplx z{0.9, 0.0}, w{0.9, 0.0};
    std::vector<double> coeffs1, coeffs2;       // ar
    std::string a1, c1, a2, c2;                 // subspace
};

std::string run_oracle(const OracleConfig& cfg);  // JSON

// shared parsing helpers (CLI flag values)
ComplexMatrix parse_matrix(const std::string& text);
std::vector<cplx> parse_complex_vector(const std::string& text);
std::pair<long long, long long> parse_fraction(const std::string& text);

}  // namespace dsmetric
