#pragma once

// Batch driver: run configurations, single runs, coupling sweeps, frequency
// scans and plot-ready figure tables. Configurations and summaries are JSON.

#include <string>
#include <vector>

#include "qbm/analysis.hpp"
#include "qbm/simulation.hpp"

namespace qbm {

enum class SweepMode { Time, Spectral };

struct SweepAxes {
    std::vector<double> couplings;
    std::vector<double> frequencies;
    SweepMode mode = SweepMode::Time;
};

struct RunConfig {
    SystemSpec spec;
    SolverSettings solver;
    ExcitationProtocol protocol = SwitchOff{};
    double run_length = 0.0;
    double sample_interval = 0.05;
    SweepAxes sweep;
    std::string output_dir;  // empty: nothing is written
    int workers = 0;
    bool convergence_check = false;
    double convergence_tolerance = 1e-5;
    std::string cache_dir;  // interaction tables; empty keeps them in memory

    SimulationConfig simulation() const;
};

/// Throws Error(Config) on malformed text, unknown keys or invalid values.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
/// Fully resolved configuration (every default spelled out).
std::string to_json(const RunConfig& config, int indent = 2);
/// Hash of the physics and numerics of a run (output settings excluded).
std::string config_hash(const RunConfig& config);

struct ModeReport {
    double omega_r = 0.0;
    double omega_R = 0.0;
    double a = 0.0, b = 0.0;
    double weight_r = 0.0;  // a^2 / (a^2 + b^2)
    double weight_R = 0.0;
    double residual_rms = 0.0;
    bool merged = false;
    std::vector<double> fft_frequencies;
    std::string source;  // "fit", "spectral" or "none"
};

struct ConvergenceReport {
    bool checked = false;
    bool accepted = false;
    std::vector<std::string> resolutions;
    double series_delta = 0.0;   // max |U_pot| difference between resolutions
    double omega_r_delta = 0.0;
    double omega_R_delta = 0.0;
};

struct StageError {
    std::string stage;  // config, ground, propagate, analysis, convergence, output
    std::string kind;
    std::string message;
};

struct RunRecord {
    std::string hash;
    double coupling = 0.0;
    bool ok = false;
    bool mapped = false;
    double ground_energy = 0.0;
    double e_infinity = 0.0;
    double norm_drift = 0.0;
    double max_leakage = 0.0;
    double parity_error = 0.0;
    ModeReport modes;
    TwoModeFit fit;
    TimeSeries series;
    ConvergenceReport convergence;
    std::vector<StageError> errors;
    std::vector<std::string> warnings;
    std::string series_path;
    std::string summary_path;
};

/// Ground state, excitation, propagation, observables and the two-mode fit.
/// Failures are recorded with their stage instead of thrown.
RunRecord run_single(const RunConfig& config);
std::string summary_json(const RunRecord& record, const RunConfig& config);

struct SweepPoint {
    double coupling = 0.0;
    bool ok = false;
    double omega_r = 0.0;
    double omega_R = 0.0;
    double weight_r = 0.0;
    double weight_R = 0.0;
    bool mapped = false;
    std::string hash;
    std::string error;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    bool partial = false;
    std::string curve_path;
    std::string summary_path;
};

/// One point per coupling of config.sweep.couplings over the worker pool.
/// Spectral mode uses the in-sector gap of the relative Hamiltonian and
/// omega_R = 2; time mode runs run_single per point.
SweepResult run_sweep(const RunConfig& config);

struct ScanResult {
    ResonanceSpectrum spectrum;
    std::string spectrum_path;
    std::string summary_path;
};

/// Modulation scan over config.sweep.frequencies.
ScanResult run_scan(const RunConfig& config);

/// Writes the columnar table of a figure from summary JSON files produced by
/// run/sweep/scan. Throws Error(Config) listing the required runs when the
/// inputs do not cover the figure. Returns the number of rows written.
std::size_t figure_emit(const std::vector<std::string>& summary_paths, const std::string& figure,
                        const std::string& output_path);

/// Layout line of a figure's table.
std::string figure_columns(const std::string& figure);

}  // namespace qbm
