#pragma once

// End-to-end time-domain runs: ground state, excitation, propagation and
// sampled observables, for every solver.

#include <string>
#include <vector>

#include "qbm/analysis.hpp"
#include "qbm/excitation.hpp"
#include "qbm/grid.hpp"
#include "qbm/model.hpp"
#include "qbm/observables.hpp"

namespace qbm {

enum class Method {
    Grid,              // relative line / radial grid plus center-of-mass lines
    TwoParticleGrid,   // full (x1, x2) grid, 1D only
    Basis,             // relative and center-of-mass oscillator bases
    TwoParticleBasis,  // symmetrized product basis, 1D only
};
const char* to_string(Method m);
Method method_from_string(const std::string& s);

class InteractionCache;

struct SolverSettings {
    Method method = Method::Basis;
    int points = 1201;          // relative axis (two-particle grid: per axis)
    double extent = 0.0;        // half-width; 0 picks 4 r0 + 10 (radial: the full extent)
    int com_points = 801;
    double com_extent = 8.0;
    double dt = 0.005;          // grid time step
    double basis_dt = 0.05;     // basis time step
    int basis_size = 200;
    int com_basis_size = 40;
    int single_particle = 30;
    GroundStateOptions ground{0.01, 1e-14, 200000};
};

struct SimulationConfig {
    SystemSpec spec;
    SolverSettings solver;
    ExcitationProtocol protocol;
    double run_length = 0.0;       // 0: default for the protocol
    double sample_interval = 0.05;
    InteractionCache* cache = nullptr;  // interaction tables; null uses the shared default
};

struct SimulationResult {
    TimeSeries series;
    double ground_energy = 0.0;
    bool mapped = false;        // symmetric 1D bare case served by the Bose-Fermi mapping
    double norm_drift = 0.0;    // |norm(T) - norm(0)|
    double max_leakage = 0.0;   // basis methods
    double parity_error = 0.0;  // grid methods, at the end of the run
    long steps = 0;
    std::vector<std::string> warnings;
};

SimulationResult simulate(const SimulationConfig& config);

/// Ground-state energy of the full problem (relative + center of mass) for
/// the configured solver.
double ground_energy(const SystemSpec& spec, const SolverSettings& solver, bool* mapped = nullptr);

/// Two-mode fit of the U_pot channel after the excitation has ended.
TwoModeFit fit_breathing_modes(const SimulationResult& result, const ExcitationProtocol& protocol,
                               const std::string& channel = "U_pot");

/// One modulation run per frequency, in parallel; the template's
/// Modulation frequency is replaced. Failed points are skipped and the
/// spectrum is flagged partial.
ResonanceSpectrum scan_resonance(const SimulationConfig& base, const std::vector<double>& omegas, int workers = 0,
                                 double window = 50.0);

}  // namespace qbm
