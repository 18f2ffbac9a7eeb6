#pragma once

// Two particles in an isotropic harmonic trap with a (softened) power-law
// repulsion. Lengths, times and energies are in units of the oscillator
// length, the inverse trap frequency and hbar*Omega.

#include <array>
#include <span>
#include <string>

namespace qbm {

enum class Symmetry { Symmetric, Antisymmetric };

enum class Frame { TwoParticle, Relative, CenterOfMass };

const char* to_string(Symmetry s);
const char* to_string(Frame f);
Symmetry symmetry_from_string(const std::string& s);

struct SystemSpec {
    int dimension = 1;
    double coupling = 0.0;  // lambda
    Symmetry symmetry = Symmetry::Antisymmetric;
    double softening = 0.0;            // kappa
    double interaction_exponent = 1.0;  // l, w(r) ~ r^-l

    static constexpr double trap_frequency = 1.0;

    /// Throws Error(Config) when a field is out of range.
    void validate() const;

    /// True when the interaction has no finite value at zero separation.
    bool singular_at_contact() const { return softening == 0.0 && coupling != 0.0; }
};

/// lambda / (r^2 + kappa^2)^(l/2). Throws Error(Singular) at r = 0 with kappa = 0.
double interaction(const SystemSpec& spec, double separation);
/// First and second derivatives of the interaction with respect to separation.
double interaction_d1(const SystemSpec& spec, double separation);
double interaction_d2(const SystemSpec& spec, double separation);

/// r1^2/2 + r2^2/2 + w(|r1 - r2|). Both spans must have spec.dimension entries.
double total_potential(const SystemSpec& spec, std::span<const double> r1,
                       std::span<const double> r2);

/// Potential of the relative problem: r^2/4 + w(r).
double relative_potential(const SystemSpec& spec, double separation);

/// Potential of the center-of-mass problem: R^2 (independent of the coupling).
inline double com_potential(double radius) { return radius * radius; }

struct ClassicalEquilibrium {
    double separation;  // r0
    double frequency;   // small-oscillation frequency of the relative motion
};

/// Minimum of relative_potential and the harmonic frequency about it
/// (relative mass 1/2). For a bare power law the frequency is sqrt(l + 2),
/// independent of the coupling.
ClassicalEquilibrium classical_equilibrium_and_frequency(const SystemSpec& spec);

/// Pair coordinates: R = (r1 + r2)/2, r = r1 - r2, and the inverse map.
struct PairCoordinates {
    std::array<double, 2> com{};
    std::array<double, 2> relative{};
};

PairCoordinates to_pair(std::span<const double> r1, std::span<const double> r2);
void from_pair(const PairCoordinates& pair, std::span<double> r1, std::span<double> r2);

/// Default half-width of relative-coordinate boxes: 4*r0 + 10 (r0 = 0 for lambda = 0).
double default_relative_extent(const SystemSpec& spec);

}  // namespace qbm
