#pragma once

// Two approximate models for the relative breathing frequency: a weak
// coupling mean-field model built on the ideal state, and a strong coupling
// model of two Gaussian charge clouds.

#include <string>
#include <vector>

#include "qbm/model.hpp"

namespace qbm {

/// The interaction is averaged over the dilated ideal relative state,
/// E(s) = A/s^2 + B s^2 + <w(s r)>, A = B = E_ideal/2. The curvature of E at
/// its minimum s0 renormalizes the trap: omega_r = sqrt(E''(s0)/(2B)) and
/// Omega_eff = omega_r/2.
struct HartreeResult {
    double coupling = 0.0;
    double omega_eff = 1.0;
    double omega_r = 2.0;
    double scale = 1.0;  // s0
    std::vector<std::string> warnings;
};

HartreeResult hartree_frequency(const SystemSpec& spec);

/// 1D bare coulomb only: Gaussian densities of equal width at separation d,
/// mean-field energy d^2/4 + lambda V(d), omega_r = sqrt(1 + 2 lambda V''(d0)).
struct SemiclassicalResult {
    double coupling = 0.0;
    double relative_variance = 0.0;  // of the relative ground state about r0
    double gaussian_width = 0.0;     // standard deviation of x1 - x2 for one cloud pair
    double d0 = 0.0;
    double v_second = 0.0;
    double omega_r = 0.0;
    std::vector<std::string> warnings;
};

/// `width` < 0 takes the width from diagonalizing the relative problem
/// (basis of `basis_size` functions); width = 0 is the point-charge limit.
SemiclassicalResult semiclassical_frequency(const SystemSpec& spec, double width = -1.0, int basis_size = 200);

/// Principal value integral of g(u)/(u + d) for a centered Gaussian g with
/// standard deviation `width`.
double semiclassical_potential(double d, double width);

}  // namespace qbm
