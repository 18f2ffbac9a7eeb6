#pragma once

#include <span>
#include <vector>

namespace qbm {

/// Normalized Hermite functions h_0..h_{count-1} at x (eigenfunctions of
/// -1/2 d^2/dx^2 + x^2/2), written into `out`.
void hermite_functions(double x, std::span<double> out);

/// Normalized 2D radial oscillator functions f_{n,m}(x), n = 0..count-1:
/// f = sqrt(2 n!/(n+|m|)!) x^|m| L_n^|m|(x^2) exp(-x^2/2), with
/// integral f^2 x dx = 1. Eigenfunctions of the unit 2D oscillator with
/// energy 2n + |m| + 1.
void radial_oscillator_functions(double x, int m, std::span<double> out);

}  // namespace qbm
