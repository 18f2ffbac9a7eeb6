#pragma once

#include <functional>
#include <vector>

namespace qbm {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    double integrate(const std::function<double(double)>& f) const;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// n-point Gauss-Hermite rule for weight exp(-x^2), via Golub-Welsch.
QuadratureRule gauss_hermite(int n);

/// Composite Gauss-Legendre rule on [0, upper] with panels of width at most
/// `panel` and geometric refinement towards the origin down to `finest`
/// (finest <= 0 disables the grading).
QuadratureRule composite_half_line(double upper, double panel, double finest, int order);

}  // namespace qbm
