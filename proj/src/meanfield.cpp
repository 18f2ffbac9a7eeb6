#include "qbm/meanfield.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qbm/basis.hpp"
#include "qbm/error.hpp"
#include "qbm/quadrature.hpp"

namespace qbm {

HartreeResult hartree_frequency(const SystemSpec& input) {
    input.validate();
    HartreeResult out;
    out.coupling = input.coupling;
    if (input.coupling > 1.0) {
        std::ostringstream os;
        os << "lambda = " << input.coupling << " is outside the perturbative regime (lambda <~ 1)";
        out.warnings.push_back(os.str());
    }
    if (input.coupling == 0.0) return out;

    const SystemSpec spec = mapped_spec(input);
    const Basis basis = relative_basis(spec, 2);
    const double e_ideal = basis.ideal_energies()[0];
    const double a = 0.5 * e_ideal, b = 0.5 * e_ideal;

    // density of the ideal sector state on a half-line rule
    const double finest = spec.softening > 0.0 ? std::min(0.25 * spec.softening, 0.02) : 0.02;
    const QuadratureRule rule = composite_half_line(14.0, 0.25, finest, 20);
    std::vector<double> r(rule.size()), weight(rule.size());
    double vals[1];
    for (std::size_t i = 0; i < rule.size(); ++i) {
        r[i] = rule.nodes[i];
        basis_functions(basis, r[i], std::span<double>(vals, 1));
        const double measure = basis.kind == BasisKind::Radial ? r[i] : 2.0;
        weight[i] = rule.weights[i] * measure * vals[0] * vals[0];
    }
    auto moment = [&](double s, int order) {
        double sum = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double x = s * r[i];
            switch (order) {
                case 1: sum += weight[i] * r[i] * interaction_d1(spec, x); break;
                default: sum += weight[i] * r[i] * r[i] * interaction_d2(spec, x); break;
            }
        }
        return sum;
    };
    auto slope = [&](double s) { return -2.0 * a / (s * s * s) + 2.0 * b * s + moment(s, 1); };

    double hi = 1.0;
    while (slope(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e6) throw Error(ErrorKind::Numeric, "mean-field energy has no minimum");
    }
    const double lo = hi > 1.0 ? 0.5 * hi : 0.25;
    boost::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        slope, lo, hi, boost::math::tools::eps_tolerance<double>(52), iterations);
    const double s0 = 0.5 * (bracket.first + bracket.second);
    const double curvature = 6.0 * a / std::pow(s0, 4) + 2.0 * b + moment(s0, 2);
    if (!(curvature > 0.0)) throw Error(ErrorKind::Numeric, "non-positive effective curvature");
    out.scale = s0;
    out.omega_r = std::sqrt(curvature / (2.0 * b));
    out.omega_eff = 0.5 * out.omega_r;
    return out;
}

namespace {

constexpr double kReach = 12.0;  // Gaussian widths covered by the quadrature


// t-integration rule valid for separations near d_ref.
QuadratureRule potential_rule(double d_ref, double width, double margin = 0.0) {
    const double lo = std::max(0.0, d_ref - 1.2 * kReach * width - margin);
    const double hi = d_ref + 1.2 * kReach * width + margin;
    const int panels = 64;
    const QuadratureRule base = gauss_legendre(20);
    QuadratureRule rule;
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p)
        for (std::size_t i = 0; i < base.size(); ++i) {
            rule.nodes.push_back(lo + h * (p + 0.5 * (base.nodes[i] + 1.0)));
            rule.weights.push_back(0.5 * h * base.weights[i]);
        }
    return rule;
}

double potential_on(const QuadratureRule& rule, double d, double width) {
    if (width == 0.0) return 1.0 / d;
    const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * width);
    const double inv = 0.5 / (width * width);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double t = rule.nodes[i];
        const double a = t - d, b = t + d;
        sum += rule.weights[i] * (std::exp(-a * a * inv) - std::exp(-b * b * inv)) / t;
    }
    return norm * sum;
}

}  // namespace

double semiclassical_potential(double d, double width) {
    if (!(d > 0.0)) throw Error(ErrorKind::Config, "separation must be positive");
    if (width < 0.0) throw Error(ErrorKind::Config, "width must be non-negative");
    if (width == 0.0) return 1.0 / d;
    return potential_on(potential_rule(d, width), d, width);
}

SemiclassicalResult semiclassical_frequency(const SystemSpec& spec, double width, int basis_size) {
    spec.validate();
    if (spec.dimension != 1 || spec.interaction_exponent != 1.0 || spec.softening != 0.0)
        throw Error(ErrorKind::Config, "the semiclassical model covers the 1D bare coulomb case only");
    if (!(spec.coupling > 0.0)) throw Error(ErrorKind::Config, "the semiclassical model needs lambda > 0");
    SemiclassicalResult out;
    out.coupling = spec.coupling;
    if (spec.coupling < 10.0) {
        std::ostringstream os;
        os << "lambda = " << spec.coupling << " is below the semiclassical regime (lambda >~ 10)";
        out.warnings.push_back(os.str());
    }
    const double lambda = spec.coupling;
    const double r0 = classical_equilibrium_and_frequency(spec).separation;

    if (width < 0.0) {
        SystemSpec odd = spec;
        odd.symmetry = Symmetry::Antisymmetric;
        const HamiltonianMatrix h = build_hamiltonian(odd, relative_basis(odd, basis_size));
        const Spectrum sp = diagonalize(h.at(1.0));
        const Eigen::VectorXd c = sp.vectors.col(0);
        const QuadratureRule rule = composite_half_line(r0 + 30.0, 0.1, 0.01, 20);
        std::vector<double> phi(static_cast<std::size_t>(basis_size));
        double var = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            basis_functions(h.basis, rule.nodes[i], phi);
            double v = 0.0;
            for (int k = 0; k < basis_size; ++k) v += c[k] * phi[k];
            const double p = 2.0 * rule.weights[i] * v * v;
            norm += p;
            var += p * (rule.nodes[i] - r0) * (rule.nodes[i] - r0);
        }
        out.relative_variance = var / norm;
        // x_i = -+ r/2 per cloud, so x1 - x2 of independent clouds has half the relative variance
        width = std::sqrt(0.5 * out.relative_variance);
    }
    out.gaussian_width = width;

    auto energy = [&](double d) { return 0.25 * d * d + lambda * semiclassical_potential(d, width); };
    const double lo = 0.1 * r0, hi = 10.0 * r0;
    boost::uintmax_t iterations = 500;
    const auto found = boost::math::tools::brent_find_minima(energy, lo, hi, 52, iterations);
    const double d0 = found.first;
    if (d0 <= lo * (1.0 + 1e-6) || d0 >= hi * (1.0 - 1e-6))
        throw Error(ErrorKind::Numeric, "mean-field energy has no interior minimum");
    out.d0 = d0;

    // one fixed rule for every difference quotient
    const double h = 1e-3 * d0;
    const QuadratureRule local = width > 0.0 ? potential_rule(d0, width, h) : QuadratureRule{};
    auto v = [&](double d) { return potential_on(local, d, width); };
    auto second = [&](double step) { return (v(d0 + step) - 2.0 * v(d0) + v(d0 - step)) / (step * step); };
    out.v_second = (4.0 * second(0.5 * h) - second(h)) / 3.0;
    const double w2 = 1.0 + 2.0 * lambda * out.v_second;
    if (!(w2 > 0.0)) throw Error(ErrorKind::Numeric, "non-positive mean-field curvature");
    out.omega_r = std::sqrt(w2);
    return out;
}

}  // namespace qbm
