#include "qbm/model.hpp"

#include <cmath>

#include "qbm/error.hpp"

namespace qbm {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return "config";
        case ErrorKind::Singular: return "singular";
        case ErrorKind::Divergent: return "divergent";
        case ErrorKind::Numeric: return "numeric";
        case ErrorKind::Convergence: return "convergence";
        case ErrorKind::Leakage: return "leakage";
    }
    return "unknown";
}

const char* to_string(Symmetry s) {
    return s == Symmetry::Symmetric ? "symmetric" : "antisymmetric";
}

const char* to_string(Frame f) {
    switch (f) {
        case Frame::TwoParticle: return "two_particle";
        case Frame::Relative: return "relative";
        case Frame::CenterOfMass: return "center_of_mass";
    }
    return "unknown";
}

Symmetry symmetry_from_string(const std::string& s) {
    if (s == "symmetric" || s == "S" || s == "bosonic") return Symmetry::Symmetric;
    if (s == "antisymmetric" || s == "A" || s == "fermionic") return Symmetry::Antisymmetric;
    throw Error(ErrorKind::Config, "unknown symmetry '" + s + "'");
}

void SystemSpec::validate() const {
    if (dimension != 1 && dimension != 2)
        throw Error(ErrorKind::Config, "dimension must be 1 or 2");
    if (!(coupling >= 0.0) || !std::isfinite(coupling))
        throw Error(ErrorKind::Config, "coupling must be a finite non-negative number");
    if (!(softening >= 0.0) || !std::isfinite(softening))
        throw Error(ErrorKind::Config, "softening must be a finite non-negative number");
    if (!(interaction_exponent > 0.0) || !std::isfinite(interaction_exponent))
        throw Error(ErrorKind::Config, "interaction exponent must be positive");
}

double interaction(const SystemSpec& spec, double r) {
    if (spec.coupling == 0.0) return 0.0;
    const double q = r * r + spec.softening * spec.softening;
    if (q == 0.0) throw Error(ErrorKind::Singular, "interaction evaluated at zero separation");
    return spec.coupling * std::pow(q, -0.5 * spec.interaction_exponent);
}

double interaction_d1(const SystemSpec& spec, double r) {
    if (spec.coupling == 0.0) return 0.0;
    const double q = r * r + spec.softening * spec.softening;
    if (q == 0.0) throw Error(ErrorKind::Singular, "interaction evaluated at zero separation");
    const double l = spec.interaction_exponent;
    return -spec.coupling * l * r * std::pow(q, -0.5 * l - 1.0);
}

double interaction_d2(const SystemSpec& spec, double r) {
    if (spec.coupling == 0.0) return 0.0;
    const double k2 = spec.softening * spec.softening;
    const double q = r * r + k2;
    if (q == 0.0) throw Error(ErrorKind::Singular, "interaction evaluated at zero separation");
    const double l = spec.interaction_exponent;
    // d/dr [-l r q^(-l/2-1)] = -l q^(-l/2-2) (q - (l+2) r^2)
    return -spec.coupling * l * std::pow(q, -0.5 * l - 2.0) * (k2 - (l + 1.0) * r * r);
}

double total_potential(const SystemSpec& spec, std::span<const double> r1,
                       std::span<const double> r2) {
    const auto d = static_cast<std::size_t>(spec.dimension);
    if (r1.size() != d || r2.size() != d)
        throw Error(ErrorKind::Config, "position dimension does not match the system");
    double trap = 0.0;
    double sep2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        trap += 0.5 * (r1[k] * r1[k] + r2[k] * r2[k]);
        const double dx = r1[k] - r2[k];
        sep2 += dx * dx;
    }
    return trap + interaction(spec, std::sqrt(sep2));
}

double relative_potential(const SystemSpec& spec, double r) {
    return 0.25 * r * r + interaction(spec, r);
}

ClassicalEquilibrium classical_equilibrium_and_frequency(const SystemSpec& spec) {
    spec.validate();
    if (spec.coupling <= 0.0)
        throw Error(ErrorKind::Config, "no interaction-stabilized minimum at zero coupling");
    if (spec.softening != 0.0)
        throw Error(ErrorKind::Config, "classical equilibrium requires an unsoftened interaction");
    const double l = spec.interaction_exponent;
    // r/2 = l*lambda*r^(-l-1)
    const double r0 = std::pow(2.0 * l * spec.coupling, 1.0 / (l + 2.0));
    const double curvature = 0.5 + interaction_d2(spec, r0);
    // relative kinetic term -d^2/dr^2 corresponds to mass 1/2
    return {r0, std::sqrt(2.0 * curvature)};
}

PairCoordinates to_pair(std::span<const double> r1, std::span<const double> r2) {
    if (r1.size() != r2.size() || r1.size() > 2)
        throw Error(ErrorKind::Config, "pair coordinates need matching 1D or 2D positions");
    PairCoordinates p;
    for (std::size_t k = 0; k < r1.size(); ++k) {
        p.com[k] = 0.5 * (r1[k] + r2[k]);
        p.relative[k] = r1[k] - r2[k];
    }
    return p;
}

void from_pair(const PairCoordinates& pair, std::span<double> r1, std::span<double> r2) {
    if (r1.size() != r2.size() || r1.size() > 2)
        throw Error(ErrorKind::Config, "pair coordinates need matching 1D or 2D positions");
    for (std::size_t k = 0; k < r1.size(); ++k) {
        r1[k] = pair.com[k] + 0.5 * pair.relative[k];
        r2[k] = pair.com[k] - 0.5 * pair.relative[k];
    }
}

double default_relative_extent(const SystemSpec& spec) {
    if (spec.coupling <= 0.0) return 10.0;
    const double l = spec.interaction_exponent;
    const double r0 = std::pow(2.0 * l * spec.coupling, 1.0 / (l + 2.0));
    return 4.0 * r0 + 10.0;
}

}  // namespace qbm
