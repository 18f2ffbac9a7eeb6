#pragma once

// Oscillator-basis representation of the relative, center-of-mass and
// two-particle problems: matrix elements, exact diagonalization and
// basis-space time propagation.

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <mutex>
#include <map>
#include <string>
#include <vector>

#include "qbm/grid.hpp"
#include "qbm/model.hpp"

namespace qbm {

enum class BasisKind { Relative, Radial, CenterOfMass, TwoParticle };
const char* to_string(BasisKind k);

/// A truncated set of oscillator eigenfunctions. For line problems `size`
/// counts the functions inside the parity sector (n = p, p+2, ...); for the
/// two-particle basis it is the number of product states (n_sp^2), of which
/// only the exchange-symmetrized combinations are kept.
struct Basis {
    BasisKind kind = BasisKind::Relative;
    int size = 0;
    Parity parity = Parity::Odd;          // Relative, CenterOfMass
    int angular_momentum = 0;             // Radial
    Symmetry symmetry = Symmetry::Antisymmetric;  // TwoParticle
    int single_particle = 0;              // TwoParticle

    /// Dimension of the represented space.
    int dimension() const;
    /// Oscillator quantum number of sector index k (n, or n_r for Radial).
    int quantum_number(int k) const;
    /// Eigenvalues of the ideal (lambda = 0, unit trap) Hamiltonian.
    Eigen::VectorXd ideal_energies() const;
    std::string key() const;
};

/// Relative-problem basis for the spec's sector. In 1D the parity follows the
/// exchange symmetry; in 2D the radial basis uses m = 0 (symmetric) or
/// m = 1 (antisymmetric) unless `angular_momentum` >= 0 is given.
Basis relative_basis(const SystemSpec& spec, int size, int angular_momentum = -1);
/// One Cartesian component of the center-of-mass problem, even sector.
Basis com_basis(int size);
/// Exchange-symmetrized products h_a(x1) h_b(x2), a, b < single_particle.
Basis two_particle_basis(const SystemSpec& spec, int single_particle);

/// Basis functions 0..count-1 at a physical coordinate (r, R, or x for
/// TwoParticle single-particle functions). Radial functions are normalized
/// with the measure r dr.
void basis_functions(const Basis& basis, double coordinate, std::span<double> out);

/// Matrix of a multiplicative one-body operator g(coordinate) for line and
/// radial bases, converged by quadrature refinement. For the two-particle
/// basis this is g(x1) + g(x2).
Eigen::MatrixXd operator_matrix(const Basis& basis, const std::function<double(double)>& g);

/// Interaction matrix <n|w|n'> at the spec's coupling. Elements scale
/// linearly in the coupling. Throws Error(Divergent) for sectors where the
/// bare interaction has no finite matrix elements (e.g. 1D even, kappa = 0).
Eigen::MatrixXd interaction_matrix_elements(const SystemSpec& spec, const Basis& basis);

/// Unit-coupling interaction tables keyed by the coupling-independent part of
/// the spec and the basis. Thread safe; optionally persisted in a directory.
class InteractionCache {
public:
    explicit InteractionCache(std::string directory = {});
    Eigen::MatrixXd get(const SystemSpec& spec, const Basis& basis);
    std::size_t entries() const;

private:
    std::string path_for(const std::string& key) const;

    std::string directory_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const Eigen::MatrixXd>> memory_;
};

InteractionCache& default_interaction_cache();

/// H(f) = H_ideal + (f - 1) U + W in the basis.
struct HamiltonianMatrix {
    SystemSpec spec;
    Basis basis;
    Eigen::VectorXd ideal;        // exact diagonal at unit trap factor
    Eigen::MatrixXd trap;         // U
    Eigen::MatrixXd interaction;  // W

    Eigen::MatrixXd at(double trap_factor) const;
};

HamiltonianMatrix build_hamiltonian(const SystemSpec& spec, const Basis& basis,
                                    InteractionCache* cache = &default_interaction_cache());

struct Spectrum {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns
};

Spectrum diagonalize(const Eigen::MatrixXd& h);

/// Lowest two levels of the relative problem in the breathing sector and
/// their gap. 1D symmetric bare interactions are served by the Bose-Fermi
/// mapping (computed in the odd sector, `mapped` set).
struct SectorGap {
    double ground = 0.0;
    double excited = 0.0;
    double gap = 0.0;
    bool mapped = false;
};
SectorGap sector_gap(const SystemSpec& spec, int size = 200,
                     InteractionCache* cache = &default_interaction_cache());

/// The spec to use for the relative problem: the antisymmetric twin when
/// the Bose-Fermi mapping applies, the spec itself otherwise.
SystemSpec mapped_spec(const SystemSpec& spec, bool* mapped = nullptr);

struct BasisWavefunction {
    Basis basis;
    Eigen::VectorXcd coefficients;

    double norm() const { return coefficients.squaredNorm(); }
};

/// Time stepping in the eigenbasis of H(1). Steps at unit trap factor and at
/// factors registered with `prepare_exact` use exact exponentials; other
/// factors use exp(-i H1 dt/2) exp(-i (f-1) U dt) exp(-i H1 dt/2).
class BasisPropagator {
public:
    BasisPropagator(const HamiltonianMatrix& h, double dt);

    void prepare_exact(double trap_factor);
    void set_state(const Eigen::VectorXcd& coefficients);
    Eigen::VectorXcd state() const;
    void step(double trap_factor);

    /// <psi|A|psi> for an operator given in the original basis, and the
    /// same operator transformed once into the propagation basis.
    Eigen::MatrixXd to_eigenbasis(const Eigen::MatrixXd& a) const;
    double expectation_eigenbasis(const Eigen::MatrixXd& a_eigen) const;
    /// <H(f)>.
    double energy(double trap_factor) const;
    double norm() const;
    /// Population in the top 5% of the original basis by ideal energy.
    double leakage() const;
    double dt() const { return dt_; }
    const Spectrum& spectrum() const { return h1_; }

private:
    struct Exact {
        Eigen::MatrixXd transform;  // eigenvectors of H(f) expressed in the H(1) eigenbasis
        Eigen::VectorXd values;
    };
    static void rotate(const Eigen::MatrixXd& m, bool transpose, Eigen::MatrixX2d& state);
    void phase(const Eigen::VectorXd& values, double dt, Eigen::MatrixX2d& state) const;

    const HamiltonianMatrix* h_;
    double dt_;
    Spectrum h1_;
    Eigen::MatrixXd trap_eigen_;      // U eigenvectors in the H(1) eigenbasis
    Eigen::VectorXd trap_values_;
    Eigen::MatrixXd trap_h1_;  // U in the H(1) eigenbasis
    std::map<double, Exact> exact_;
    Eigen::MatrixX2d state_;  // real and imaginary parts, H(1) eigenbasis
    std::vector<Eigen::Index> top_states_;
};

}  // namespace qbm
