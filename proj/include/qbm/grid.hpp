#pragma once

// Finite-difference representation of the two-particle problem and its
// relative / center-of-mass reductions, with Crank-Nicolson propagation in
// real and imaginary time.

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qbm/linalg.hpp"
#include "qbm/model.hpp"

namespace qbm {

struct Grid {
    double min = -1.0;
    double max = 1.0;
    int points = 3;

    double spacing() const { return (max - min) / (points - 1); }
    double coordinate(int j) const { return min + j * spacing(); }
    void validate() const;

    /// [-half_width, half_width]; an odd point count puts a node on the origin.
    static Grid symmetric(double half_width, int points);
    /// Staggered radial grid r_j = (j + 1/2) h with h = extent / points.
    static Grid radial(double extent, int points);
};

enum class Parity { Even, Odd, None };
const char* to_string(Parity p);
Parity parity_from_string(const std::string& s);
/// Exchange parity of a symmetry sector (Symmetric <-> Even).
Parity parity_of(Symmetry s);

struct GridWavefunction {
    Frame frame = Frame::Relative;
    std::vector<Grid> axes;  // one axis, or two for the two-particle frame (x1 slow, x2 fast)
    bool radial = false;
    int angular_momentum = 0;
    Parity parity = Parity::None;
    std::vector<cplx> amplitudes;

    std::size_t size() const { return amplitudes.size(); }
    double cell() const;
    double norm() const;
    void normalize();
};

/// Relative error |psi - s P psi| / |psi| of the parity label, where P is
/// r -> -r on a line, particle exchange on the two-particle grid.
/// Radial wavefunctions carry their parity in the angular momentum.
double parity_error(const GridWavefunction& psi);

/// H = K + f*U + W on one axis, symmetric tridiagonal. Nodes where the
/// interaction is singular are pinned to zero (hard-core contact), which in
/// 1D maps the symmetric sector onto the antisymmetric one.
struct LineHamiltonian {
    Frame frame = Frame::Relative;
    Grid grid;
    bool radial = false;
    int angular_momentum = 0;
    std::vector<double> kinetic_diag;
    std::vector<double> kinetic_off;
    std::vector<double> trap;         // harmonic part at unit trap factor
    std::vector<double> interaction;  // static part
    std::vector<char> pinned;

    std::size_t size() const { return kinetic_diag.size(); }
    void apply(std::span<const cplx> psi, double trap_factor, std::span<cplx> out) const;
    double expectation(std::span<const cplx> psi, double trap_factor) const;

    /// Lowest eigenvalues in a parity sector (Even/Odd requires a symmetric
    /// grid; None uses the full line or the radial problem as is).
    std::vector<double> lowest_eigenvalues(Parity sector, int count, double trap_factor = 1.0) const;
};

/// Relative problem of a 1D pair: -d^2/dr^2 + r^2/4 + w(r).
LineHamiltonian build_relative_problem(const SystemSpec& spec, const Grid& grid);
/// One Cartesian component of the center-of-mass problem: -1/4 d^2/dR^2 + R^2.
LineHamiltonian build_com_problem(const Grid& grid);
/// Radial relative problem of a 2D pair at angular momentum m, for
/// u(r) = sqrt(r) phi(r) on a staggered grid. The flux-form Laplacian carries
/// the (m^2 - 1/4)/r^2 centrifugal term; u(0) = 0 holds by construction.
LineHamiltonian build_radial_problem(const SystemSpec& spec, int m, const Grid& grid);

/// Full 1D two-particle problem on an (x1, x2) grid with equal axes.
struct TwoParticleHamiltonian {
    Grid grid;
    std::vector<double> kinetic_diag;  // -1/2 d^2/dx^2, one axis
    std::vector<double> kinetic_off;
    std::vector<double> trap;         // x^2/2, one axis
    std::vector<double> interaction;  // N*N
    std::vector<char> pinned;         // N*N

    std::size_t axis_size() const { return kinetic_diag.size(); }
    void apply(std::span<const cplx> psi, double trap_factor, std::span<cplx> out) const;
    double expectation(std::span<const cplx> psi, double trap_factor) const;
};

TwoParticleHamiltonian build_two_particle_problem(const SystemSpec& spec, const Grid& grid);

enum class TimeMode { Real, Imaginary };

/// Crank-Nicolson step (1 + z(H - E)) psi' = (1 - z(H - E)) psi with
/// z = i dt/2 (real time) or dt/2 (imaginary time). The reference energy E
/// only changes the global phase and reduces the phase error of the scheme.
class CrankNicolsonLine {
public:
    CrankNicolsonLine(const LineHamiltonian& h, TimeMode mode, double step,
                      double reference_energy = 0.0);

    void advance(std::span<cplx> psi, double trap_factor);
    double step() const { return step_; }
    /// Non-empty when the time step exceeds the squared grid spacing.
    const std::string& warning() const { return warning_; }

private:
    void refactor(double trap_factor);

    const LineHamiltonian* h_;
    TimeMode mode_;
    double step_;
    double reference_;
    cplx z_;
    double factored_for_ = -1.0;
    TridiagonalLU lu_;
    std::vector<cplx> rhs_;
    std::string warning_;
};

/// Alternating-direction implicit propagator for the two-particle grid:
/// a symmetric composition C_1(dt/2) C_2(dt) C_1(dt/2) of directional
/// Crank-Nicolson (Cayley) factors, each a batch of tridiagonal solves.
/// H_k = -1/2 d^2/dx_k^2 + V/2. When `sector` is Even/Odd the state is
/// projected back onto its exchange sector after every step.
class AdiTwoParticle {
public:
    AdiTwoParticle(const TwoParticleHamiltonian& h, TimeMode mode, double step,
                   double reference_energy = 0.0, Parity sector = Parity::None);

    void advance(std::span<cplx> psi, double trap_factor);
    double step() const { return step_; }

private:
    void cayley(std::span<cplx> psi, int direction, cplx z, double trap_factor);

    const TwoParticleHamiltonian* h_;
    TimeMode mode_;
    double step_;
    double reference_;
    Parity sector_;
    std::vector<cplx> work_;
    std::vector<cplx> cprime_;
};

/// Projects a two-particle wavefunction onto an exchange sector and
/// renormalizes. Throws Error(Numeric) when nothing remains.
GridWavefunction project_symmetry(const GridWavefunction& psi, Symmetry target);

/// Convenience single steps for a wavefunction, building the Hamiltonian
/// from its frame and axes. Hot loops should hold a propagator instead.
void step_real_time(GridWavefunction& psi, const SystemSpec& spec, double trap_factor, double dt);
void step_imaginary_time(GridWavefunction& psi, const SystemSpec& spec, double dtau);

struct GroundStateOptions {
    double dtau = 0.01;
    double tolerance = 1e-12;  // energy change per step
    int max_steps = 200000;
};

struct GroundState {
    GridWavefunction psi;
    double energy = 0.0;
    int steps = 0;
};

/// Imaginary-time relaxation of `guess` with renormalization after every
/// step; the guess's symmetry sector is preserved.
GroundState relax_line(const LineHamiltonian& h, GridWavefunction guess,
                       const GroundStateOptions& options = {});
GroundState relax_two_particle(const TwoParticleHamiltonian& h, GridWavefunction guess,
                               const GroundStateOptions& options = {});

/// Normalized starting states: oscillator eigenfunctions of the ideal problem.
GridWavefunction ideal_line_state(const LineHamiltonian& h, int quantum_number);
GridWavefunction ideal_radial_state(const LineHamiltonian& h);
/// (h_a(x1) h_b(x2) +- h_b(x1) h_a(x2)) on the two-particle grid.
GridWavefunction ideal_pair_state(const TwoParticleHamiltonian& h, Symmetry symmetry);

/// Exact, self-describing text checkpoint (hex floats).
void write_checkpoint(std::ostream& out, const GridWavefunction& psi);
GridWavefunction read_checkpoint(std::istream& in);
void save_checkpoint(const std::string& path, const GridWavefunction& psi);
GridWavefunction load_checkpoint(const std::string& path);

}  // namespace qbm
