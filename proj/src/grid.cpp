#include "qbm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qbm/error.hpp"
#include "qbm/special.hpp"

namespace qbm {

// ---------------------------------------------------------------------------
// Grid and wavefunction basics

void Grid::validate() const {
    if (points < 3) throw Error(ErrorKind::Config, "a grid needs at least 3 points");
    if (!(max > min)) throw Error(ErrorKind::Config, "grid extent must be increasing");
}

Grid Grid::symmetric(double half_width, int points) {
    Grid g{-half_width, half_width, points};
    g.validate();
    return g;
}

Grid Grid::radial(double extent, int points) {
    const double h = extent / points;
    Grid g{0.5 * h, extent - 0.5 * h, points};
    g.validate();
    return g;
}

const char* to_string(Parity p) {
    switch (p) {
        case Parity::Even: return "even";
        case Parity::Odd: return "odd";
        case Parity::None: return "none";
    }
    return "none";
}

Parity parity_from_string(const std::string& s) {
    if (s == "even") return Parity::Even;
    if (s == "odd") return Parity::Odd;
    if (s == "none") return Parity::None;
    throw Error(ErrorKind::Config, "unknown parity '" + s + "'");
}

Parity parity_of(Symmetry s) { return s == Symmetry::Symmetric ? Parity::Even : Parity::Odd; }

double GridWavefunction::cell() const {
    double c = 1.0;
    for (const auto& a : axes) c *= a.spacing();
    return c;
}

double GridWavefunction::norm() const {
    double s = 0.0;
    for (const auto& z : amplitudes) s += std::norm(z);
    return s * cell();
}

void GridWavefunction::normalize() {
    const double n = norm();
    if (!(n > 0.0)) throw Error(ErrorKind::Numeric, "cannot normalize a zero wavefunction");
    const double f = 1.0 / std::sqrt(n);
    for (auto& z : amplitudes) z *= f;
}

namespace {

bool is_symmetric_grid(const Grid& g) {
    return std::abs(g.min + g.max) <= 1e-12 * (std::abs(g.min) + std::abs(g.max));
}

double sector_sign(Parity p) { return p == Parity::Odd ? -1.0 : 1.0; }

}  // namespace

double parity_error(const GridWavefunction& psi) {
    if (psi.parity == Parity::None) return 0.0;
    if (psi.radial) {
        const bool even = psi.angular_momentum % 2 == 0;
        return (even == (psi.parity == Parity::Even)) ? 0.0 : 1.0;
    }
    const double s = sector_sign(psi.parity);
    double diff = 0.0, total = 0.0;
    if (psi.frame == Frame::TwoParticle) {
        const std::size_t n = static_cast<std::size_t>(psi.axes.at(0).points);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                diff += std::norm(psi.amplitudes[i * n + j] - s * psi.amplitudes[j * n + i]);
                total += std::norm(psi.amplitudes[i * n + j]);
            }
    } else {
        if (!is_symmetric_grid(psi.axes.at(0)))
            throw Error(ErrorKind::Config, "parity requires a grid symmetric about the origin");
        const std::size_t n = psi.amplitudes.size();
        for (std::size_t j = 0; j < n; ++j) {
            diff += std::norm(psi.amplitudes[j] - s * psi.amplitudes[n - 1 - j]);
            total += std::norm(psi.amplitudes[j]);
        }
    }
    return total > 0.0 ? std::sqrt(diff / total) : 0.0;
}

// ---------------------------------------------------------------------------
// Line Hamiltonians

void LineHamiltonian::apply(std::span<const cplx> psi, double f, std::span<cplx> out) const {
    const std::size_t n = size();
    for (std::size_t j = 0; j < n; ++j) {
        if (pinned[j]) {
            out[j] = 0.0;
            continue;
        }
        cplx v = (kinetic_diag[j] + f * trap[j] + interaction[j]) * psi[j];
        if (j > 0 && !pinned[j - 1]) v += kinetic_off[j - 1] * psi[j - 1];
        if (j + 1 < n && !pinned[j + 1]) v += kinetic_off[j] * psi[j + 1];
        out[j] = v;
    }
}

double LineHamiltonian::expectation(std::span<const cplx> psi, double f) const {
    std::vector<cplx> hpsi(psi.size());
    apply(psi, f, hpsi);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        num += (std::conj(psi[j]) * hpsi[j]).real();
        den += std::norm(psi[j]);
    }
    return num / den;
}

std::vector<double> LineHamiltonian::lowest_eigenvalues(Parity sector, int count, double f) const {
    const std::size_t n = size();
    std::vector<double> full(n);
    for (std::size_t j = 0; j < n; ++j) full[j] = kinetic_diag[j] + f * trap[j] + interaction[j];

    std::vector<double> d, e;
    auto push_range = [&](std::size_t first) {
        // free nodes from `first` to the end, pinned nodes removed
        bool previous_free = false;
        for (std::size_t j = first; j < n; ++j) {
            if (pinned[j]) {
                previous_free = false;
                continue;
            }
            if (!d.empty()) e.push_back(previous_free ? kinetic_off[j - 1] : 0.0);
            d.push_back(full[j]);
            previous_free = true;
        }
    };

    if (sector == Parity::None || radial) {
        push_range(0);
    } else {
        if (!is_symmetric_grid(grid))
            throw Error(ErrorKind::Config, "parity sectors require a grid symmetric about the origin");
        if (n % 2 == 1) {
            const std::size_t c = n / 2;
            if (sector == Parity::Odd || pinned[c]) {
                push_range(c + 1);
            } else {
                d.push_back(full[c]);
                e.push_back(std::sqrt(2.0) * kinetic_off[c]);
                bool previous_free = true;
                for (std::size_t j = c + 1; j < n; ++j) {
                    if (pinned[j]) {
                        previous_free = false;
                        continue;
                    }
                    if (d.size() > 1) e.push_back(previous_free ? kinetic_off[j - 1] : 0.0);
                    d.push_back(full[j]);
                    previous_free = true;
                }
            }
        } else {
            const std::size_t c = n / 2;
            const double s = sector == Parity::Odd ? -1.0 : 1.0;
            push_range(c);
            d.front() += s * kinetic_off[c - 1];
        }
    }
    if (d.empty()) throw Error(ErrorKind::Numeric, "empty eigenvalue problem");
    return tridiagonal_lowest_eigenvalues(d, e, count);
}

namespace {

LineHamiltonian make_line(Frame frame, const Grid& grid, double kinetic_scale) {
    grid.validate();
    LineHamiltonian h;
    h.frame = frame;
    h.grid = grid;
    const std::size_t n = static_cast<std::size_t>(grid.points);
    const double hh = grid.spacing();
    h.kinetic_diag.assign(n, 2.0 * kinetic_scale / (hh * hh));
    h.kinetic_off.assign(n - 1, -kinetic_scale / (hh * hh));
    h.trap.assign(n, 0.0);
    h.interaction.assign(n, 0.0);
    h.pinned.assign(n, 0);
    return h;
}

}  // namespace

LineHamiltonian build_relative_problem(const SystemSpec& spec, const Grid& grid) {
    spec.validate();
    if (spec.dimension != 1)
        throw Error(ErrorKind::Config, "the Cartesian relative problem is one-dimensional; use the radial problem in 2D");
    LineHamiltonian h = make_line(Frame::Relative, grid, 1.0);
    const double tol = 1e-12 * grid.spacing();
    for (int j = 0; j < grid.points; ++j) {
        const double r = grid.coordinate(j);
        h.trap[j] = 0.25 * r * r;
        if (spec.singular_at_contact() && std::abs(r) < tol) {
            h.pinned[j] = 1;
            continue;
        }
        h.interaction[j] = interaction(spec, std::abs(r));
    }
    return h;
}

LineHamiltonian build_com_problem(const Grid& grid) {
    LineHamiltonian h = make_line(Frame::CenterOfMass, grid, 0.25);
    for (int j = 0; j < grid.points; ++j) {
        const double x = grid.coordinate(j);
        h.trap[j] = x * x;
    }
    return h;
}

LineHamiltonian build_radial_problem(const SystemSpec& spec, int m, const Grid& grid) {
    spec.validate();
    if (spec.dimension != 2) throw Error(ErrorKind::Config, "the radial problem requires dimension 2");
    if (m < 0) throw Error(ErrorKind::Config, "angular momentum must be non-negative");
    if ((m % 2 == 0) != (spec.symmetry == Symmetry::Symmetric))
        throw Error(ErrorKind::Config,
                    "angular momentum parity must match the exchange symmetry (even m: symmetric, odd m: antisymmetric)");
    grid.validate();
    const double hh = grid.spacing();
    if (std::abs(grid.min - 0.5 * hh) > 1e-9 * hh)
        throw Error(ErrorKind::Config, "the radial problem needs a staggered grid starting at h/2");
    LineHamiltonian h;
    h.frame = Frame::Relative;
    h.grid = grid;
    h.radial = true;
    h.angular_momentum = m;
    const std::size_t n = static_cast<std::size_t>(grid.points);
    h.kinetic_diag.resize(n);
    h.kinetic_off.resize(n - 1);
    h.trap.resize(n);
    h.interaction.resize(n);
    h.pinned.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        const double r = grid.coordinate(static_cast<int>(j));
        const double r_minus = r - 0.5 * hh;  // zero at j = 0
        const double r_plus = r + 0.5 * hh;
        h.kinetic_diag[j] = (r_plus + r_minus) / (r * hh * hh) + double(m) * m / (r * r);
        if (j + 1 < n) {
            const double r_next = r + hh;
            h.kinetic_off[j] = -r_plus / (hh * hh * std::sqrt(r * r_next));
        }
        h.trap[j] = 0.25 * r * r;
        h.interaction[j] = interaction(spec, r);
    }
    return h;
}

// ---------------------------------------------------------------------------
// Two-particle Hamiltonian

TwoParticleHamiltonian build_two_particle_problem(const SystemSpec& spec, const Grid& grid) {
    spec.validate();
    if (spec.dimension != 1)
        throw Error(ErrorKind::Config, "the two-particle grid is only available in one dimension");
    grid.validate();
    TwoParticleHamiltonian h;
    h.grid = grid;
    const std::size_t n = static_cast<std::size_t>(grid.points);
    const double hh = grid.spacing();
    h.kinetic_diag.assign(n, 1.0 / (hh * hh));
    h.kinetic_off.assign(n - 1, -0.5 / (hh * hh));
    h.trap.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.coordinate(static_cast<int>(i));
        h.trap[i] = 0.5 * x * x;
    }
    h.interaction.assign(n * n, 0.0);
    h.pinned.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j && spec.singular_at_contact()) {
                h.pinned[i * n + j] = 1;
                continue;
            }
            const double r = std::abs(grid.coordinate(static_cast<int>(i)) - grid.coordinate(static_cast<int>(j)));
            h.interaction[i * n + j] = interaction(spec, r);
        }
    return h;
}

void TwoParticleHamiltonian::apply(std::span<const cplx> psi, double f, std::span<cplx> out) const {
    const std::size_t n = axis_size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t k = i * n + j;
            if (pinned[k]) {
                out[k] = 0.0;
                continue;
            }
            cplx v = (kinetic_diag[i] + kinetic_diag[j] + f * (trap[i] + trap[j]) + interaction[k]) * psi[k];
            if (i > 0) v += kinetic_off[i - 1] * psi[k - n];
            if (i + 1 < n) v += kinetic_off[i] * psi[k + n];
            if (j > 0) v += kinetic_off[j - 1] * psi[k - 1];
            if (j + 1 < n) v += kinetic_off[j] * psi[k + 1];
            out[k] = v;
        }
}

double TwoParticleHamiltonian::expectation(std::span<const cplx> psi, double f) const {
    std::vector<cplx> hpsi(psi.size());
    apply(psi, f, hpsi);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        num += (std::conj(psi[k]) * hpsi[k]).real();
        den += std::norm(psi[k]);
    }
    return num / den;
}

// ---------------------------------------------------------------------------
// Propagators

CrankNicolsonLine::CrankNicolsonLine(const LineHamiltonian& h, TimeMode mode, double step,
                                     double reference_energy)
    : h_(&h), mode_(mode), step_(step), reference_(reference_energy) {
    if (!(step > 0.0)) throw Error(ErrorKind::Config, "time step must be positive");
    z_ = mode == TimeMode::Real ? cplx{0.0, 0.5 * step} : cplx{0.5 * step, 0.0};
    const double hh = h.grid.spacing();
    if (mode == TimeMode::Real && step > hh * hh) {
        std::ostringstream os;
        os << "time step " << step << " exceeds squared grid spacing " << hh * hh
           << "; high-momentum components will carry large phase errors";
        warning_ = os.str();
    }
    rhs_.resize(h.size());
}

void CrankNicolsonLine::refactor(double f) {
    const LineHamiltonian& h = *h_;
    const std::size_t n = h.size();
    std::vector<cplx> sub(n - 1), diag(n), super(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (h.pinned[j]) {
            diag[j] = 1.0;
            continue;
        }
        diag[j] = 1.0 + z_ * (h.kinetic_diag[j] + f * h.trap[j] + h.interaction[j] - reference_);
        if (j + 1 < n) super[j] = z_ * h.kinetic_off[j];
        if (j > 0) sub[j - 1] = z_ * h.kinetic_off[j - 1];
    }
    lu_.factorize(sub, diag, super);
    factored_for_ = f;
}

void CrankNicolsonLine::advance(std::span<cplx> psi, double f) {
    if (f != factored_for_ || lu_.size() == 0) refactor(f);
    const LineHamiltonian& h = *h_;
    const std::size_t n = h.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (h.pinned[j]) {
            rhs_[j] = 0.0;
            continue;
        }
        cplx hv = (h.kinetic_diag[j] + f * h.trap[j] + h.interaction[j] - reference_) * psi[j];
        if (j > 0) hv += h.kinetic_off[j - 1] * psi[j - 1];
        if (j + 1 < n) hv += h.kinetic_off[j] * psi[j + 1];
        rhs_[j] = psi[j] - z_ * hv;
    }
    lu_.solve(rhs_);
    std::copy(rhs_.begin(), rhs_.end(), psi.begin());
}

AdiTwoParticle::AdiTwoParticle(const TwoParticleHamiltonian& h, TimeMode mode, double step,
                               double reference_energy, Parity sector)
    : h_(&h), mode_(mode), step_(step), reference_(reference_energy), sector_(sector) {
    if (!(step > 0.0)) throw Error(ErrorKind::Config, "time step must be positive");
    const std::size_t n = h.axis_size();
    work_.resize(n * n);
    cprime_.resize(n * n);
}

void AdiTwoParticle::cayley(std::span<cplx> psi, int direction, cplx z, double f) {
    const TwoParticleHamiltonian& h = *h_;
    const std::size_t n = h.axis_size();
    const double half_ref = 0.5 * reference_;
    auto potential = [&](std::size_t i, std::size_t j) {
        return 0.5 * (f * (h.trap[i] + h.trap[j]) + h.interaction[i * n + j]) - half_ref;
    };
    std::vector<cplx>& rhs = work_;
    if (direction == 2) {
        // lines along x2: contiguous rows
        std::vector<cplx> cp(n), dp(n);
        for (std::size_t i = 0; i < n; ++i) {
            cplx* row = psi.data() + i * n;
            const char* pin = h.pinned.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                if (pin[j]) {
                    rhs[j] = 0.0;
                    continue;
                }
                cplx hv = (h.kinetic_diag[j] + potential(i, j)) * row[j];
                if (j > 0) hv += h.kinetic_off[j - 1] * row[j - 1];
                if (j + 1 < n) hv += h.kinetic_off[j] * row[j + 1];
                rhs[j] = row[j] - z * hv;
            }
            // Thomas solve of (1 + zX) x = rhs
            for (std::size_t j = 0; j < n; ++j) {
                cplx a = 0.0, b = 1.0, c = 0.0;
                if (!pin[j]) {
                    b = 1.0 + z * (h.kinetic_diag[j] + potential(i, j));
                    if (j > 0) a = z * h.kinetic_off[j - 1];
                    if (j + 1 < n) c = z * h.kinetic_off[j];
                }
                const cplx denom = j > 0 ? b - a * cp[j - 1] : b;
                cp[j] = c / denom;
                dp[j] = (j > 0 ? rhs[j] - a * dp[j - 1] : rhs[j]) / denom;
            }
            row[n - 1] = dp[n - 1];
            for (std::size_t j = n - 1; j-- > 0;) row[j] = dp[j] - cp[j] * row[j + 1];
        }
    } else {
        // lines along x1: batched over j so memory access stays contiguous
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t k = i * n + j;
                if (h.pinned[k]) {
                    rhs[k] = 0.0;
                    continue;
                }
                cplx hv = (h.kinetic_diag[i] + potential(i, j)) * psi[k];
                if (i > 0) hv += h.kinetic_off[i - 1] * psi[k - n];
                if (i + 1 < n) hv += h.kinetic_off[i] * psi[k + n];
                rhs[k] = psi[k] - z * hv;
            }
        std::vector<cplx>& cp = cprime_;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t k = i * n + j;
                cplx a = 0.0, b = 1.0, c = 0.0;
                if (!h.pinned[k]) {
                    b = 1.0 + z * (h.kinetic_diag[i] + potential(i, j));
                    if (i > 0) a = z * h.kinetic_off[i - 1];
                    if (i + 1 < n) c = z * h.kinetic_off[i];
                }
                const cplx denom = i > 0 ? b - a * cp[k - n] : b;
                cp[k] = c / denom;
                rhs[k] = (i > 0 ? rhs[k] - a * rhs[k - n] : rhs[k]) / denom;
            }
        for (std::size_t j = 0; j < n; ++j) psi[(n - 1) * n + j] = rhs[(n - 1) * n + j];
        for (std::size_t i = n - 1; i-- > 0;)
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t k = i * n + j;
                psi[k] = rhs[k] - cp[k] * psi[k + n];
            }
    }
}

void AdiTwoParticle::advance(std::span<cplx> psi, double f) {
    const cplx unit = mode_ == TimeMode::Real ? cplx{0.0, 1.0} : cplx{1.0, 0.0};
    const cplx z_half = unit * (0.25 * step_);
    const cplx z_full = unit * (0.5 * step_);
    cayley(psi, 1, z_half, f);
    cayley(psi, 2, z_full, f);
    cayley(psi, 1, z_half, f);
    if (sector_ != Parity::None) {
        const double s = sector_sign(sector_);
        const std::size_t n = h_->axis_size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const cplx a = psi[i * n + j], b = psi[j * n + i];
                const cplx v = 0.5 * (a + s * b);
                psi[i * n + j] = v;
                psi[j * n + i] = s * v;
            }
    }
}

// ---------------------------------------------------------------------------
// Symmetry projection and convenience steps

GridWavefunction project_symmetry(const GridWavefunction& psi, Symmetry target) {
    GridWavefunction out = psi;
    const double s = target == Symmetry::Symmetric ? 1.0 : -1.0;
    const double before = psi.norm();
    if (psi.frame == Frame::TwoParticle) {
        const std::size_t n = static_cast<std::size_t>(psi.axes.at(0).points);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.amplitudes[i * n + j] = 0.5 * (psi.amplitudes[i * n + j] + s * psi.amplitudes[j * n + i]);
    } else if (!psi.radial && is_symmetric_grid(psi.axes.at(0))) {
        const std::size_t n = psi.amplitudes.size();
        for (std::size_t j = 0; j < n; ++j)
            out.amplitudes[j] = 0.5 * (psi.amplitudes[j] + s * psi.amplitudes[n - 1 - j]);
    } else {
        throw Error(ErrorKind::Config, "symmetry projection needs a two-particle or symmetric line grid");
    }
    const double after = out.norm();
    if (!(after > 1e-24 * std::max(before, 1e-300)) || after < 1e-20)
        throw Error(ErrorKind::Numeric, "projection onto the requested symmetry sector has zero norm");
    out.parity = parity_of(target);
    out.normalize();
    return out;
}

void step_real_time(GridWavefunction& psi, const SystemSpec& spec, double trap_factor, double dt) {
    if (psi.frame == Frame::TwoParticle) {
        const auto h = build_two_particle_problem(spec, psi.axes.at(0));
        AdiTwoParticle adi(h, TimeMode::Real, dt, 0.0, psi.parity);
        adi.advance(psi.amplitudes, trap_factor);
        return;
    }
    LineHamiltonian h = psi.frame == Frame::CenterOfMass ? build_com_problem(psi.axes.at(0))
                        : psi.radial ? build_radial_problem(spec, psi.angular_momentum, psi.axes.at(0))
                                     : build_relative_problem(spec, psi.axes.at(0));
    CrankNicolsonLine cn(h, TimeMode::Real, dt);
    cn.advance(psi.amplitudes, trap_factor);
}

void step_imaginary_time(GridWavefunction& psi, const SystemSpec& spec, double dtau) {
    if (psi.frame == Frame::TwoParticle) {
        const auto h = build_two_particle_problem(spec, psi.axes.at(0));
        AdiTwoParticle adi(h, TimeMode::Imaginary, dtau, 0.0, psi.parity);
        adi.advance(psi.amplitudes, 1.0);
    } else {
        LineHamiltonian h = psi.frame == Frame::CenterOfMass ? build_com_problem(psi.axes.at(0))
                            : psi.radial ? build_radial_problem(spec, psi.angular_momentum, psi.axes.at(0))
                                         : build_relative_problem(spec, psi.axes.at(0));
        CrankNicolsonLine cn(h, TimeMode::Imaginary, dtau);
        cn.advance(psi.amplitudes, 1.0);
    }
    psi.normalize();
}

// ---------------------------------------------------------------------------
// Ground states

GroundState relax_line(const LineHamiltonian& h, GridWavefunction guess,
                       const GroundStateOptions& options) {
    guess.normalize();
    double energy = h.expectation(guess.amplitudes, 1.0);
    CrankNicolsonLine cn(h, TimeMode::Imaginary, options.dtau, energy);
    for (int step = 1; step <= options.max_steps; ++step) {
        cn.advance(guess.amplitudes, 1.0);
        guess.normalize();
        const double e = h.expectation(guess.amplitudes, 1.0);
        if (std::abs(e - energy) < options.tolerance * std::max(1.0, std::abs(e))) {
            return {std::move(guess), e, step};
        }
        energy = e;
    }
    throw Error(ErrorKind::Convergence, "imaginary-time relaxation did not converge");
}

GroundState relax_two_particle(const TwoParticleHamiltonian& h, GridWavefunction guess,
                               const GroundStateOptions& options) {
    guess.normalize();
    double energy = h.expectation(guess.amplitudes, 1.0);
    AdiTwoParticle adi(h, TimeMode::Imaginary, options.dtau, energy, guess.parity);
    constexpr int check_every = 10;
    for (int step = 1; step <= options.max_steps; ++step) {
        adi.advance(guess.amplitudes, 1.0);
        guess.normalize();
        if (step % check_every != 0) continue;
        const double e = h.expectation(guess.amplitudes, 1.0);
        if (std::abs(e - energy) < check_every * options.tolerance * std::max(1.0, std::abs(e)))
            return {std::move(guess), e, step};
        energy = e;
    }
    throw Error(ErrorKind::Convergence, "imaginary-time relaxation did not converge");
}

GridWavefunction ideal_line_state(const LineHamiltonian& h, int quantum_number) {
    if (h.radial) return ideal_radial_state(h);
    GridWavefunction psi;
    psi.frame = h.frame;
    psi.axes = {h.grid};
    psi.parity = is_symmetric_grid(h.grid) ? (quantum_number % 2 == 0 ? Parity::Even : Parity::Odd)
                                           : Parity::None;
    // relative: x = r/sqrt2; center of mass: x = sqrt2 R
    const double scale = h.frame == Frame::CenterOfMass ? std::sqrt(2.0) : 1.0 / std::sqrt(2.0);
    std::vector<double> hf(static_cast<std::size_t>(quantum_number) + 1);
    psi.amplitudes.resize(h.size());
    for (std::size_t j = 0; j < h.size(); ++j) {
        hermite_functions(scale * h.grid.coordinate(static_cast<int>(j)), hf);
        psi.amplitudes[j] = h.pinned[j] ? 0.0 : hf.back();
    }
    psi.normalize();
    return psi;
}

GridWavefunction ideal_radial_state(const LineHamiltonian& h) {
    GridWavefunction psi;
    psi.frame = h.frame;
    psi.axes = {h.grid};
    psi.radial = true;
    psi.angular_momentum = h.angular_momentum;
    psi.parity = h.angular_momentum % 2 == 0 ? Parity::Even : Parity::Odd;
    std::vector<double> f(1);
    psi.amplitudes.resize(h.size());
    for (std::size_t j = 0; j < h.size(); ++j) {
        const double r = h.grid.coordinate(static_cast<int>(j));
        radial_oscillator_functions(r / std::sqrt(2.0), h.angular_momentum, f);
        psi.amplitudes[j] = std::sqrt(r) * f[0];
    }
    psi.normalize();
    return psi;
}

GridWavefunction ideal_pair_state(const TwoParticleHamiltonian& h, Symmetry symmetry) {
    const std::size_t n = h.axis_size();
    const bool hard_core = std::any_of(h.pinned.begin(), h.pinned.end(), [](char c) { return c != 0; });
    GridWavefunction psi;
    psi.frame = Frame::TwoParticle;
    psi.axes = {h.grid, h.grid};
    psi.parity = parity_of(symmetry);
    psi.amplitudes.resize(n * n);
    std::vector<std::array<double, 2>> hf(n);
    std::vector<double> tmp(2);
    for (std::size_t i = 0; i < n; ++i) {
        hermite_functions(h.grid.coordinate(static_cast<int>(i)), tmp);
        hf[i] = {tmp[0], tmp[1]};
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t k = i * n + j;
            const double anti = hf[i][0] * hf[j][1] - hf[i][1] * hf[j][0];
            double v;
            if (symmetry == Symmetry::Antisymmetric)
                v = anti;
            else if (hard_core)
                v = std::abs(anti);  // ideal hard-core bosons
            else
                v = hf[i][0] * hf[j][0];
            psi.amplitudes[k] = h.pinned[k] ? 0.0 : v;
        }
    psi.normalize();
    return psi;
}

// ---------------------------------------------------------------------------
// Checkpoints

void write_checkpoint(std::ostream& out, const GridWavefunction& psi) {
    out << "qbm-checkpoint 1\n";
    out << "frame " << to_string(psi.frame) << "\n";
    out << "radial " << (psi.radial ? 1 : 0) << "\n";
    out << "angular_momentum " << psi.angular_momentum << "\n";
    out << "parity " << to_string(psi.parity) << "\n";
    out << "axes " << psi.axes.size() << "\n";
    out << std::hexfloat;
    for (const auto& a : psi.axes) out << "axis " << a.min << " " << a.max << " " << a.points << "\n";
    out << "amplitudes " << psi.amplitudes.size() << "\n";
    for (const auto& z : psi.amplitudes) out << z.real() << " " << z.imag() << "\n";
    out << std::defaultfloat;
    if (!out) throw Error(ErrorKind::Numeric, "failed to write checkpoint");
}

namespace {

double parse_double(const std::string& token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') throw Error(ErrorKind::Config, "bad number in checkpoint: " + token);
    return v;
}

void expect_key(std::istream& in, const std::string& key) {
    std::string k;
    if (!(in >> k) || k != key) throw Error(ErrorKind::Config, "checkpoint: expected '" + key + "'");
}

Frame frame_from_string(const std::string& s) {
    if (s == "two_particle") return Frame::TwoParticle;
    if (s == "relative") return Frame::Relative;
    if (s == "center_of_mass") return Frame::CenterOfMass;
    throw Error(ErrorKind::Config, "checkpoint: unknown frame " + s);
}

}  // namespace

GridWavefunction read_checkpoint(std::istream& in) {
    std::string magic, token;
    int version = 0;
    if (!(in >> magic >> version) || magic != "qbm-checkpoint" || version != 1)
        throw Error(ErrorKind::Config, "not a qbm checkpoint");
    GridWavefunction psi;
    expect_key(in, "frame");
    in >> token;
    psi.frame = frame_from_string(token);
    int radial = 0;
    expect_key(in, "radial");
    in >> radial;
    psi.radial = radial != 0;
    expect_key(in, "angular_momentum");
    in >> psi.angular_momentum;
    expect_key(in, "parity");
    in >> token;
    psi.parity = parity_from_string(token);
    std::size_t naxes = 0;
    expect_key(in, "axes");
    in >> naxes;
    if (naxes < 1 || naxes > 2) throw Error(ErrorKind::Config, "checkpoint: bad axis count");
    std::size_t expected = 1;
    for (std::size_t a = 0; a < naxes; ++a) {
        std::string lo, hi;
        Grid g;
        expect_key(in, "axis");
        in >> lo >> hi >> g.points;
        g.min = parse_double(lo);
        g.max = parse_double(hi);
        g.validate();
        psi.axes.push_back(g);
        expected *= static_cast<std::size_t>(g.points);
    }
    std::size_t count = 0;
    expect_key(in, "amplitudes");
    in >> count;
    if (count != expected) throw Error(ErrorKind::Config, "checkpoint: amplitude count does not match the grid");
    psi.amplitudes.resize(count);
    for (auto& z : psi.amplitudes) {
        std::string re, im;
        if (!(in >> re >> im)) throw Error(ErrorKind::Config, "checkpoint: truncated amplitudes");
        z = {parse_double(re), parse_double(im)};
    }
    return psi;
}

void save_checkpoint(const std::string& path, const GridWavefunction& psi) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Config, "cannot open " + path + " for writing");
    write_checkpoint(out, psi);
}

GridWavefunction load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot open " + path);
    return read_checkpoint(in);
}

}  // namespace qbm
