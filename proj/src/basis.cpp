#include "qbm/basis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbm/error.hpp"
#include "qbm/hash.hpp"
#include "qbm/quadrature.hpp"
#include "qbm/special.hpp"

namespace qbm {

const char* to_string(BasisKind k) {
    switch (k) {
        case BasisKind::Relative: return "relative";
        case BasisKind::Radial: return "radial";
        case BasisKind::CenterOfMass: return "center_of_mass";
        case BasisKind::TwoParticle: return "two_particle";
    }
    return "relative";
}

int Basis::dimension() const {
    if (kind != BasisKind::TwoParticle) return size;
    const int n = single_particle;
    return symmetry == Symmetry::Symmetric ? n * (n + 1) / 2 : n * (n - 1) / 2;
}

int Basis::quantum_number(int k) const {
    switch (kind) {
        case BasisKind::Relative:
        case BasisKind::CenterOfMass: return (parity == Parity::Odd ? 1 : 0) + 2 * k;
        default: return k;
    }
}

namespace {

std::vector<std::pair<int, int>> exchange_pairs(const Basis& b) {
    std::vector<std::pair<int, int>> pairs;
    const bool sym = b.symmetry == Symmetry::Symmetric;
    for (int a = 0; a < b.single_particle; ++a)
        for (int c = sym ? a : a + 1; c < b.single_particle; ++c) pairs.emplace_back(a, c);
    return pairs;
}

}  // namespace

Eigen::VectorXd Basis::ideal_energies() const {
    const int n = dimension();
    Eigen::VectorXd e(n);
    switch (kind) {
        case BasisKind::Relative:
        case BasisKind::CenterOfMass:
            for (int k = 0; k < n; ++k) e[k] = quantum_number(k) + 0.5;
            break;
        case BasisKind::Radial:
            for (int k = 0; k < n; ++k) e[k] = 2.0 * k + std::abs(angular_momentum) + 1.0;
            break;
        case BasisKind::TwoParticle: {
            const auto pairs = exchange_pairs(*this);
            for (int k = 0; k < n; ++k) e[k] = pairs[k].first + pairs[k].second + 1.0;
            break;
        }
    }
    return e;
}

std::string Basis::key() const {
    std::ostringstream os;
    os << to_string(kind) << ":" << size << ":" << to_string(parity) << ":" << angular_momentum << ":"
       << to_string(symmetry) << ":" << single_particle;
    return os.str();
}

Basis relative_basis(const SystemSpec& spec, int size, int angular_momentum) {
    spec.validate();
    if (size < 2) throw Error(ErrorKind::Config, "basis size must be at least 2");
    Basis b;
    b.size = size;
    b.symmetry = spec.symmetry;
    if (spec.dimension == 1) {
        b.kind = BasisKind::Relative;
        b.parity = parity_of(spec.symmetry);
    } else {
        b.kind = BasisKind::Radial;
        const int m = angular_momentum >= 0 ? angular_momentum : (spec.symmetry == Symmetry::Symmetric ? 0 : 1);
        if ((m % 2 == 0) != (spec.symmetry == Symmetry::Symmetric))
            throw Error(ErrorKind::Config, "angular momentum parity must match the exchange symmetry");
        b.angular_momentum = m;
        b.parity = m % 2 == 0 ? Parity::Even : Parity::Odd;
    }
    return b;
}

Basis com_basis(int size) {
    if (size < 2) throw Error(ErrorKind::Config, "basis size must be at least 2");
    Basis b;
    b.kind = BasisKind::CenterOfMass;
    b.size = size;
    b.parity = Parity::Even;
    return b;
}

Basis two_particle_basis(const SystemSpec& spec, int single_particle) {
    spec.validate();
    if (spec.dimension != 1) throw Error(ErrorKind::Config, "the two-particle basis is one-dimensional");
    if (single_particle < 2) throw Error(ErrorKind::Config, "need at least 2 single-particle functions");
    Basis b;
    b.kind = BasisKind::TwoParticle;
    b.single_particle = single_particle;
    b.size = single_particle * single_particle;
    b.symmetry = spec.symmetry;
    b.parity = parity_of(spec.symmetry);
    return b;
}

void basis_functions(const Basis& basis, double coordinate, std::span<double> out) {
    const std::size_t count = out.size();
    if (count == 0) return;
    thread_local std::vector<double> tmp;
    switch (basis.kind) {
        case BasisKind::Relative:
        case BasisKind::CenterOfMass: {
            const bool rel = basis.kind == BasisKind::Relative;
            const double x = rel ? coordinate / std::sqrt(2.0) : coordinate * std::sqrt(2.0);
            const double norm = rel ? std::pow(2.0, -0.25) : std::pow(2.0, 0.25);
            tmp.resize(static_cast<std::size_t>(basis.quantum_number(static_cast<int>(count) - 1)) + 1);
            hermite_functions(x, tmp);
            for (std::size_t k = 0; k < count; ++k) out[k] = norm * tmp[basis.quantum_number(static_cast<int>(k))];
            break;
        }
        case BasisKind::Radial:
            radial_oscillator_functions(coordinate / std::sqrt(2.0), basis.angular_momentum, out);
            for (auto& v : out) v /= std::sqrt(2.0);
            break;
        case BasisKind::TwoParticle:
            hermite_functions(coordinate, out);
            break;
    }
}

namespace {

// Half-line rule covering every function of the basis, refined by `level`.
QuadratureRule line_rule(const Basis& basis, int count, double softening, int level) {
    const int n_max = basis.kind == BasisKind::Radial ? 2 * (count - 1) + std::abs(basis.angular_momentum)
                                                      : basis.quantum_number(count - 1);
    const double x_max = std::sqrt(2.0 * n_max + 1.0) + 9.0;
    double upper, panel, finest;
    switch (basis.kind) {
        case BasisKind::CenterOfMass:
            upper = x_max / std::sqrt(2.0);
            panel = 0.35;
            break;
        case BasisKind::TwoParticle:
            upper = x_max;
            panel = 0.5;
            break;
        default:
            upper = x_max * std::sqrt(2.0);
            panel = 0.7;
            break;
    }
    finest = softening > 0.0 ? std::min(0.25 * softening, 0.05) : 0.05;
    const double shrink = std::ldexp(1.0, -level);
    return composite_half_line(upper, panel * shrink, finest * shrink, 20);
}

// Sector functions on ±nodes combined: the products have definite parity,
// so the full line is twice the half line (radial: weight r).
Eigen::MatrixXd line_operator(const Basis& basis, int count, const std::function<double(double)>& g,
                              double softening, int level) {
    const QuadratureRule rule = line_rule(basis, count, softening, level);
    const Eigen::Index q = static_cast<Eigen::Index>(rule.size());
    Eigen::MatrixXd phi(q, count);
    Eigen::VectorXd wg(q);
    std::vector<double> vals(static_cast<std::size_t>(count));
    for (Eigen::Index i = 0; i < q; ++i) {
        const double r = rule.nodes[i];
        basis_functions(basis, r, vals);
        for (int k = 0; k < count; ++k) phi(i, k) = vals[k];
        const double measure = basis.kind == BasisKind::Radial ? r : 2.0;
        wg[i] = rule.weights[i] * measure * g(r);
    }
    return phi.transpose() * wg.asDiagonal() * phi;
}

Eigen::MatrixXd converged_line_operator(const Basis& basis, int count, const std::function<double(double)>& g,
                                        double softening) {
    Eigen::MatrixXd previous = line_operator(basis, count, g, softening, 0);
    for (int level = 1; level <= 7; ++level) {
        Eigen::MatrixXd next = line_operator(basis, count, g, softening, level);
        const double scale = std::max(next.cwiseAbs().maxCoeff(), 1e-300);
        if ((next - previous).cwiseAbs().maxCoeff() <= 1e-10 * scale) return next;
        previous = std::move(next);
    }
    throw Error(ErrorKind::Numeric, "matrix-element quadrature did not converge");
}

// Single-particle matrix over all n < count on the full line.
Eigen::MatrixXd single_particle_operator(int count, const std::function<double(double)>& g) {
    Basis b;
    b.kind = BasisKind::TwoParticle;
    b.single_particle = count;
    auto build = [&](int level) {
        const QuadratureRule rule = line_rule(b, count, 0.0, level);
        const Eigen::Index q = static_cast<Eigen::Index>(rule.size());
        Eigen::MatrixXd phi(2 * q, count);
        Eigen::VectorXd wg(2 * q);
        std::vector<double> vals(static_cast<std::size_t>(count));
        for (Eigen::Index i = 0; i < q; ++i)
            for (int s = 0; s < 2; ++s) {
                const double x = s == 0 ? rule.nodes[i] : -rule.nodes[i];
                hermite_functions(x, vals);
                for (int k = 0; k < count; ++k) phi(2 * i + s, k) = vals[k];
                wg[2 * i + s] = rule.weights[i] * g(x);
            }
        return Eigen::MatrixXd(phi.transpose() * wg.asDiagonal() * phi);
    };
    Eigen::MatrixXd previous = build(0);
    for (int level = 1; level <= 7; ++level) {
        Eigen::MatrixXd next = build(level);
        const double scale = std::max(next.cwiseAbs().maxCoeff(), 1e-300);
        if ((next - previous).cwiseAbs().maxCoeff() <= 1e-10 * scale) return next;
        previous = std::move(next);
    }
    throw Error(ErrorKind::Numeric, "matrix-element quadrature did not converge");
}

// Product states |a b> (index a*n + b) onto exchange-symmetrized pairs.
Eigen::MatrixXd symmetrizer(const Basis& b) {
    const int n = b.single_particle;
    const auto pairs = exchange_pairs(b);
    const double s = b.symmetry == Symmetry::Symmetric ? 1.0 : -1.0;
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n * n, static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [a, c] = pairs[k];
        const Eigen::Index col = static_cast<Eigen::Index>(k);
        if (a == c) {
            sym(a * n + a, col) = 1.0;
        } else {
            sym(a * n + c, col) = 1.0 / std::sqrt(2.0);
            sym(c * n + a, col) = s / std::sqrt(2.0);
        }
    }
    return sym;
}

Eigen::MatrixXd one_body_two_particle(const Basis& b, const Eigen::MatrixXd& g) {
    const int n = b.single_particle;
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n * n, n * n);
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
            for (int k = 0; k < n; ++k) {
                full(a * n + k, c * n + k) += g(a, c);
                full(k * n + a, k * n + c) += g(a, c);
            }
    const Eigen::MatrixXd s = symmetrizer(b);
    return s.transpose() * full * s;
}

// 1D brackets <a b | N n> between products in (x1, x2) and in
// (X, y) = ((x1 + x2)/sqrt2, (x1 - x2)/sqrt2); nonzero only for N + n = a + b.
// Exact Gauss-Hermite quadrature (polynomial integrand).
struct Brackets {
    int single_particle = 0;
    int relative_count = 0;  // n = 0 .. 2(n_sp - 1)
    Eigen::MatrixXd values;  // rows a*n_sp + b, cols N*relative_count + n
};

const Brackets& moshinsky_brackets(int nsp) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<Brackets>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(nsp);
    if (it != cache.end()) return *it->second;

    auto br = std::make_shared<Brackets>();
    br->single_particle = nsp;
    const int nr = 2 * nsp - 1;
    br->relative_count = nr;
    const int order = 2 * nsp + 2;
    const QuadratureRule gh = gauss_hermite(order);
    const int pts = order * order;
    Eigen::MatrixXd p(pts, nsp * nsp);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(pts, nr * nr);
    std::vector<double> h1(static_cast<std::size_t>(nsp)), h2(static_cast<std::size_t>(nsp));
    std::vector<double> hx(static_cast<std::size_t>(nr)), hy(static_cast<std::size_t>(nr));
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
            const double x1 = gh.nodes[i], x2 = gh.nodes[j];
            const double w = std::sqrt(gh.weights[i] * gh.weights[j]) * std::exp(0.5 * (x1 * x1 + x2 * x2));
            hermite_functions(x1, h1);
            hermite_functions(x2, h2);
            hermite_functions((x1 + x2) / std::sqrt(2.0), hx);
            hermite_functions((x1 - x2) / std::sqrt(2.0), hy);
            const int row = i * order + j;
            for (int a = 0; a < nsp; ++a)
                for (int b = 0; b < nsp; ++b) p(row, a * nsp + b) = w * h1[a] * h2[b];
            for (int big = 0; big < nr; ++big)
                for (int n = 0; big + n < nr; ++n) q(row, big * nr + n) = w * hx[big] * hy[n];
        }
    br->values = p.transpose() * q;
    for (int a = 0; a < nsp; ++a)
        for (int b = 0; b < nsp; ++b)
            for (int big = 0; big < nr; ++big)
                for (int n = 0; n < nr; ++n)
                    if (big + n != a + b) br->values(a * nsp + b, big * nr + n) = 0.0;
    cache.emplace(nsp, br);
    return *br;
}

void check_finite_elements(const SystemSpec& spec, const Basis& basis) {
    if (spec.coupling == 0.0 || spec.softening > 0.0) return;
    const double l = spec.interaction_exponent;
    // behaviour of the sector's products at contact: r^p
    double p;
    switch (basis.kind) {
        case BasisKind::Relative:
        case BasisKind::TwoParticle: p = basis.parity == Parity::Odd ? 2.0 : 0.0; break;
        case BasisKind::Radial: p = 2.0 * std::abs(basis.angular_momentum) + 1.0; break;
        default: return;
    }
    if (p - l <= -1.0)
        throw Error(ErrorKind::Divergent,
                    "interaction matrix elements diverge in this sector for a bare interaction; "
                    "use the Bose-Fermi mapping (odd sector) or a finite softening");
}

}  // namespace

Eigen::MatrixXd operator_matrix(const Basis& basis, const std::function<double(double)>& g) {
    if (basis.kind == BasisKind::TwoParticle)
        return one_body_two_particle(basis, single_particle_operator(basis.single_particle, g));
    return converged_line_operator(basis, basis.size, g, 0.0);
}

namespace {

Eigen::MatrixXd unit_interaction(const SystemSpec& spec, const Basis& basis) {
    SystemSpec unit = spec;
    unit.coupling = 1.0;
    auto w = [&](double r) { return interaction(unit, std::abs(r)); };
    if (basis.kind == BasisKind::CenterOfMass) return Eigen::MatrixXd::Zero(basis.size, basis.size);
    if (basis.kind != BasisKind::TwoParticle) return converged_line_operator(basis, basis.size, w, spec.softening);

    const int nsp = basis.single_particle;
    const Brackets& br = moshinsky_brackets(nsp);
    const int nr = br.relative_count;
    Basis rel;
    rel.kind = BasisKind::Relative;
    rel.parity = basis.parity;
    rel.size = (nr + (basis.parity == Parity::Even ? 1 : 0)) / 2;
    const Eigen::MatrixXd r = converged_line_operator(rel, rel.size, w, spec.softening);
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(nsp * nsp, nsp * nsp);
    for (int big = 0; big < nr; ++big) {
        // columns of the sector's relative quantum numbers at this N
        Eigen::MatrixXd block(nsp * nsp, rel.size);
        block.setZero();
        for (int k = 0; k < rel.size; ++k) {
            const int n = rel.quantum_number(k);
            if (big + n < nr) block.col(k) = br.values.col(big * nr + n);
        }
        full.noalias() += block * r * block.transpose();
    }
    const Eigen::MatrixXd s = symmetrizer(basis);
    return s.transpose() * full * s;
}

}  // namespace

Eigen::MatrixXd interaction_matrix_elements(const SystemSpec& spec, const Basis& basis) {
    spec.validate();
    const int n = basis.dimension();
    if (spec.coupling == 0.0) return Eigen::MatrixXd::Zero(n, n);
    check_finite_elements(spec, basis);
    return spec.coupling * unit_interaction(spec, basis);
}

InteractionCache::InteractionCache(std::string directory) : directory_(std::move(directory)) {}

std::size_t InteractionCache::entries() const {
    std::lock_guard lock(mutex_);
    return memory_.size();
}

std::string InteractionCache::path_for(const std::string& key) const {
    return (std::filesystem::path(directory_) / ("w-" + fnv1a_hex(key) + ".bin")).string();
}

Eigen::MatrixXd InteractionCache::get(const SystemSpec& spec, const Basis& basis) {
    spec.validate();
    const int n = basis.dimension();
    if (spec.coupling == 0.0 || basis.kind == BasisKind::CenterOfMass) return Eigen::MatrixXd::Zero(n, n);
    check_finite_elements(spec, basis);
    std::ostringstream os;
    os.precision(17);
    os << "d" << spec.dimension << ":k" << spec.softening << ":l" << spec.interaction_exponent << ":"
       << basis.key();
    const std::string key = os.str();
    {
        std::lock_guard lock(mutex_);
        auto it = memory_.find(key);
        if (it != memory_.end()) return spec.coupling * *it->second;
    }
    std::shared_ptr<Eigen::MatrixXd> table;
    if (!directory_.empty()) {
        std::ifstream in(path_for(key), std::ios::binary);
        if (in) {
            std::string stored;
            std::getline(in, stored);
            Eigen::Index rows = 0, cols = 0;
            in.read(reinterpret_cast<char*>(&rows), sizeof rows);
            in.read(reinterpret_cast<char*>(&cols), sizeof cols);
            if (in && stored == key && rows == n && cols == n) {
                table = std::make_shared<Eigen::MatrixXd>(rows, cols);
                in.read(reinterpret_cast<char*>(table->data()), static_cast<std::streamsize>(sizeof(double) * rows * cols));
                if (!in) table.reset();
            }
        }
    }
    if (!table) {
        table = std::make_shared<Eigen::MatrixXd>(unit_interaction(spec, basis));
        if (!directory_.empty()) {
            std::filesystem::create_directories(directory_);
            const std::string path = path_for(key);
            const std::string tmp = path + ".tmp";
            {
                std::ofstream out(tmp, std::ios::binary);
                const Eigen::Index rows = table->rows(), cols = table->cols();
                out << key << "\n";
                out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
                out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
                out.write(reinterpret_cast<const char*>(table->data()), static_cast<std::streamsize>(sizeof(double) * rows * cols));
            }
            std::error_code ec;
            std::filesystem::rename(tmp, path, ec);
        }
    }
    std::lock_guard lock(mutex_);
    auto [it, inserted] = memory_.emplace(key, table);
    return spec.coupling * *it->second;
}

InteractionCache& default_interaction_cache() {
    static InteractionCache cache;
    return cache;
}

namespace {

// x^2/2 in the sector, x the oscillator coordinate of the basis.
Eigen::MatrixXd trap_matrix(const Basis& b) {
    const int n = b.dimension();
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
    switch (b.kind) {
        case BasisKind::Relative:
        case BasisKind::CenterOfMass:
            for (int k = 0; k < n; ++k) {
                const double q = b.quantum_number(k);
                u(k, k) = 0.5 * (q + 0.5);
                if (k + 1 < n) u(k, k + 1) = u(k + 1, k) = 0.25 * std::sqrt((q + 1.0) * (q + 2.0));
            }
            break;
        case BasisKind::Radial: {
            const double m = std::abs(b.angular_momentum);
            for (int k = 0; k < n; ++k) {
                u(k, k) = 0.5 * (2.0 * k + m + 1.0);
                if (k + 1 < n) u(k, k + 1) = u(k + 1, k) = -0.5 * std::sqrt((k + 1.0) * (k + m + 1.0));
            }
            break;
        }
        case BasisKind::TwoParticle: {
            const int nsp = b.single_particle;
            Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nsp, nsp);
            for (int a = 0; a < nsp; ++a) {
                g(a, a) = 0.5 * (a + 0.5);
                if (a + 2 < nsp) g(a, a + 2) = g(a + 2, a) = 0.25 * std::sqrt((a + 1.0) * (a + 2.0));
            }
            u = one_body_two_particle(b, g);
            break;
        }
    }
    return u;
}

}  // namespace

Eigen::MatrixXd HamiltonianMatrix::at(double trap_factor) const {
    Eigen::MatrixXd h = interaction + (trap_factor - 1.0) * trap;
    h.diagonal() += ideal;
    return h;
}

HamiltonianMatrix build_hamiltonian(const SystemSpec& spec, const Basis& basis, InteractionCache* cache) {
    HamiltonianMatrix h;
    h.spec = spec;
    h.basis = basis;
    h.ideal = basis.ideal_energies();
    h.trap = trap_matrix(basis);
    h.interaction = cache ? cache->get(spec, basis) : interaction_matrix_elements(spec, basis);
    return h;
}

Spectrum diagonalize(const Eigen::MatrixXd& h) {
    if (h.rows() != h.cols()) throw Error(ErrorKind::Config, "matrix must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::Numeric, "eigen solver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

SystemSpec mapped_spec(const SystemSpec& spec, bool* mapped) {
    const bool map = spec.dimension == 1 && spec.symmetry == Symmetry::Symmetric && spec.singular_at_contact();
    if (mapped) *mapped = map;
    SystemSpec out = spec;
    if (map) out.symmetry = Symmetry::Antisymmetric;
    return out;
}

SectorGap sector_gap(const SystemSpec& spec, int size, InteractionCache* cache) {
    bool mapped = false;
    const SystemSpec s = mapped_spec(spec, &mapped);
    const HamiltonianMatrix h = build_hamiltonian(s, relative_basis(s, size), cache);
    const Spectrum sp = diagonalize(h.at(1.0));
    SectorGap g;
    g.ground = sp.values[0];
    g.excited = sp.values[1];
    g.gap = g.excited - g.ground;
    g.mapped = mapped;
    return g;
}

// ---------------------------------------------------------------------------

BasisPropagator::BasisPropagator(const HamiltonianMatrix& h, double dt) : h_(&h), dt_(dt) {
    if (!(dt > 0.0)) throw Error(ErrorKind::Config, "time step must be positive");
    h1_ = diagonalize(h.at(1.0));
    const Spectrum u = diagonalize(h.trap);
    trap_eigen_ = h1_.vectors.transpose() * u.vectors;
    trap_values_ = u.values;
    trap_h1_ = to_eigenbasis(h.trap);
    state_ = Eigen::MatrixX2d::Zero(h.ideal.size(), 2);
    // the top 5% by ideal energy (product bases are not ordered by energy)
    const Eigen::Index n = h.ideal.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return h.ideal[a] > h.ideal[b]; });
    const auto top = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(n))));
    top_states_.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top));
}

void BasisPropagator::prepare_exact(double f) {
    if (f == 1.0 || exact_.count(f)) return;
    const Spectrum s = diagonalize(h_->at(f));
    exact_[f] = Exact{h1_.vectors.transpose() * s.vectors, s.values};
}

void BasisPropagator::set_state(const Eigen::VectorXcd& c) {
    if (c.size() != state_.rows()) throw Error(ErrorKind::Config, "state size does not match the basis");
    state_.col(0) = h1_.vectors.transpose() * c.real();
    state_.col(1) = h1_.vectors.transpose() * c.imag();
}

Eigen::VectorXcd BasisPropagator::state() const {
    const Eigen::VectorXd re = h1_.vectors * state_.col(0);
    const Eigen::VectorXd im = h1_.vectors * state_.col(1);
    Eigen::VectorXcd c(re.size());
    for (Eigen::Index k = 0; k < re.size(); ++k) c[k] = {re[k], im[k]};
    return c;
}

void BasisPropagator::rotate(const Eigen::MatrixXd& m, bool transpose, Eigen::MatrixX2d& state) {
    if (transpose)
        state = m.transpose() * state;
    else
        state = m * state;
}

void BasisPropagator::phase(const Eigen::VectorXd& values, double dt, Eigen::MatrixX2d& state) const {
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        const double a = -values[k] * dt;
        const double c = std::cos(a), s = std::sin(a);
        const double re = state(k, 0), im = state(k, 1);
        state(k, 0) = c * re - s * im;
        state(k, 1) = s * re + c * im;
    }
}

void BasisPropagator::step(double f) {
    if (f == 1.0) {
        phase(h1_.values, dt_, state_);
        return;
    }
    auto it = exact_.find(f);
    if (it != exact_.end()) {
        rotate(it->second.transform, true, state_);
        phase(it->second.values, dt_, state_);
        rotate(it->second.transform, false, state_);
        return;
    }
    phase(h1_.values, 0.5 * dt_, state_);
    rotate(trap_eigen_, true, state_);
    phase((f - 1.0) * trap_values_, dt_, state_);
    rotate(trap_eigen_, false, state_);
    phase(h1_.values, 0.5 * dt_, state_);
}

Eigen::MatrixXd BasisPropagator::to_eigenbasis(const Eigen::MatrixXd& a) const {
    return h1_.vectors.transpose() * a * h1_.vectors;
}

double BasisPropagator::expectation_eigenbasis(const Eigen::MatrixXd& a) const {
    const Eigen::MatrixX2d as = a * state_;
    return state_.col(0).dot(as.col(0)) + state_.col(1).dot(as.col(1));
}

double BasisPropagator::energy(double f) const {
    double e = 0.0;
    for (Eigen::Index k = 0; k < h1_.values.size(); ++k) e += h1_.values[k] * state_.row(k).squaredNorm();
    if (f != 1.0) e += (f - 1.0) * expectation_eigenbasis(trap_h1_);
    return e;
}

double BasisPropagator::norm() const { return state_.squaredNorm(); }

double BasisPropagator::leakage() const {
    const Eigen::VectorXcd c = state();
    double sum = 0.0;
    for (Eigen::Index k : top_states_) sum += std::norm(c[k]);
    return sum;
}

}  // namespace qbm
