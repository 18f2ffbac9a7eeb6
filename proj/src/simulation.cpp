#include "qbm/simulation.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "qbm/basis.hpp"
#include "qbm/error.hpp"
#include "qbm/parallel.hpp"

namespace qbm {

const char* to_string(Method m) {
    switch (m) {
        case Method::Grid: return "grid";
        case Method::TwoParticleGrid: return "two_particle_grid";
        case Method::Basis: return "basis";
        case Method::TwoParticleBasis: return "two_particle_basis";
    }
    return "basis";
}

Method method_from_string(const std::string& s) {
    if (s == "grid") return Method::Grid;
    if (s == "two_particle_grid") return Method::TwoParticleGrid;
    if (s == "basis") return Method::Basis;
    if (s == "two_particle_basis") return Method::TwoParticleBasis;
    throw Error(ErrorKind::Config, "unknown method '" + s + "'");
}

namespace {

constexpr double kLeakageLimit = 1e-6;

// One propagation back end. sample() returns U_pot, abs_x, E_tot, norm.
class Engine {
public:
    virtual ~Engine() = default;
    virtual void step(double trap_factor) = 0;
    virtual std::vector<double> sample(double trap_factor) const = 0;
    virtual double ground_energy() const = 0;
    virtual double leakage() const { return 0.0; }
    virtual double parity_error() const { return 0.0; }
    virtual double dt() const = 0;
    std::vector<std::string> warnings;
};

double line_weighted(const GridWavefunction& psi, const std::vector<double>& g) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double p = std::norm(psi.amplitudes[j]);
        num += p * g[j];
        den += p;
    }
    return num / den;
}

std::vector<double> abs_coordinates(const Grid& g) {
    std::vector<double> v(static_cast<std::size_t>(g.points));
    for (int j = 0; j < g.points; ++j) v[static_cast<std::size_t>(j)] = std::abs(g.coordinate(j));
    return v;
}

int odd_points(int points) { return points % 2 == 1 ? points : points + 1; }

// Relative line or radial grid plus `dimension` identical center-of-mass lines.
class GridEngine : public Engine {
public:
    GridEngine(const SystemSpec& spec, const SolverSettings& s, double dt) : dimension_(spec.dimension) {
        const double extent = s.extent > 0.0 ? s.extent : default_relative_extent(spec);
        if (spec.dimension == 1) {
            rel_h_ = build_relative_problem(spec, Grid::symmetric(extent, odd_points(s.points)));
            const bool mapped_sector = spec.singular_at_contact();  // pinned origin: odd sector either way
            const int n = (spec.symmetry == Symmetry::Antisymmetric || mapped_sector) ? 1 : 0;
            rel_ = relax_line(rel_h_, ideal_line_state(rel_h_, n), s.ground);
        } else {
            const int m = spec.symmetry == Symmetry::Symmetric ? 0 : 1;
            rel_h_ = build_radial_problem(spec, m, Grid::radial(extent, s.points));
            rel_ = relax_line(rel_h_, ideal_radial_state(rel_h_), s.ground);
        }
        com_h_ = build_com_problem(Grid::symmetric(s.com_extent, odd_points(s.com_points)));
        com_ = relax_line(com_h_, ideal_line_state(com_h_, 0), s.ground);
        rel_cn_ = std::make_unique<CrankNicolsonLine>(rel_h_, TimeMode::Real, dt, rel_.energy);
        com_cn_ = std::make_unique<CrankNicolsonLine>(com_h_, TimeMode::Real, dt, com_.energy);
        if (!rel_cn_->warning().empty()) warnings.push_back("relative grid: " + rel_cn_->warning());
        if (!com_cn_->warning().empty()) warnings.push_back("center-of-mass grid: " + com_cn_->warning());
        rel_abs_ = abs_coordinates(rel_h_.grid);
        dt_ = dt;
    }

    void step(double f) override {
        rel_cn_->advance(rel_.psi.amplitudes, f);
        com_cn_->advance(com_.psi.amplitudes, f);
    }

    std::vector<double> sample(double f) const override {
        const double d = dimension_;
        const double u = line_weighted(rel_.psi, rel_h_.trap) + d * line_weighted(com_.psi, com_h_.trap);
        const double ax = line_weighted(rel_.psi, rel_abs_);
        const double e = rel_h_.expectation(rel_.psi.amplitudes, f) + d * com_h_.expectation(com_.psi.amplitudes, f);
        const double n = rel_.psi.norm() * std::pow(com_.psi.norm(), d);
        return {u, ax, e, n};
    }

    double ground_energy() const override { return rel_.energy + dimension_ * com_.energy; }
    double parity_error() const override {
        const double p = rel_.psi.radial ? 0.0 : qbm::parity_error(rel_.psi);
        return std::max(p, qbm::parity_error(com_.psi));
    }
    double dt() const override { return dt_; }

private:
    int dimension_;
    LineHamiltonian rel_h_, com_h_;
    GroundState rel_, com_;
    std::unique_ptr<CrankNicolsonLine> rel_cn_, com_cn_;
    std::vector<double> rel_abs_;
    double dt_;
};

class TwoParticleGridEngine : public Engine {
public:
    TwoParticleGridEngine(const SystemSpec& spec, const SolverSettings& s, double dt) {
        if (spec.dimension != 1) throw Error(ErrorKind::Config, "the two-particle grid is one-dimensional");
        const double extent = s.extent > 0.0 ? s.extent : 0.5 * default_relative_extent(spec) + 5.0;
        h_ = build_two_particle_problem(spec, Grid::symmetric(extent, s.points));
        // the (possibly hard-core) symmetric ground state relaxes in its own sector
        gs_ = relax_two_particle(h_, ideal_pair_state(h_, spec.symmetry), s.ground);
        adi_ = std::make_unique<AdiTwoParticle>(h_, TimeMode::Real, dt, gs_.energy, gs_.psi.parity);
        const double hh = h_.grid.spacing();
        if (dt > hh * hh) {
            std::ostringstream os;
            os << "two-particle grid: time step " << dt << " exceeds squared grid spacing " << hh * hh;
            warnings.push_back(os.str());
        }
        dt_ = dt;
    }

    void step(double f) override { adi_->advance(gs_.psi.amplitudes, f); }

    std::vector<double> sample(double f) const override {
        return {expectation_upot(gs_.psi), expectation_absx(gs_.psi), h_.expectation(gs_.psi.amplitudes, f),
                gs_.psi.norm()};
    }
    double ground_energy() const override { return gs_.energy; }
    double parity_error() const override { return qbm::parity_error(gs_.psi); }
    double dt() const override { return dt_; }

private:
    TwoParticleHamiltonian h_;
    GroundState gs_;
    std::unique_ptr<AdiTwoParticle> adi_;
    double dt_;
};

// A basis problem propagated in the eigenbasis of H(1), started in its ground state.
struct BasisPart {
    HamiltonianMatrix h;
    std::unique_ptr<BasisPropagator> prop;
    Eigen::MatrixXd trap_e, abs_e;

    BasisPart(const SystemSpec& spec, const Basis& basis, double dt, const std::function<double(double)>& abs_g,
              InteractionCache* cache) {
        h = build_hamiltonian(spec, basis, cache ? cache : &default_interaction_cache());
        prop = std::make_unique<BasisPropagator>(h, dt);
        const Eigen::VectorXd ground = prop->spectrum().vectors.col(0);
        prop->set_state(ground.cast<cplx>());
        trap_e = prop->to_eigenbasis(h.trap);
        if (abs_g) abs_e = prop->to_eigenbasis(operator_matrix(basis, abs_g));
    }
};

class BasisEngine : public Engine {
public:
    BasisEngine(const SystemSpec& spec, const SolverSettings& s, double dt, bool two_particle, InteractionCache* cache)
        : dimension_(two_particle ? 0 : spec.dimension) {
        const SystemSpec m = mapped_spec(spec);
        auto abs_r = [](double x) { return std::abs(x); };
        if (two_particle) {
            rel_ = std::make_unique<BasisPart>(m, two_particle_basis(m, s.single_particle), dt,
                                               [](double x) { return 0.5 * std::abs(x); }, cache);
        } else {
            rel_ = std::make_unique<BasisPart>(m, relative_basis(m, s.basis_size), dt, abs_r, cache);
            com_ = std::make_unique<BasisPart>(m, com_basis(s.com_basis_size), dt, nullptr, cache);
        }
        dt_ = dt;
    }

    void prepare_exact(double f) {
        rel_->prop->prepare_exact(f);
        if (com_) com_->prop->prepare_exact(f);
    }

    void step(double f) override {
        rel_->prop->step(f);
        if (com_) com_->prop->step(f);
    }

    std::vector<double> sample(double f) const override {
        const BasisPropagator& r = *rel_->prop;
        double u = r.expectation_eigenbasis(rel_->trap_e);
        const double ax = r.expectation_eigenbasis(rel_->abs_e);
        double e = r.energy(f);
        double n = r.norm();
        if (com_) {
            const BasisPropagator& c = *com_->prop;
            u += dimension_ * c.expectation_eigenbasis(com_->trap_e);
            e += dimension_ * c.energy(f);
            n *= std::pow(c.norm(), dimension_);
        }
        return {u, ax, e, n};
    }

    double ground_energy() const override {
        double e = rel_->prop->spectrum().values[0];
        if (com_) e += dimension_ * com_->prop->spectrum().values[0];
        return e;
    }
    double leakage() const override {
        return std::max(rel_->prop->leakage(), com_ ? com_->prop->leakage() : 0.0);
    }
    double dt() const override { return dt_; }

private:
    int dimension_;
    std::unique_ptr<BasisPart> rel_, com_;
    double dt_;
};

std::unique_ptr<Engine> make_engine(const SimulationConfig& c, double dt) {
    switch (c.solver.method) {
        case Method::Grid: return std::make_unique<GridEngine>(c.spec, c.solver, dt);
        case Method::TwoParticleGrid: return std::make_unique<TwoParticleGridEngine>(c.spec, c.solver, dt);
        case Method::Basis: return std::make_unique<BasisEngine>(c.spec, c.solver, dt, false, c.cache);
        case Method::TwoParticleBasis: return std::make_unique<BasisEngine>(c.spec, c.solver, dt, true, c.cache);
    }
    throw Error(ErrorKind::Config, "unknown method");
}

bool is_basis(Method m) { return m == Method::Basis || m == Method::TwoParticleBasis; }

}  // namespace

SimulationResult simulate(const SimulationConfig& config) {
    config.spec.validate();
    if (!(config.sample_interval > 0.0)) throw Error(ErrorKind::Config, "sample interval must be positive");
    SimulationResult result;
    result.warnings = validate(config.protocol);
    mapped_spec(config.spec, &result.mapped);

    const double requested = is_basis(config.solver.method) ? config.solver.basis_dt : config.solver.dt;
    if (!(requested > 0.0)) throw Error(ErrorKind::Config, "time step must be positive");
    const long per_sample = std::max(1L, static_cast<long>(std::ceil(config.sample_interval / requested - 1e-9)));
    const double dt = config.sample_interval / static_cast<double>(per_sample);
    const double run_length = config.run_length > 0.0 ? config.run_length : default_run_length(config.protocol);
    const long samples = static_cast<long>(std::floor(run_length / config.sample_interval + 1e-9));

    auto engine = make_engine(config, dt);
    for (auto& w : engine->warnings) result.warnings.push_back(std::move(w));
    if (auto* basis = dynamic_cast<BasisEngine*>(engine.get()))
        if (std::holds_alternative<SwitchOff>(config.protocol)) basis->prepare_exact(0.0);
    result.ground_energy = engine->ground_energy();

    result.series.push(0.0, engine->sample(trap_factor(config.protocol, 0.0)));
    const double norm0 = result.series.values[3][0];
    for (long k = 1; k <= samples; ++k) {
        const double t_start = (k - 1) * config.sample_interval;
        for (long j = 0; j < per_sample; ++j) {
            const double t_mid = t_start + (j + 0.5) * dt;
            engine->step(trap_factor(config.protocol, t_mid));
            ++result.steps;
        }
        const double t = k * config.sample_interval;
        result.series.push(t, engine->sample(trap_factor(config.protocol, t)));
        if (is_basis(config.solver.method)) {
            const double leak = engine->leakage();
            result.max_leakage = std::max(result.max_leakage, leak);
            if (leak > kLeakageLimit) {
                std::ostringstream os;
                os << "basis truncation leakage " << leak << " at t = " << t << " exceeds " << kLeakageLimit;
                throw Error(ErrorKind::Leakage, os.str());
            }
        }
        const double n = result.series.values[3].back();
        if (!std::isfinite(n)) throw Error(ErrorKind::Numeric, "propagation produced a non-finite state");
    }
    result.norm_drift = std::abs(result.series.values[3].back() - norm0);
    result.parity_error = engine->parity_error();
    return result;
}

double ground_energy(const SystemSpec& spec, const SolverSettings& solver, bool* mapped) {
    SimulationConfig c;
    c.spec = spec;
    c.solver = solver;
    mapped_spec(spec, mapped);
    const double dt = is_basis(solver.method) ? solver.basis_dt : solver.dt;
    return make_engine(c, dt)->ground_energy();
}

TwoModeFit fit_breathing_modes(const SimulationResult& result, const ExcitationProtocol& protocol,
                               const std::string& channel) {
    const double start = excitation_end(protocol);
    const auto& t = result.series.times;
    const auto& v = result.series.channel(channel);
    std::size_t first = 0;
    while (first < t.size() && t[first] <= start) ++first;
    if (t.size() - first < 16) throw Error(ErrorKind::Config, "too few samples after the excitation to fit");
    return fit_two_modes(std::span(t).subspan(first), std::span(v).subspan(first));
}

ResonanceSpectrum scan_resonance(const SimulationConfig& base, const std::vector<double>& omegas, int workers,
                                 double window) {
    if (!std::holds_alternative<Modulation>(base.protocol))
        throw Error(ErrorKind::Config, "a resonance scan needs a modulation protocol template");
    if (omegas.size() < 3) throw Error(ErrorKind::Config, "a resonance scan needs at least 3 frequencies");
    std::vector<double> e_inf(omegas.size(), NAN);
    std::vector<char> ok(omegas.size(), 0);
    parallel_for(omegas.size(), workers, [&](std::size_t i) {
        try {
            SimulationConfig c = base;
            std::get<Modulation>(c.protocol).frequency = omegas[i];
            const SimulationResult r = simulate(c);
            e_inf[i] = e_infinity(r.series, "E_tot", window);
            ok[i] = 1;
        } catch (const std::exception&) {
            ok[i] = 0;
        }
    });
    ResonanceSpectrum spectrum;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (ok[i]) {
            spectrum.omegas.push_back(omegas[i]);
            spectrum.e_inf.push_back(e_inf[i]);
        } else {
            spectrum.failed.push_back(omegas[i]);
        }
    }
    spectrum.partial = !spectrum.failed.empty();
    if (spectrum.omegas.size() >= 3) spectrum.peaks = find_resonance_peaks(spectrum.omegas, spectrum.e_inf);
    return spectrum;
}

}  // namespace qbm
