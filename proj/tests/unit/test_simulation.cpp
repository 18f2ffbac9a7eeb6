#include <cmath>

#include "doctest.h"
#include "qbm/basis.hpp"
#include "qbm/error.hpp"
#include "qbm/simulation.hpp"

using namespace qbm;

namespace {

SimulationConfig switch_off(double lambda, Method m, Symmetry sym = Symmetry::Antisymmetric) {
    SimulationConfig c;
    c.spec.coupling = lambda;
    c.spec.symmetry = sym;
    c.solver.method = m;
    c.protocol = SwitchOff{};
    return c;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_CASE("method names") {
    for (Method m : {Method::Grid, Method::TwoParticleGrid, Method::Basis, Method::TwoParticleBasis})
        CHECK(method_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(method_from_string("spectral"), Error);
}

TEST_CASE("ideal pair: one breathing frequency") {
    const SimulationConfig c = switch_off(0.0, Method::Basis);
    const SimulationResult r = simulate(c);
    const TwoModeFit f = fit_breathing_modes(r, c.protocol);
    CHECK(f.merged);
    CHECK(std::abs(f.omega_r - 2.0) < 1e-6);
    CHECK(r.ground_energy == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.series.channel("U_pot")[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coupling one: fit equals the in-sector gap and the universal mode") {
    const SimulationConfig c = switch_off(1.0, Method::Basis);
    const SimulationResult r = simulate(c);
    const TwoModeFit f = fit_breathing_modes(r, c.protocol);
    CHECK_FALSE(f.merged);
    CHECK(std::abs(f.omega_r - sector_gap(c.spec).gap) < 1e-3);
    CHECK(std::abs(f.omega_R - 2.0) < 1e-3);
    CHECK(r.norm_drift < 1e-10);
    CHECK(r.max_leakage < 1e-6);
    // abs_x carries the same relative frequency
    const TwoModeFit fx = fit_breathing_modes(r, c.protocol, "abs_x");
    CHECK(std::abs(fx.omega_r - f.omega_r) < 1e-3);
    // energy is conserved once the trap is back
    const auto& e = r.series.channel("E_tot");
    CHECK(std::abs(e.back() - e[30]) < 1e-6);
}

TEST_CASE("grid and basis runs agree") {
    SimulationConfig g = switch_off(1.0, Method::Grid);
    g.run_length = 150.0;
    SimulationConfig b = g;
    b.solver.method = Method::Basis;
    const SimulationResult rg = simulate(g);
    const SimulationResult rb = simulate(b);
    // the grid's phase error grows with time, so compare the opening stretch
    auto head = [](const std::vector<double>& v) { return std::vector<double>(v.begin(), v.begin() + 400); };
    CHECK(max_diff(head(rg.series.channel("U_pot")), head(rb.series.channel("U_pot"))) < 1e-3);
    const TwoModeFit fg = fit_breathing_modes(rg, g.protocol);
    const TwoModeFit fb = fit_breathing_modes(rb, b.protocol);
    CHECK(std::abs(fg.omega_r - fb.omega_r) < 1e-3);
    CHECK(std::abs(fg.omega_R - fb.omega_R) < 1e-3);
    CHECK(rg.parity_error < 1e-8);
    CHECK_FALSE(rg.warnings.empty());
}

TEST_CASE("separated and two-particle bases propagate the same physics") {
    SimulationConfig sep = switch_off(1.0, Method::Basis, Symmetry::Symmetric);
    sep.spec.softening = 1.0;
    sep.run_length = 60.0;
    SimulationConfig full = sep;
    full.solver.method = Method::TwoParticleBasis;
    full.solver.single_particle = 30;
    const SimulationResult a = simulate(sep);
    const SimulationResult b = simulate(full);
    CHECK(a.ground_energy == doctest::Approx(b.ground_energy).epsilon(1e-7));
    CHECK(max_diff(a.series.channel("U_pot"), b.series.channel("U_pot")) < 1e-5);
    CHECK(max_diff(a.series.channel("E_tot"), b.series.channel("E_tot")) < 1e-5);
}

TEST_CASE("bare symmetric pairs run through the mapping") {
    const SimulationConfig c = switch_off(1.0, Method::Basis, Symmetry::Symmetric);
    bool mapped = false;
    const double e = ground_energy(c.spec, c.solver, &mapped);
    CHECK(mapped);
    CHECK(e == doctest::Approx(ground_energy(switch_off(1.0, Method::Basis).spec, c.solver)));
}

TEST_CASE("a truncated basis is rejected by the leakage guard") {
    SimulationConfig c = switch_off(100.0, Method::Basis);
    c.solver.basis_size = 8;
    c.run_length = 5.0;
    try {
        simulate(c);
        FAIL("expected leakage");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Leakage);
    }
}

TEST_CASE("two-dimensional runs keep the universal mode") {
    for (Symmetry sym : {Symmetry::Symmetric, Symmetry::Antisymmetric}) {
        SimulationConfig c = switch_off(1.0, Method::Basis, sym);
        c.spec.dimension = 2;
        const SimulationResult r = simulate(c);
        const TwoModeFit f = fit_breathing_modes(r, c.protocol);
        CHECK(std::abs(f.omega_R - 2.0) < 1e-3);
        CHECK(std::abs(f.omega_r - sector_gap(c.spec).gap) < 1e-3);
    }
}

TEST_CASE("scan input checks") {
    SimulationConfig c = switch_off(1.0, Method::Basis);
    CHECK_THROWS_AS(scan_resonance(c, {1.9, 2.0, 2.1}), Error);
    c.protocol = Modulation{};
    CHECK_THROWS_AS(scan_resonance(c, {1.9, 2.0}), Error);
}

TEST_CASE("the ideal pair only absorbs at twice the trap frequency") {
    auto absorbed = [](double w) {
        SimulationConfig c;
        c.protocol = Modulation{5e-3, 240.0, 100.0, w};
        const SimulationResult r = simulate(c);
        return e_infinity(r.series) - r.ground_energy;
    };
    const double on = absorbed(2.0);
    const double off = absorbed(1.9);
    CHECK(on > 0.0);
    CHECK(on > 100.0 * std::abs(off));
}
