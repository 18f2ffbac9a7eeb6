#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "qbm/error.hpp"
#include "qbm/grid.hpp"
#include "qbm/observables.hpp"

using namespace qbm;

namespace {

SystemSpec ideal(Symmetry s) {
    SystemSpec spec;
    spec.symmetry = s;
    return spec;
}

}  // namespace

TEST_CASE("ideal two-particle trap energies follow the virial theorem") {
    for (Symmetry sym : {Symmetry::Antisymmetric, Symmetry::Symmetric}) {
        const SystemSpec s = ideal(sym);
        const TwoParticleHamiltonian h = build_two_particle_problem(s, Grid::symmetric(8.0, 241));
        const GridWavefunction psi = ideal_pair_state(h, sym);
        const double e = sym == Symmetry::Antisymmetric ? 2.0 : 1.0;
        CHECK(expectation_upot(psi) == doctest::Approx(0.5 * e).epsilon(1e-6));
        CHECK(total_energy(psi, s, 1.0) == doctest::Approx(e).epsilon(1e-3));
        // kinetic = total - potential equals the potential part
        CHECK(total_energy(psi, s, 1.0) - expectation_upot(psi) == doctest::Approx(expectation_upot(psi)).epsilon(1e-3));
        // trap off: only the kinetic part remains
        CHECK(total_energy(psi, s, 0.0) == doctest::Approx(0.5 * e).epsilon(1e-3));
    }
}

TEST_CASE("relative frame observables") {
    const SystemSpec s = ideal(Symmetry::Symmetric);
    const LineHamiltonian h = build_relative_problem(s, Grid::symmetric(12.0, 2401));
    const GridWavefunction g0 = ideal_line_state(h, 0);
    // unit-variance gaussian in r
    CHECK(expectation_absx(g0) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-4));
    CHECK(expectation_upot(g0) == doctest::Approx(0.25).epsilon(1e-6));
    const GridWavefunction g1 = ideal_line_state(h, 1);
    CHECK(expectation_upot(g1) == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(total_energy(g1, s, 1.0) == doctest::Approx(1.5).epsilon(1e-5));
}

TEST_CASE("two-particle mean distance from the center") {
    const SystemSpec s = ideal(Symmetry::Symmetric);
    const TwoParticleHamiltonian h = build_two_particle_problem(s, Grid::symmetric(8.0, 801));
    const GridWavefunction psi = ideal_pair_state(h, Symmetry::Symmetric);
    // each particle: exp(-x^2) density, <|x|> = 1/sqrt(pi); the kink at 0 costs O(h^2)
    CHECK(expectation_absx(psi) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(2e-4));
}

TEST_CASE("time series bookkeeping") {
    TimeSeries ts;
    CHECK(ts.names.size() == 4);
    ts.push(0.0, {1, 2, 3, 4});
    ts.push(0.5, {1, 2, 3, 4});
    CHECK_THROWS_AS(ts.push(0.5, {1, 2, 3, 4}), Error);
    CHECK_THROWS_AS(ts.push(1.0, {1, 2}), Error);
    CHECK_THROWS_AS(ts.channel("nope"), Error);
    CHECK(ts.channel("E_tot")[1] == 3.0);
    ts.values[0].pop_back();
    CHECK_THROWS_AS(ts.validate(), Error);
}

TEST_CASE("plateau average over the final window") {
    TimeSeries ts(std::vector<std::string>{"E_tot"});
    for (int k = 0; k <= 1000; ++k) {
        const double t = 0.1 * k;
        ts.push(t, {t < 50.0 ? 0.0 : 2.0 + 0.1 * std::sin(2.0 * std::numbers::pi * t)});
    }
    CHECK(e_infinity(ts, "E_tot", 50.0) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(e_infinity(ts, "E_tot", 10.0) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("series text round trip") {
    TimeSeries ts;
    for (int k = 0; k < 10; ++k) ts.push(0.05 * k, {std::sin(k * 1.0), 1.0 / 3.0, -k * 1e-17, 1.0});
    std::stringstream ss;
    write_series(ss, ts, "{\"a\": 1}\nsecond line");
    std::string header;
    const TimeSeries back = read_series(ss, &header);
    CHECK(header.find("\"a\": 1") != std::string::npos);
    REQUIRE(back.size() == ts.size());
    CHECK(back.names == ts.names);
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t i = 0; i < ts.size(); ++i) CHECK(back.values[c][i] == ts.values[c][i]);
}
