#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qbm/error.hpp"
#include "qbm/model.hpp"

using namespace qbm;

TEST_CASE("validation rejects out-of-range fields") {
    SystemSpec s;
    CHECK_NOTHROW(s.validate());
    s.dimension = 3;
    CHECK_THROWS_AS(s.validate(), Error);
    s = {};
    s.coupling = -1.0;
    CHECK_THROWS_AS(s.validate(), Error);
    s = {};
    s.softening = NAN;
    CHECK_THROWS_AS(s.validate(), Error);
    s = {};
    s.interaction_exponent = 0.0;
    CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("interaction values and singular contact") {
    SystemSpec s;
    s.coupling = 2.0;
    CHECK(interaction(s, 4.0) == doctest::Approx(0.5));
    try {
        interaction(s, 0.0);
        FAIL("expected a singular error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Singular);
    }
    s.softening = 1.0;
    CHECK(interaction(s, 0.0) == doctest::Approx(2.0));
    s.coupling = 0.0;
    s.softening = 0.0;
    CHECK(interaction(s, 0.0) == 0.0);
}

TEST_CASE("interaction derivatives match central differences") {
    for (double kappa : {0.0, 0.1, 1.0})
        for (double l : {1.0, 2.0, 0.5}) {
            SystemSpec s;
            s.coupling = 1.3;
            s.softening = kappa;
            s.interaction_exponent = l;
            for (double r : {0.3, 1.0, 2.5}) {
                const double h = 1e-4;
                // fourth-order stencil for the slope
                const double d1 = (8 * (interaction(s, r + h) - interaction(s, r - h)) -
                                   (interaction(s, r + 2 * h) - interaction(s, r - 2 * h))) /
                                  (12 * h);
                const double d2 = (interaction(s, r + h) - 2 * interaction(s, r) + interaction(s, r - h)) / (h * h);
                CHECK(interaction_d1(s, r) == doctest::Approx(d1).epsilon(1e-7));
                CHECK(interaction_d2(s, r) == doctest::Approx(d2).epsilon(1e-5));
            }
        }
}

TEST_CASE("total potential separates into center of mass and relative parts") {
    SystemSpec s;
    s.dimension = 2;
    s.coupling = 0.7;
    s.softening = 0.2;
    const std::vector<double> r1{0.3, -1.1}, r2{-0.4, 0.6};
    const PairCoordinates p = to_pair(r1, r2);
    const double rel = std::hypot(p.relative[0], p.relative[1]);
    const double big = std::hypot(p.com[0], p.com[1]);
    CHECK(total_potential(s, r1, r2) == doctest::Approx(com_potential(big) + relative_potential(s, rel)).epsilon(1e-14));
    std::vector<double> a(2), b(2);
    from_pair(p, a, b);
    CHECK(a[0] == doctest::Approx(r1[0]));
    CHECK(b[1] == doctest::Approx(r2[1]));
    CHECK_THROWS_AS(total_potential(s, std::vector<double>{1.0}, r2), Error);
}

TEST_CASE("coulomb equilibrium and frequency") {
    for (double lambda : {0.5, 1.0, 10.0, 100.0}) {
        SystemSpec s;
        s.coupling = lambda;
        const auto eq = classical_equilibrium_and_frequency(s);
        // r/2 = lambda/r^2
        CHECK(eq.separation == doctest::Approx(std::cbrt(2.0 * lambda)).epsilon(1e-12));
        CHECK(eq.frequency == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
    }
}

TEST_CASE("power-law frequency is sqrt(l + 2) independent of coupling") {
    for (double l : {0.5, 1.0, 2.0, 3.0})
        for (double lambda : {0.2, 5.0}) {
            SystemSpec s;
            s.coupling = lambda;
            s.interaction_exponent = l;
            const auto eq = classical_equilibrium_and_frequency(s);
            // oracle: numerical curvature of the relative potential, relative mass 1/2
            const double h = 1e-4 * eq.separation;
            const double r = eq.separation;
            const double vpp =
                (relative_potential(s, r + h) - 2 * relative_potential(s, r) + relative_potential(s, r - h)) / (h * h);
            CHECK((relative_potential(s, r + h) - relative_potential(s, r - h)) / (2 * h) ==
                  doctest::Approx(0.0).epsilon(1e-6));
            CHECK(eq.frequency == doctest::Approx(std::sqrt(2.0 * vpp)).epsilon(1e-6));
            CHECK(eq.frequency == doctest::Approx(std::sqrt(l + 2.0)).epsilon(1e-10));
        }
}

TEST_CASE("classical equilibrium needs a coupling and no softening") {
    SystemSpec s;
    CHECK_THROWS_AS(classical_equilibrium_and_frequency(s), Error);
    s.coupling = 1.0;
    s.softening = 0.1;
    CHECK_THROWS_AS(classical_equilibrium_and_frequency(s), Error);
}

TEST_CASE("default extent grows with the equilibrium separation") {
    SystemSpec s;
    CHECK(default_relative_extent(s) == doctest::Approx(10.0));
    s.coupling = 100.0;
    CHECK(default_relative_extent(s) == doctest::Approx(4.0 * std::cbrt(200.0) + 10.0));
}

TEST_CASE("symmetry names") {
    CHECK(symmetry_from_string("symmetric") == Symmetry::Symmetric);
    CHECK(symmetry_from_string(to_string(Symmetry::Antisymmetric)) == Symmetry::Antisymmetric);
    CHECK_THROWS_AS(symmetry_from_string("odd"), Error);
}
