#include <cmath>

#include "doctest.h"
#include "qbm/error.hpp"
#include "qbm/excitation.hpp"

using namespace qbm;

TEST_CASE("no excitation leaves the trap alone") {
    const ExcitationProtocol p;
    CHECK(trap_factor(p, 0.0) == 1.0);
    CHECK(trap_factor(p, 123.0) == 1.0);
    CHECK(excitation_end(p) == 0.0);
    CHECK(std::string(protocol_name(p)) == "none");
}

TEST_CASE("switch-off window") {
    const ExcitationProtocol p = SwitchOff{1.0, 0.1};
    CHECK(trap_factor(p, 0.99) == 1.0);
    CHECK(trap_factor(p, 1.0) == 0.0);
    CHECK(trap_factor(p, 1.05) == 0.0);
    CHECK(trap_factor(p, 1.11) == 1.0);
    CHECK(excitation_end(p) == doctest::Approx(1.1));
    CHECK(default_run_length(p) == doctest::Approx(401.1));
    CHECK(validate(p).empty());
}

TEST_CASE("switch-off validation") {
    CHECK_THROWS_AS(validate(SwitchOff{1.0, 0.0}), Error);
    CHECK_THROWS_AS(validate(SwitchOff{-1.0, 0.1}), Error);
    CHECK(validate(SwitchOff{1.0, 0.8}).size() == 1);
}

TEST_CASE("modulation envelope") {
    const Modulation m{5e-3, 240.0, 100.0, 2.0};
    const ExcitationProtocol p = m;
    CHECK(trap_factor(p, 240.0) == doctest::Approx(1.0 + 5e-3 * std::sin(480.0)));
    const double t = 340.0;  // one width from the center
    CHECK(trap_factor(p, t) - 1.0 == doctest::Approx(5e-3 * std::exp(-0.5) * std::sin(2.0 * t)));
    CHECK(std::abs(trap_factor(p, excitation_end(p)) - 1.0) <= 5e-3 * 1e-6 * (1 + 1e-9));
    CHECK(default_run_length(p) == doctest::Approx(240.0 + 400.0 + 100.0));
    CHECK(std::string(protocol_name(p)) == "modulation");
}

TEST_CASE("modulation validation") {
    CHECK(validate(Modulation{}).empty());
    CHECK(validate(Modulation{0.1, 240.0, 100.0, 2.0}).size() == 1);
    CHECK_THROWS_AS(validate(Modulation{1.5, 240.0, 100.0, 2.0}), Error);
    CHECK_THROWS_AS(validate(Modulation{5e-3, 240.0, 0.0, 2.0}), Error);
    CHECK_THROWS_AS(validate(Modulation{5e-3, 240.0, 100.0, -1.0}), Error);
}
