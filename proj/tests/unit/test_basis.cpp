#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "qbm/basis.hpp"
#include "qbm/error.hpp"

using namespace qbm;

namespace {

SystemSpec coulomb(double lambda, Symmetry sym = Symmetry::Antisymmetric, double kappa = 0.0, int d = 1) {
    SystemSpec s;
    s.coupling = lambda;
    s.symmetry = sym;
    s.softening = kappa;
    s.dimension = d;
    return s;
}

// composite Simpson rule with n (even) intervals
template <class F>
double simpson(F f, double a, double b, long n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (long i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("zero coupling gives a zero interaction matrix") {
    const SystemSpec s = coulomb(0.0);
    const Eigen::MatrixXd w = interaction_matrix_elements(s, relative_basis(s, 20));
    CHECK(w.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("softened ground element matches a dense Simpson quadrature") {
    SystemSpec s = coulomb(1.0, Symmetry::Symmetric, 1.0);
    const Eigen::MatrixXd w = interaction_matrix_elements(s, relative_basis(s, 4));
    // even ground state of the relative problem has unit variance in r
    auto f = [](double r) { return std::exp(-0.5 * r * r) / std::sqrt(2.0 * std::numbers::pi) / std::sqrt(r * r + 1.0); };
    const double oracle = simpson(f, -40.0, 40.0, 1000000);
    CHECK(w(0, 0) == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("odd-sector coulomb element matches a dense Simpson quadrature") {
    SystemSpec s = coulomb(1.0);
    const Eigen::MatrixXd w = interaction_matrix_elements(s, relative_basis(s, 4));
    // first odd state: r exp(-r^2/4) normalized, density r^2 exp(-r^2/2)/sqrt(2 pi)
    auto f = [](double r) { return r * std::exp(-0.5 * r * r) / std::sqrt(2.0 * std::numbers::pi); };
    const double oracle = 2.0 * simpson(f, 0.0, 40.0, 1000000);
    CHECK(w(0, 0) == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(oracle == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-9));
}

TEST_CASE("interaction elements are linear in the coupling") {
    const Basis b = relative_basis(coulomb(1.0), 30);
    const Eigen::MatrixXd w1 = interaction_matrix_elements(coulomb(1.0), b);
    const Eigen::MatrixXd w7 = interaction_matrix_elements(coulomb(7.5), b);
    CHECK((w7 - 7.5 * w1).cwiseAbs().maxCoeff() < 1e-12 * w7.cwiseAbs().maxCoeff());
}

TEST_CASE("bare even-sector elements are refused") {
    const SystemSpec s = coulomb(1.0, Symmetry::Symmetric);
    try {
        interaction_matrix_elements(s, relative_basis(s, 10));
        FAIL("expected a divergence error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Divergent);
        CHECK(std::string(e.what()).find("Bose-Fermi") != std::string::npos);
    }
}

TEST_CASE("trap matrices agree with quadrature") {
    const SystemSpec line = coulomb(0.0);
    const SystemSpec plane = coulomb(0.0, Symmetry::Antisymmetric, 0.0, 2);
    const std::pair<SystemSpec, Basis> cases[] = {
        {line, relative_basis(line, 25)}, {line, com_basis(25)}, {plane, relative_basis(plane, 25)}};
    for (const auto& [spec, b] : cases) {
        const HamiltonianMatrix h = build_hamiltonian(spec, b);
        const double c = b.kind == BasisKind::CenterOfMass ? 1.0 : 0.25;
        const Eigen::MatrixXd q = operator_matrix(b, [c](double x) { return c * x * x; });
        CHECK((h.trap - q).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("ideal odd spectrum") {
    const SystemSpec s = coulomb(0.0);
    const Spectrum sp = diagonalize(build_hamiltonian(s, relative_basis(s, 50)).at(1.0));
    CHECK(sp.values[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(sp.values[1] == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(sp.values[2] == doctest::Approx(5.5).epsilon(1e-12));
    CHECK(sector_gap(s).gap == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("coupling-one gap against the reference value 1.901") {
    const SectorGap g = sector_gap(coulomb(1.0));
    CHECK(g.gap == doctest::Approx(1.901).epsilon(0.002 / 1.901));
}

TEST_CASE("coupling-one gap is basis converged") {
    const double g200 = sector_gap(coulomb(1.0), 200).gap;
    const double g250 = sector_gap(coulomb(1.0), 250).gap;
    CHECK(std::abs(g200 - g250) < 1e-5);
}

TEST_CASE("strong coupling approaches sqrt(3)") {
    const double g100 = sector_gap(coulomb(100.0)).gap;
    const double g200 = sector_gap(coulomb(200.0)).gap;
    CHECK(std::abs(g100 / std::sqrt(3.0) - 1.0) < 0.02);
    CHECK(std::abs(g200 - std::sqrt(3.0)) < std::abs(g100 - std::sqrt(3.0)));
}

TEST_CASE("Bose-Fermi mapping") {
    bool mapped = false;
    const SystemSpec m = mapped_spec(coulomb(2.0, Symmetry::Symmetric), &mapped);
    CHECK(mapped);
    CHECK(m.symmetry == Symmetry::Antisymmetric);
    mapped_spec(coulomb(2.0, Symmetry::Symmetric, 0.1), &mapped);
    CHECK_FALSE(mapped);
    mapped_spec(coulomb(2.0, Symmetry::Symmetric, 0.0, 2), &mapped);
    CHECK_FALSE(mapped);
    const SectorGap a = sector_gap(coulomb(2.0));
    const SectorGap b = sector_gap(coulomb(2.0, Symmetry::Symmetric));
    CHECK(b.mapped);
    CHECK(a.gap == b.gap);
}

TEST_CASE("two-dimensional sectors") {
    const double sym = sector_gap(coulomb(1.0, Symmetry::Symmetric, 0.0, 2)).gap;
    const double anti = sector_gap(coulomb(1.0, Symmetry::Antisymmetric, 0.0, 2)).gap;
    CHECK(anti > sym);
    CHECK(sector_gap(coulomb(0.0, Symmetry::Symmetric, 0.0, 2)).gap == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("static Hamiltonian: eigenstate keeps its populations") {
    const SystemSpec s = coulomb(1.0);
    const HamiltonianMatrix h = build_hamiltonian(s, relative_basis(s, 60));
    BasisPropagator p(h, 0.05);
    const Spectrum sp = diagonalize(h.at(1.0));
    p.set_state(sp.vectors.col(1).cast<std::complex<double>>());
    for (int k = 0; k < 1000; ++k) p.step(1.0);
    const Eigen::VectorXcd c = p.state();
    const std::complex<double> overlap = sp.vectors.col(1).cast<std::complex<double>>().dot(c);
    CHECK(std::abs(std::norm(overlap) - 1.0) < 1e-10);
    // phase e^{-i E t}
    const double t = 1000 * 0.05;
    const std::complex<double> expect = std::exp(std::complex<double>(0.0, -sp.values[1] * t));
    CHECK(std::abs(overlap - expect) < 1e-8);
}

TEST_CASE("split step converges to the exact exponential") {
    const SystemSpec s = coulomb(1.0);
    const HamiltonianMatrix h = build_hamiltonian(s, relative_basis(s, 60));
    const Spectrum sp = diagonalize(h.at(1.0));
    auto run = [&](double dt, bool exact) {
        BasisPropagator p(h, dt);
        if (exact) p.prepare_exact(0.9);
        p.set_state(sp.vectors.col(0).cast<std::complex<double>>());
        const int n = static_cast<int>(std::lround(1.0 / dt));
        for (int k = 0; k < n; ++k) p.step(0.9);
        return p.state();
    };
    const Eigen::VectorXcd ref = run(0.01, true);
    const double e1 = (run(0.01, false) - ref).norm();
    const double e2 = (run(0.005, false) - ref).norm();
    CHECK(e1 < 1e-3);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("two-particle product basis reproduces the separated ground state") {
    const SystemSpec s = coulomb(1.0, Symmetry::Symmetric, 1.0);
    const Basis b = two_particle_basis(s, 24);
    CHECK(b.dimension() == 24 * 25 / 2);
    const Spectrum sp = diagonalize(build_hamiltonian(s, b).at(1.0));
    CHECK(sp.values[0] == doctest::Approx(sector_gap(s).ground + 0.5).epsilon(1e-7));
    const SystemSpec a = coulomb(0.0);
    const Spectrum ideal = diagonalize(build_hamiltonian(a, two_particle_basis(a, 10)).at(1.0));
    CHECK(ideal.values[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("two-particle basis refuses bare symmetric pairs") {
    const SystemSpec s = coulomb(1.0, Symmetry::Symmetric);
    CHECK_THROWS_AS(build_hamiltonian(s, two_particle_basis(s, 10)), Error);
}

TEST_CASE("interaction cache: memory and file") {
    const auto dir = std::filesystem::temp_directory_path() / "qbm_cache_test";
    std::filesystem::remove_all(dir);
    const SystemSpec s = coulomb(3.0);
    const Basis b = relative_basis(s, 40);
    Eigen::MatrixXd first;
    {
        InteractionCache cache(dir.string());
        first = cache.get(s, b);
        CHECK(cache.entries() == 1);
        cache.get(coulomb(5.0), b);
        CHECK(cache.entries() == 1);
    }
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
    InteractionCache again(dir.string());
    const Eigen::MatrixXd second = again.get(s, b);
    CHECK((first - second).cwiseAbs().maxCoeff() == 0.0);
    CHECK((first - interaction_matrix_elements(s, b)).cwiseAbs().maxCoeff() < 1e-12);
    std::filesystem::remove_all(dir);
}

TEST_CASE("leakage of a converged ground state is small") {
    const SystemSpec s = coulomb(10.0);
    const HamiltonianMatrix h = build_hamiltonian(s, relative_basis(s, 200));
    BasisPropagator p(h, 0.05);
    p.set_state(p.spectrum().vectors.col(0).cast<std::complex<double>>());
    CHECK(p.leakage() < 1e-10);
    CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
}
