#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "qbm/analysis.hpp"
#include "qbm/error.hpp"

using namespace qbm;

namespace {

struct Series {
    std::vector<double> t, v;
};

template <class F>
Series sample(F f, double t0, double t1, double dt) {
    Series s;
    const long n = std::lround((t1 - t0) / dt);
    for (long k = 0; k <= n; ++k) {
        const double t = t0 + k * dt;
        s.t.push_back(t);
        s.v.push_back(f(t));
    }
    return s;
}

}  // namespace

TEST_CASE("two-mode fit recovers synthetic parameters") {
    const Series s = sample(
        [](double t) { return 0.1 * std::sin(1.9 * (t - 0.7)) + 0.05 * std::sin(2.0 * (t - 0.3)) + 0.25; }, 1.1, 401.1,
        0.05);
    const TwoModeFit f = fit_two_modes(s.t, s.v);
    CHECK_FALSE(f.merged);
    CHECK(f.converged);
    CHECK(f.omega_r == doctest::Approx(1.9).epsilon(1e-6));
    CHECK(f.omega_R == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(f.a == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(f.b == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(f.t0 == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(f.t0_prime == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(f.offset == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(f.residual_rms < 1e-9);
    CHECK(f(10.0) == doctest::Approx(s.v[std::lround((10.0 - 1.1) / 0.05)]).epsilon(1e-8));
}

TEST_CASE("ordering puts the lower frequency first") {
    const Series s = sample([](double t) { return 0.02 * std::sin(1.8 * t) + 0.2 * std::sin(2.0 * t + 1.0); }, 0.0,
                            300.0, 0.05);
    const TwoModeFit f = fit_two_modes(s.t, s.v);
    CHECK(f.omega_r < f.omega_R);
    CHECK(f.a == doctest::Approx(0.02).epsilon(1e-5));
}

TEST_CASE("a single sinusoid is a merged mode") {
    const Series s = sample([](double t) { return 0.3 * std::sin(2.0 * t + 0.4) + 1.0; }, 0.0, 200.0, 0.05);
    const TwoModeFit f = fit_two_modes(s.t, s.v);
    CHECK(f.merged);
    CHECK(f.omega_r == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(f.omega_R == f.omega_r);
    CHECK(f.b == 0.0);
}

TEST_CASE("frequencies closer than the resolution merge") {
    const double T = 200.0;
    const double sep = 0.5 * 2.0 * std::numbers::pi / T;
    const Series s = sample([&](double t) { return std::sin(2.0 * t) + 0.8 * std::sin((2.0 - sep) * t + 0.3); }, 0.0, T,
                            0.05);
    CHECK(fit_two_modes(s.t, s.v).merged);
}

TEST_CASE("periodogram peaks") {
    const Series one = sample([](double t) { return std::sin(2.0 * t); }, 0.0, 200.0, 0.05);
    const auto p1 = fft_peaks(one.t, one.v, 2);
    REQUIRE(!p1.empty());
    CHECK(std::abs(p1[0].frequency - 2.0) < 2.0 * std::numbers::pi / 200.0);
    const Series two = sample([](double t) { return std::sin(1.9 * t) + 0.7 * std::sin(2.0 * t); }, 0.0, 600.0, 0.05);
    const auto p2 = fft_peaks(two.t, two.v, 2);
    REQUIRE(p2.size() == 2);
    CHECK(p2[0].frequency == doctest::Approx(1.9).epsilon(2e-3));
    CHECK(p2[1].frequency == doctest::Approx(2.0).epsilon(2e-3));
}

TEST_CASE("spectral input checks") {
    std::vector<double> t{0, 1, 2, 4, 5, 6, 7, 8, 9}, v(9, 0.0);
    CHECK_THROWS_AS(fft_peaks(t, v), Error);
    std::vector<double> short_t{0, 1, 2}, short_v{0, 1, 0};
    CHECK_THROWS_AS(fft_peaks(short_t, short_v), Error);
}

TEST_CASE("resonance peaks: positions, widths and areas") {
    // two gaussian lines on a sloped baseline
    const double h1 = 0.3, c1 = 1.9, s1 = 0.01, h2 = 0.1, c2 = 2.0, s2 = 0.008;
    std::vector<double> w, e;
    for (int k = 0; k <= 4000; ++k) {
        const double x = 1.7 + 1e-4 * k;
        w.push_back(x);
        const double g1 = h1 * std::exp(-0.5 * std::pow((x - c1) / s1, 2));
        const double g2 = h2 * std::exp(-0.5 * std::pow((x - c2) / s2, 2));
        e.push_back(2.73 + 0.01 * (x - 1.7) + g1 + g2);
    }
    const auto peaks = find_resonance_peaks(w, e);
    REQUIRE(peaks.size() == 2);
    // oracle: region above 5% of the height is |x - c| < s sqrt(2 ln 20)
    auto area = [](double h, double s) { return h * s * std::sqrt(2.0 * std::numbers::pi) * std::erf(std::sqrt(std::log(20.0))); };
    CHECK(peaks[0].center == doctest::Approx(c1).epsilon(1e-4));
    CHECK(peaks[1].center == doctest::Approx(c2).epsilon(1e-4));
    CHECK(peaks[0].height == doctest::Approx(h1).epsilon(1e-3));
    CHECK(peaks[0].width == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(2.0)) * s1).epsilon(1e-2));
    CHECK(peaks[0].area == doctest::Approx(area(h1, s1)).epsilon(1e-2));
    CHECK(peaks[1].area == doctest::Approx(area(h2, s2)).epsilon(2e-2));
}

TEST_CASE("a flat spectrum has no peaks") {
    std::vector<double> w{1.0, 1.1, 1.2, 1.3, 1.4}, e{1.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(find_resonance_peaks(w, e).empty());
}

TEST_CASE("fit formula end points hold for any parameters") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> b(0.01, 10.0), c(-5.0, 5.0);
    for (int k = 0; k < 200; ++k) {
        const FitFormulaParams p{b(rng), c(rng)};
        CHECK(std::abs(eval_fit_formula(p, 0.0) - 2.0) < 1e-12);
        CHECK(std::abs(eval_fit_formula(p, INFINITY) - std::sqrt(3.0)) < 1e-12);
        // derived constants from their defining relations
        const double dc = std::exp(std::numbers::pi / 2 - std::atan(p.c));
        CHECK(p.d_c() == doctest::Approx(dc));
        CHECK(p.d() == doctest::Approx((2.0 - std::sqrt(3.0) * dc) / (1.0 - dc)));
        CHECK(p.a() == doctest::Approx((std::sqrt(3.0) - p.d()) * std::exp(std::numbers::pi / 2)));
    }
}

TEST_CASE("fit formula calibration recovers its own curve") {
    const FitFormulaParams truth{0.8, -0.4};
    std::vector<double> l, w;
    for (double x : {0.05, 0.1, 0.3, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0}) {
        l.push_back(x);
        w.push_back(eval_fit_formula(truth, x));
    }
    const FitFormulaCalibration cal = fit_formula_calibrate(l, w);
    CHECK(cal.params.b == doctest::Approx(truth.b).epsilon(1e-6));
    CHECK(cal.params.c == doctest::Approx(truth.c).epsilon(1e-6));
    CHECK(cal.max_deviation < 1e-9);
    CHECK_THROWS_AS(fit_formula_calibrate(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), Error);
}
