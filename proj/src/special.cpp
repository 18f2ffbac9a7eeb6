#include "qbm/special.hpp"

#include <cmath>
#include <numbers>

namespace qbm {

namespace {

// The recurrences run on unscaled values with a separate log prefactor, so
// high orders far out (where exp(-x^2/2) alone underflows) stay finite.
constexpr double kBig = 1e150;
const double kLogBig = std::log(kBig);

}  // namespace

void hermite_functions(double x, std::span<double> out) {
    const std::size_t n = out.size();
    if (n == 0) return;
    const double log_pref = -0.5 * x * x - 0.25 * std::log(std::numbers::pi);
    double scale = 0.0;
    double prev = 0.0, cur = 1.0;
    out[0] = std::exp(log_pref);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double kk = static_cast<double>(k);
        const double next = std::sqrt(2.0 / (kk + 1.0)) * x * cur - std::sqrt(kk / (kk + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kBig) {
            cur /= kBig;
            prev /= kBig;
            scale += kLogBig;
        }
        out[k + 1] = cur == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(cur)) + scale + log_pref), cur);
    }
}

void radial_oscillator_functions(double x, int m, std::span<double> out) {
    const std::size_t n = out.size();
    if (n == 0) return;
    const double a = std::abs(m);
    const double y = x * x;
    if (a > 0.0 && x == 0.0) {
        for (auto& v : out) v = 0.0;
        return;
    }
    // l_k = sqrt(2 k!/(k+a)!) x^a L_k^a(y) exp(-y/2)
    double log_pref = 0.5 * std::log(2.0) - 0.5 * std::lgamma(a + 1.0) - 0.5 * y;
    if (a > 0.0) log_pref += a * std::log(std::abs(x));
    double scale = 0.0;
    double prev = 0.0, cur = 1.0;
    out[0] = std::exp(log_pref);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double kk = static_cast<double>(k);
        double next;
        if (k == 0) {
            next = (1.0 + a - y) * std::sqrt(1.0 / (1.0 + a));
        } else {
            const double r1 = std::sqrt((kk + 1.0) / (kk + 1.0 + a));
            const double r2 = std::sqrt((kk + 1.0) * kk / ((kk + 1.0 + a) * (kk + a)));
            next = ((2.0 * kk + 1.0 + a - y) * r1 * cur - (kk + a) * r2 * prev) / (kk + 1.0);
        }
        prev = cur;
        cur = next;
        if (std::abs(cur) > kBig) {
            cur /= kBig;
            prev /= kBig;
            scale += kLogBig;
        }
        out[k + 1] = cur == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(cur)) + scale + log_pref), cur);
    }
}

}  // namespace qbm
