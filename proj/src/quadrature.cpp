#include "qbm/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qbm/error.hpp"
#include "qbm/special.hpp"

namespace qbm {

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw Error(ErrorKind::Config, "Gauss-Legendre order must be positive");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = mid - half * x;
        rule.nodes[n - 1 - i] = mid + half * x;
        rule.weights[i] = rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

QuadratureRule gauss_hermite(int n) {
    if (n < 1) throw Error(ErrorKind::Config, "Gauss-Hermite order must be positive");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::Numeric, "Gauss-Hermite eigen solve failed");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Eigenvector components lose all relative accuracy for the tiny outer
    // weights, so use w = exp(-x^2) / sum_k phi_k(x)^2 instead.
    std::vector<double> phi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = es.eigenvalues()(i);
        rule.nodes[i] = x;
        hermite_functions(x, phi);
        double s = 0.0;
        for (double v : phi) s += v * v;
        rule.weights[i] = std::exp(-x * x) / s;
    }
    return rule;
}

QuadratureRule composite_half_line(double upper, double panel, double finest, int order) {
    std::vector<double> edges{0.0};
    double start = 0.0;
    if (finest > 0.0 && finest < panel) {
        // geometric panels [finest*2^(k-1), finest*2^k] up to the uniform region
        edges.push_back(finest);
        double e = finest;
        while (2.0 * e < panel && 2.0 * e < upper) {
            e *= 2.0;
            edges.push_back(e);
        }
        start = e;
    }
    const int uniform = std::max(1, static_cast<int>(std::ceil((upper - start) / panel)));
    const double width = (upper - start) / uniform;
    for (int k = 1; k <= uniform; ++k) edges.push_back(start + k * width);

    const QuadratureRule base = gauss_legendre(order);
    QuadratureRule rule;
    rule.nodes.reserve((edges.size() - 1) * order);
    rule.weights.reserve((edges.size() - 1) * order);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        if (b <= a) continue;
        for (int i = 0; i < order; ++i) {
            rule.nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * base.nodes[i]);
            rule.weights.push_back(0.5 * (b - a) * base.weights[i]);
        }
    }
    return rule;
}

}  // namespace qbm
