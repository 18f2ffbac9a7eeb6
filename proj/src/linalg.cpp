#include "qbm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qbm/error.hpp"

namespace qbm {

void TridiagonalLU::factorize(std::span<const cplx> sub, std::span<const cplx> diag,
                              std::span<const cplx> super) {
    const std::size_t n = diag.size();
    if (n == 0 || sub.size() + 1 != n || super.size() + 1 != n)
        throw Error(ErrorKind::Numeric, "tridiagonal factorization: inconsistent band sizes");
    lower_.assign(n, cplx{});
    pivot_.assign(n, cplx{});
    upper_.assign(super.begin(), super.end());
    pivot_[0] = diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (pivot_[i - 1] == cplx{})
            throw Error(ErrorKind::Numeric, "tridiagonal factorization: zero pivot");
        lower_[i] = sub[i - 1] / pivot_[i - 1];
        pivot_[i] = diag[i] - lower_[i] * super[i - 1];
    }
    if (pivot_[n - 1] == cplx{})
        throw Error(ErrorKind::Numeric, "tridiagonal factorization: singular matrix");
}

void TridiagonalLU::solve(cplx* x, std::size_t stride) const {
    const std::size_t n = pivot_.size();
    for (std::size_t i = 1; i < n; ++i) x[i * stride] -= lower_[i] * x[(i - 1) * stride];
    x[(n - 1) * stride] /= pivot_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i * stride] = (x[i * stride] - upper_[i] * x[(i + 1) * stride]) / pivot_[i];
}

namespace {

// Number of eigenvalues strictly below x.
int sturm_count(std::span<const double> d, std::span<const double> e, double x) {
    int count = 0;
    double q = d[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < d.size(); ++i) {
        const double qq = (q == 0.0) ? std::numeric_limits<double>::epsilon() * (std::abs(e[i - 1]) + 1.0) : q;
        q = d[i] - x - e[i - 1] * e[i - 1] / qq;
        if (q < 0.0) ++count;
    }
    return count;
}

}  // namespace

std::vector<double> tridiagonal_lowest_eigenvalues(std::span<const double> diag,
                                                   std::span<const double> off, int count,
                                                   double tolerance) {
    const std::size_t n = diag.size();
    if (n == 0 || off.size() + 1 != n)
        throw Error(ErrorKind::Numeric, "tridiagonal eigenvalues: inconsistent band sizes");
    count = std::min<int>(count, static_cast<int>(n));
    // Gershgorin bounds
    double lo = std::numeric_limits<double>::max();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    std::vector<double> values;
    values.reserve(count);
    for (int k = 0; k < count; ++k) {
        double a = values.empty() ? lo : values.back() - 1e-12 * (1.0 + std::abs(values.back()));
        a = std::max(a, lo);
        double b = hi;
        // smallest x with count(x) > k
        while (b - a > tolerance * std::max(1.0, std::abs(a) + std::abs(b))) {
            const double mid = 0.5 * (a + b);
            if (sturm_count(diag, off, mid) > k)
                b = mid;
            else
                a = mid;
        }
        values.push_back(0.5 * (a + b));
    }
    return values;
}

std::vector<double> tridiagonal_eigenvector(std::span<const double> diag,
                                            std::span<const double> off, double eigenvalue) {
    const std::size_t n = diag.size();
    std::vector<cplx> sub(off.begin(), off.end());
    std::vector<cplx> dg(n);
    const double shift = eigenvalue + 1e-10 * (1.0 + std::abs(eigenvalue));
    for (std::size_t i = 0; i < n; ++i) dg[i] = diag[i] - shift;
    TridiagonalLU lu;
    lu.factorize(sub, dg, sub);
    std::vector<cplx> v(n, cplx{1.0, 0.0});
    for (int it = 0; it < 4; ++it) {
        lu.solve(v);
        double norm = 0.0;
        for (const auto& z : v) norm += std::norm(z);
        norm = std::sqrt(norm);
        for (auto& z : v) z /= norm;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = v[i].real();
    // deterministic sign: first significant entry positive
    const auto it = std::find_if(out.begin(), out.end(), [](double x) { return std::abs(x) > 1e-8; });
    if (it != out.end() && *it < 0.0)
        for (auto& x : out) x = -x;
    return out;
}

}  // namespace qbm
