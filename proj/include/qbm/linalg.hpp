#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qbm {

using cplx = std::complex<double>;

/// LU factorization of a complex tridiagonal matrix (no pivoting; the
/// Crank-Nicolson matrices are diagonally dominant). Factorize once, solve
/// many right-hand sides, including strided ones.
class TridiagonalLU {
public:
    TridiagonalLU() = default;

    /// sub[i] couples row i+1 to column i, super[i] couples row i to column i+1.
    void factorize(std::span<const cplx> sub, std::span<const cplx> diag,
                   std::span<const cplx> super);

    /// In-place solve of A x = b for b stored at data[offset + k*stride].
    void solve(cplx* data, std::size_t stride = 1) const;
    void solve(std::span<cplx> b) const { solve(b.data(), 1); }

    std::size_t size() const { return pivot_.size(); }

private:
    std::vector<cplx> lower_;  // multipliers
    std::vector<cplx> pivot_;  // diagonal of U
    std::vector<cplx> upper_;  // super-diagonal of U
};

/// Lowest `count` eigenvalues of a real symmetric tridiagonal matrix, by
/// Sturm-sequence bisection. off[i] couples i and i+1.
std::vector<double> tridiagonal_lowest_eigenvalues(std::span<const double> diag,
                                                   std::span<const double> off,
                                                   int count, double tolerance = 1e-13);

/// Normalized eigenvector for a known eigenvalue (inverse iteration).
std::vector<double> tridiagonal_eigenvector(std::span<const double> diag,
                                            std::span<const double> off, double eigenvalue);

}  // namespace qbm
