#pragma once

#include <span>
#include <vector>

namespace patchdyn {

// Tridiagonal solve (Thomas algorithm), in place on rhs. lo[0] and up[n-1] are unused.
// The systems assembled here are strictly diagonally dominant, so no pivoting.
void solve_tridiagonal(std::span<const double> lo, std::span<const double> diag,
                       std::span<const double> up, std::span<double> rhs,
                       std::vector<double>& work);

// Banded solve with kl sub- and ku super-diagonals, Gaussian elimination without
// pivoting. band(r, k) holds A(r, r+k) for k in [-kl, ku]. Used for the wider
// upwind stencils where the implicit operator is not tridiagonal.
class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku);
    double& at(int row, int col);          // |col-row| must be within the band
    void clear();
    void solve(std::span<double> rhs);     // destroys the factors
    int n() const { return n_; }

private:
    int n_, kl_, ku_;
    std::vector<double> a_;                // (kl+ku+1) entries per row
    double& band(int r, int k) { return a_[static_cast<std::size_t>(r) * (kl_ + ku_ + 1) + (k + kl_)]; }
};

} // namespace patchdyn
