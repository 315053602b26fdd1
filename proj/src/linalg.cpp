#include "patchdyn/linalg.hpp"

#include <cassert>
#include <cmath>

namespace patchdyn {

void solve_tridiagonal(std::span<const double> lo, std::span<const double> diag,
                       std::span<const double> up, std::span<double> rhs,
                       std::vector<double>& work) {
    const std::size_t n = rhs.size();
    assert(lo.size() == n && diag.size() == n && up.size() == n);
    work.resize(n);
    double m = diag[0];
    work[0] = up[0] / m;
    rhs[0] /= m;
    for (std::size_t k = 1; k < n; ++k) {
        m = diag[k] - lo[k] * work[k - 1];
        work[k] = up[k] / m;
        rhs[k] = (rhs[k] - lo[k] * rhs[k - 1]) / m;
    }
    for (std::size_t k = n - 1; k-- > 0;) {
        rhs[k] -= work[k] * rhs[k + 1];
    }
}

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), a_(static_cast<std::size_t>(n) * (kl + ku + 1), 0.0) {}

double& BandedMatrix::at(int row, int col) {
    assert(row >= 0 && row < n_ && col >= 0 && col < n_);
    assert(col - row >= -kl_ && col - row <= ku_);
    return band(row, col - row);
}

void BandedMatrix::clear() {
    std::fill(a_.begin(), a_.end(), 0.0);
}

void BandedMatrix::solve(std::span<double> rhs) {
    assert(static_cast<int>(rhs.size()) == n_);
    for (int k = 0; k < n_ - 1; ++k) {
        const double piv = band(k, 0);
        const int last = std::min(k + kl_, n_ - 1);
        for (int r = k + 1; r <= last; ++r) {
            const double f = band(r, k - r) / piv;
            if (f == 0.0) continue;
            for (int c = k + 1; c <= std::min(k + ku_, n_ - 1); ++c) {
                band(r, c - r) -= f * band(k, c - k);
            }
            rhs[r] -= f * rhs[k];
        }
    }
    for (int r = n_ - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c <= std::min(r + ku_, n_ - 1); ++c) {
            s -= band(r, c - r) * rhs[c];
        }
        rhs[r] = s / band(r, 0);
    }
}

} // namespace patchdyn
