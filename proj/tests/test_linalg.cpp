#include <doctest.h>

#include <random>
#include <vector>

#include "patchdyn/linalg.hpp"

using namespace patchdyn;

namespace {

std::vector<double> matvec_tridiag(const std::vector<double>& lo, const std::vector<double>& di,
                                   const std::vector<double>& up, const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        y[i] = di[i] * x[i];
        if (i > 0) y[i] += lo[i] * x[i - 1];
        if (i < n - 1) y[i] += up[i] * x[i + 1];
    }
    return y;
}

} // namespace

TEST_CASE("tridiagonal solve reproduces manufactured solutions") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 19);
        std::vector<double> lo(n), di(n), up(n), x(n);
        for (int i = 0; i < n; ++i) {
            lo[i] = off(rng);
            up[i] = off(rng);
            di[i] = 4.0 + off(rng); // diagonally dominant
            x[i] = off(rng);
        }
        std::vector<double> rhs = matvec_tridiag(lo, di, up, x);
        std::vector<double> work;
        solve_tridiagonal(lo, di, up, rhs, work);
        for (int i = 0; i < n; ++i) CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
}

TEST_CASE("banded solve handles bandwidth-2 systems") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 17);
        BandedMatrix A(n, 2, 2);
        std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) {
            for (int k = -2; k <= 2; ++k) {
                const int j = i + k;
                if (j < 0 || j >= n) continue;
                const double v = (k == 0) ? 8.0 + off(rng) : off(rng);
                A.at(i, j) = v;
                dense[i][j] = v;
            }
        }
        std::vector<double> x(n), rhs(n, 0.0);
        for (int i = 0; i < n; ++i) x[i] = off(rng);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rhs[i] += dense[i][j] * x[j];
        A.solve(rhs);
        for (int i = 0; i < n; ++i) CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-11));
    }
}
