#pragma once

#include "patchdyn/microsim.hpp"

namespace patchdyn::cpi {

// All scheme parameters for one run. Validated against the problem's domain by
// validate(); every invariant violation is a ValidationError naming the field.
struct SchemeConfig {
    int N_xi = 10, N_eta = 10; // coarse intervals (grid has (N+1)^2 nodes)
    int Nt = 1000;             // macro steps over [0, T]
    double T = 1.0;
    double tau = 1e-6;         // gap-tooth horizon
    int k = 0;                 // gap-tooth repeats before the derivative estimate
    double h_xi = 1e-3, h_eta = 1e-3;

    int nx = 10, ny = 10, nt = 2; // micro discretization

    enum class Solver { ADI, Explicit };
    Solver solver = Solver::ADI;
    microsim::UpwindSpec upwind{};

    enum class BCType { Neumann, Dirichlet, Robin };
    BCType bc_type = BCType::Neumann;
    double robin_w1 = 1.0, robin_w2 = 1.0;

    enum class Quadrature { Trapezoid, Simpson };
    Quadrature quadrature = Quadrature::Trapezoid;

    enum class LinearCache { Auto, On, Off };
    LinearCache linear_cache = LinearCache::Auto;

    double dt() const { return T / Nt; }

    // domain_* are the computational rectangle extents of the problem.
    void validate(double domain_xi_extent, double domain_eta_extent) const;
};

} // namespace patchdyn::cpi
