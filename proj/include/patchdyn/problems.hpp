#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "patchdyn/field.hpp"
#include "patchdyn/geometry.hpp"

namespace patchdyn::problems {

// A benchmark problem posed on a computational rectangle [a,b]x[c,d] through a
// mapping. Boundary side order follows the W/E (xi = a/b) and S/N (eta = c/d)
// convention; a periodic xi direction identifies the node columns at a and b.
struct ProblemSpec {
    std::string name;
    geometry::Mapping mapping;
    geometry::PhysicalCoefficients physical;
    double a = 0, b = 1, c = 0, d = 1;
    double T = 1.0;
    bool periodic_xi = false;

    std::function<double(double, double)> initial;           // (xi, eta)
    std::function<double(double, double)> bcW, bcE;          // (eta, t); unused when periodic
    std::function<double(double, double)> bcS, bcN;          // (xi, t)
    std::function<double(double, double, double)> exact;     // (xi, eta, t); may be null

    // Structure hints used for caching and the linear-response fast path.
    bool coeffs_time_independent = true;
    bool source_zero = false;
    bool source_separable = false;
    std::function<double(double, double)> source_spatial;    // computational coords
    std::function<double(double)> source_time;
    bool coeffs_xi_independent = false;

    double phys_Lx = 1.0, phys_Ly = 1.0; // physical extents (Peclet diagnostic)

    bool has_exact() const { return static_cast<bool>(exact); }
};

// Convection-dominated CDR benchmark with exact solution e^{x+y+t}; lambda is
// the grid-stretching parameter (0 = uniform grid).
ProblemSpec problem1_constant(double lambda);

// Same benchmark with diffusivity Dx = Dy = 1 + x.
ProblemSpec problem1_variable(double lambda);

// Non-axisymmetric diffusion in the annulus 1 <= r <= 2, periodic in theta.
ProblemSpec problem2_annulus();

// Registry keyed by the names used in config files: "cdr-const", "cdr-var", "annulus".
ProblemSpec by_name(const std::string& name, double lambda);

// ---------------------------------------------------------------------------
// Bessel machinery for the annulus analytical solution
// ---------------------------------------------------------------------------

double bessel_j1(double x);
double bessel_y1(double x); // requires x > 0

// First m_max positive roots of J1(mu) Y1(2mu) - Y1(mu) J1(2mu) = 0.
std::vector<double> cross_product_roots(int m_max);

// Radial eigenfunction Z1(mu, r) = J1(mu) Y1(mu r) - Y1(mu) J1(mu r).
double cross_product_z1(double mu, double r);

// Series solution of the annulus problem with IC (r-1)(2-r) sin(theta).
class AnnulusSolution {
public:
    explicit AnnulusSolution(int m_max = 20);

    double eval(double r, double theta, double t) const;

    // True when the last retained mode still contributes more than 1e-12 of the
    // partial sum at time t (series truncation warning).
    bool truncation_warning(double r, double theta, double t) const;

    int modes() const { return static_cast<int>(mu_.size()); }
    const std::vector<double>& roots() const { return mu_; }

    // coefficient * Z1(mu_m r) for each mode; eval = sum_m profile_m sin(theta) e^{-mu_m^2 t}
    std::vector<double> radial_profile(double r) const;

private:
    std::vector<double> mu_;
    std::vector<double> coef_; // (pi^2/2) * projection_m * B_m
};

double annulus_exact(double r, double theta, double t, int m_max = 20);

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

// Local Peclet number max(|vx| Lx / Dx, |vy| Ly / Dy) sampled on the coarse grid,
// with the convection-dominated mask Pe > 1. Diagnostic only.
struct PecletField {
    int n1 = 0, n2 = 0;
    std::vector<double> x, y;   // physical sample positions, row-major
    std::vector<double> pe;
    std::vector<int> convection_dominated;
    double max_pe = 0.0;
};

PecletField peclet_field(const ProblemSpec& p, int nxi_samples, int neta_samples);

// One stored coarse state, used by the grid-independence check and run reports.
struct Snapshot {
    double t = 0.0;
    int Nxi = 0, Neta = 0;
    std::vector<double> U; // (Nxi+1)*(Neta+1), row-major over xi
};

using Trajectory = std::vector<Snapshot>;

// Max rate of change (percent) between a run and its 2x refinement over shared
// nodes and shared snapshot times. Throws GridMismatch if fine is not a
// refinement or no snapshot times are shared.
double grid_independence(const Trajectory& coarse, const Trajectory& fine);

} // namespace patchdyn::problems
