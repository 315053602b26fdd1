#pragma once

#include <array>
#include <memory>
#include <vector>

#include "patchdyn/field.hpp"
#include "patchdyn/microsim.hpp"
#include "patchdyn/problems.hpp"
#include "patchdyn/scheme_config.hpp"

namespace patchdyn::gaptooth {

enum class SidePolicy { DirichletFromProblem, Periodic };

enum Side : int { SideW = 0, SideE = 1, SideS = 2, SideN = 3 };

struct CoarseGrid {
    double a = 0, b = 1, c = 0, d = 1;
    int Nxi = 1, Neta = 1;
    double dxi() const { return (b - a) / Nxi; }
    double deta() const { return (d - c) / Neta; }
    double xi(int i) const { return a + dxi() * i; }
    double eta(int j) const { return c + deta() * j; }
};

// Macroscale values on the equidistant (Nxi+1)x(Neta+1) computational grid.
struct CoarseField {
    CoarseGrid grid;
    std::array<SidePolicy, 4> policy{SidePolicy::DirichletFromProblem,
                                     SidePolicy::DirichletFromProblem,
                                     SidePolicy::DirichletFromProblem,
                                     SidePolicy::DirichletFromProblem};
    Field2D U;

    bool periodic_xi() const { return policy[SideW] == SidePolicy::Periodic; }
    double& at(int i, int j) { return U(i, j); }
    double at(int i, int j) const { return U(i, j); }
};

// Tensor Lagrange polynomial of degree 2 through a 3x3 stencil of coarse values,
// expressed in offsets from the center node.
struct StencilPoly {
    double xi_c = 0, eta_c = 0;
    double dxi = 1, deta = 1;
    double vals[3][3] = {}; // [p+1][q+1], p along xi

    double eval(double xi, double eta) const;
    double d_xi(double xi, double eta) const;
    double d_eta(double xi, double eta) const;

    struct CenterDerivs {
        double U, Uxi, Ueta, Uxixi, Uxieta, Uetaeta;
    };
    // Derivatives of the interpolant at the center node; on the uniform grid these
    // coincide with the second-order central differences of the stencil values.
    CenterDerivs center() const;
};

// 3x3 stencil around interior node (i,j); wraps modulo Nxi on a periodic side,
// shifting the wrapped abscissae so the window stays contiguous.
StencilPoly build_stencil(const CoarseField& F, int i, int j);

struct EdgeProfiles {
    std::vector<double> E, W; // sampled along eta, length ny+1
    std::vector<double> N, S; // sampled along xi, length nx+1
};

EdgeProfiles dirichlet_edge_values(const StencilPoly& s, double h_xi, double h_eta, int nx,
                                   int ny);
EdgeProfiles neumann_edge_slopes(const StencilPoly& s, double h_xi, double h_eta, int nx, int ny);

// Quadratic lifting with the box-average-matching constant; sampled at micro nodes.
Field2D lift(const StencilPoly& s, double h_xi, double h_eta, const microsim::MicroGrid& g);

// Patch box average of a micro field by composite quadrature.
double restrict_average(const Field2D& u,
                        cpi::SchemeConfig::Quadrature q = cpi::SchemeConfig::Quadrature::Trapezoid);

// Runs the whole-grid gap-tooth step: stencil -> patch BCs -> lift -> micro
// evolution -> restriction, with per-patch integrators cached across steps and an
// exact linear-response fast path for problems whose step is a fixed 9-point map.
class GapToothEngine {
public:
    GapToothEngine(const problems::ProblemSpec& problem, const cpi::SchemeConfig& cfg);

    CoarseField initial_field() const;
    void refresh_boundary(CoarseField& F, double t) const;

    // One gap-tooth step from t to t+tau; boundary nodes refreshed at t+tau.
    CoarseField step(const CoarseField& F, double t) const;

    const CoarseGrid& grid() const { return grid_; }
    const cpi::SchemeConfig& config() const { return cfg_; }
    const problems::ProblemSpec& problem() const { return problem_; }
    const microsim::MicroGrid& micro_grid() const { return micro_; }
    bool fast_path_active() const { return use_fast_; }

    // Direct (no-cache) step, exposed so tests can pin fast == direct.
    CoarseField step_direct(const CoarseField& F, double t) const;

private:
    struct Patch {
        int i, j;
        std::unique_ptr<microsim::PatchIntegrator> integrator; // null when row-shared
    };

    double evolve_patch(const microsim::PatchIntegrator& integ, const StencilPoly& s,
                        double t) const;
    const microsim::PatchIntegrator& integrator_for(const Patch& p) const;
    void build_row_weights() const;

    problems::ProblemSpec problem_;
    cpi::SchemeConfig cfg_;
    CoarseGrid grid_;
    microsim::MicroGrid micro_;
    std::array<SidePolicy, 4> policy_;
    std::vector<Patch> patches_;
    std::vector<std::shared_ptr<microsim::PatchIntegrator>> row_share_; // indexed by j
    bool use_fast_ = false;
    mutable bool weights_ready_ = false;
    mutable std::vector<std::array<std::array<double, 3>, 3>> row_w_; // per eta-row weights
};

} // namespace patchdyn::gaptooth
