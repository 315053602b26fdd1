#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "patchdyn/field.hpp"
#include "patchdyn/geometry.hpp"

namespace patchdyn::microsim {

// Micro discretization of one patch: (nx+1)x(ny+1) nodes, nt time steps over tau.
struct MicroGrid {
    int nx, ny, nt;
    double dxi, deta, dt;
    double tau() const { return dt * nt; }
};

MicroGrid make_micro_grid(double h_xi, double h_eta, double tau, int nx, int ny, int nt);

enum class EdgeKind { Dirichlet, Neumann, Robin };

// Edge order used throughout: E = +xi, W = -xi, N = +eta, S = -eta.
enum Edge : int { EdgeE = 0, EdgeW = 1, EdgeN = 2, EdgeS = 3 };

// One patch edge condition, sampled at the micro boundary nodes of that edge
// (length ny+1 for E/W, nx+1 for N/S). Slopes are coordinate derivatives
// (du/dxi on E/W, du/deta on N/S), not outward normals.
struct EdgeCondition {
    EdgeKind kind = EdgeKind::Neumann;
    std::vector<double> value;
    std::vector<double> slope;
    double w1 = 0.0, w2 = 0.0; // Robin: w1*u + w2*du/dcoord = w1*value + w2*slope
};

EdgeCondition dirichlet_edge(std::vector<double> values);
EdgeCondition neumann_edge(std::vector<double> slopes);
EdgeCondition robin_edge(double w1, double w2, std::vector<double> values,
                         std::vector<double> slopes);

enum class UpwindOrder { Two, Three, Four };

struct UpwindSpec {
    UpwindOrder order = UpwindOrder::Two;
    double r = 0.5; // modification weight of the four-point scheme
};

// One-sided first-derivative estimate at node i of a line of values.
// vel_sign > 0 means transport in the +coordinate direction (upstream is i-1).
// Throws InsufficientStencil when the window lacks the needed nodes; callers
// fall back to the two-point scheme near patch edges.
double upwind_derivative(UpwindOrder order, double r, std::span<const double> line, int i,
                         double delta, int vel_sign);

// Samples the transformed-equation coefficients at a point.
using CoeffSampler = std::function<geometry::TransformedCoefficients(double, double, double)>;

// Source term g(xi,eta,t) with optional structure the integrator can exploit.
struct SourceSpec {
    bool zero = true;
    bool separable = false;
    std::function<double(double, double, double)> general;
    std::function<double(double, double)> spatial; // separable: g = spatial * time
    std::function<double(double)> time;
};

// Everything needed to integrate one patch over one horizon.
struct PatchProblem {
    double xi_c = 0, eta_c = 0;   // patch center
    double h_xi = 0, h_eta = 0;   // patch extents
    double t0 = 0;                // start of the horizon
    double l = 1.0;
    CoeffSampler coeffs;
    bool coeffs_time_independent = true;
    SourceSpec source;
    Field2D initial;              // (nx+1)x(ny+1)
    std::array<EdgeCondition, 4> edges;
};

// Per-patch integrator. Construction samples and caches the static coefficient
// fields; integrate() is the hot path invoked once per gap-tooth substep.
class PatchIntegrator {
public:
    enum class Scheme { ADI, Explicit };

    PatchIntegrator(double xi_c, double eta_c, const MicroGrid& grid, double l,
                    CoeffSampler coeffs, bool coeffs_time_independent, SourceSpec source,
                    Scheme scheme, UpwindSpec upwind = {});

    // Evolves `initial` over nt steps from time t0 with frozen edge conditions.
    Field2D integrate(const Field2D& initial, const std::array<EdgeCondition, 4>& edges,
                      double t0) const;

    const MicroGrid& grid() const { return grid_; }
    double node_xi(int i) const { return xi0_ + i * grid_.dxi; }
    double node_eta(int j) const { return eta0_ + j * grid_.deta; }

private:
    struct Coeffs {
        Field2D A, C, Vx, Vy, W; // solver form: u_t = A uxx + C uyy - Vx ux - Vy uy - W u + G
    };

    void sample_coeffs(double t, Coeffs& out) const;
    void sample_source(double t, Field2D& out) const;
    void explicit_sweep(const Coeffs& co, const Field2D& G,
                        const std::array<EdgeCondition, 4>& edges, const Field2D& u,
                        Field2D& out) const;
    void adi_sweep(const Coeffs& co, const Field2D& G, const std::array<EdgeCondition, 4>& edges,
                   Field2D& u) const;

    MicroGrid grid_;
    double xi0_, eta0_; // coordinates of node (0,0)
    double l_;
    CoeffSampler sampler_;
    bool static_coeffs_;
    SourceSpec source_;
    Scheme scheme_;
    UpwindSpec upwind_;
    Coeffs co0_;             // samples at construction (reused when static)
    Field2D source_spatial_; // cached spatial factor for separable sources
};

// Single-shot entry points.
Field2D step_adi(const PatchProblem& p, const MicroGrid& g, UpwindSpec upwind = {});
Field2D step_explicit(const PatchProblem& p, const MicroGrid& g);

} // namespace patchdyn::microsim
