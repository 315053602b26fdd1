#include "patchdyn/microsim.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "patchdyn/errors.hpp"
#include "patchdyn/linalg.hpp"

namespace patchdyn::microsim {

namespace {
constexpr double kMixedTermTol = 1e-12;
constexpr double kStabilityLimit = 0.5;
} // namespace

MicroGrid make_micro_grid(double h_xi, double h_eta, double tau, int nx, int ny, int nt) {
    if (nx < 2 || ny < 2) throw ValidationError("micro grid needs nx, ny >= 2");
    if (nt < 1) throw ValidationError("micro grid needs nt >= 1");
    if (!(h_xi > 0 && h_eta > 0 && tau > 0))
        throw ValidationError("micro grid needs positive h_xi, h_eta, tau");
    return MicroGrid{nx, ny, nt, h_xi / nx, h_eta / ny, tau / nt};
}

EdgeCondition dirichlet_edge(std::vector<double> values) {
    EdgeCondition e;
    e.kind = EdgeKind::Dirichlet;
    e.value = std::move(values);
    return e;
}

EdgeCondition neumann_edge(std::vector<double> slopes) {
    EdgeCondition e;
    e.kind = EdgeKind::Neumann;
    e.slope = std::move(slopes);
    return e;
}

EdgeCondition robin_edge(double w1, double w2, std::vector<double> values,
                         std::vector<double> slopes) {
    if (w1 == 0.0 && w2 == 0.0) throw ValidationError("robin edge needs w1 or w2 nonzero");
    EdgeCondition e;
    e.kind = EdgeKind::Robin;
    e.w1 = w1;
    e.w2 = w2;
    e.value = std::move(values);
    e.slope = std::move(slopes);
    return e;
}

// ---------------------------------------------------------------------------
// Upwind stencils
// ---------------------------------------------------------------------------

namespace {

// Offsets/weights of the derivative stencil at a node; weights carry the 1/delta.
struct StencilW {
    int off[4];
    double w[4];
    int n;
};

StencilW make_upwind(UpwindOrder order, double r, double delta, int vel_sign) {
    StencilW s{};
    const double s1 = vel_sign >= 0 ? 1.0 : -1.0;
    switch (order) {
        case UpwindOrder::Two:
            s.n = 2;
            s.off[0] = 0;
            s.off[1] = vel_sign >= 0 ? -1 : 1;
            s.w[0] = s1 / delta;
            s.w[1] = -s1 / delta;
            break;
        case UpwindOrder::Three:
            // v>0: (3u_i - 4u_{i-1} + u_{i-2})/(2d), mirrored for v<0
            s.n = 3;
            s.off[0] = 0;
            s.off[1] = vel_sign >= 0 ? -1 : 1;
            s.off[2] = vel_sign >= 0 ? -2 : 2;
            s.w[0] = 3.0 * s1 / (2 * delta);
            s.w[1] = -4.0 * s1 / (2 * delta);
            s.w[2] = s1 / (2 * delta);
            break;
        case UpwindOrder::Four:
            // v>0: (u_{i+1}-u_{i-1})/(2d) + r/(3d) (u_{i-2}-3u_{i-1}+3u_i-u_{i+1})
            s.n = 4;
            if (vel_sign >= 0) {
                s.off[0] = 1;  s.w[0] = 1.0 / (2 * delta) - r / (3 * delta);
                s.off[1] = -1; s.w[1] = -1.0 / (2 * delta) - r / delta;
                s.off[2] = -2; s.w[2] = r / (3 * delta);
                s.off[3] = 0;  s.w[3] = r / delta;
            } else {
                s.off[0] = 1;  s.w[0] = 1.0 / (2 * delta) + r / delta;
                s.off[1] = -1; s.w[1] = -1.0 / (2 * delta) + r / (3 * delta);
                s.off[2] = 2;  s.w[2] = -r / (3 * delta);
                s.off[3] = 0;  s.w[3] = -r / delta;
            }
            break;
    }
    return s;
}

// Wider stencils drop to two-point where the window would leave the real grid;
// the two-point scheme may still reach one ghost node past the edge.
StencilW upwind_with_fallback(UpwindOrder order, double r, double delta, int vel_sign, int i,
                              int imax) {
    if (order != UpwindOrder::Two) {
        const StencilW s = make_upwind(order, r, delta, vel_sign);
        bool ok = true;
        for (int k = 0; k < s.n; ++k) {
            const int idx = i + s.off[k];
            if (idx < 0 || idx > imax) ok = false;
        }
        if (ok) return s;
    }
    return make_upwind(UpwindOrder::Two, r, delta, vel_sign);
}

} // namespace

double upwind_derivative(UpwindOrder order, double r, std::span<const double> line, int i,
                         double delta, int vel_sign) {
    const StencilW s = make_upwind(order, r, delta, vel_sign);
    double acc = 0.0;
    for (int k = 0; k < s.n; ++k) {
        const int idx = i + s.off[k];
        if (idx < 0 || idx >= static_cast<int>(line.size())) {
            std::ostringstream os;
            os << "upwind stencil needs node " << idx << " outside window [0,"
               << line.size() - 1 << "]";
            throw InsufficientStencil(os.str());
        }
        acc += s.w[k] * line[idx];
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Ghost nodes: ghost = cIn * u(inner) + cEdge * u(edge) + b[k]
// ---------------------------------------------------------------------------

namespace {

struct Ghost {
    bool pinned = false; // Dirichlet edge: nodes pinned, ghost unused
    double cIn = 0.0, cEdge = 0.0;
    std::vector<double> b;
};

Ghost make_ghost(const EdgeCondition& e, double delta, double sign, int len) {
    // sign = +1 on the high side (E/N), -1 on the low side (W/S)
    Ghost g;
    switch (e.kind) {
        case EdgeKind::Dirichlet:
            if (static_cast<int>(e.value.size()) != len)
                throw ShapeMismatch("dirichlet edge profile length mismatch");
            g.pinned = true;
            return g;
        case EdgeKind::Neumann:
            if (static_cast<int>(e.slope.size()) != len)
                throw ShapeMismatch("neumann edge profile length mismatch");
            g.cIn = 1.0;
            g.b.resize(len);
            for (int k = 0; k < len; ++k) g.b[k] = sign * 2.0 * delta * e.slope[k];
            return g;
        case EdgeKind::Robin: {
            if (static_cast<int>(e.value.size()) != len || static_cast<int>(e.slope.size()) != len)
                throw ShapeMismatch("robin edge profile length mismatch");
            if (std::abs(e.w2) < 1e-300) {
                g.pinned = true; // pure-value Robin behaves as Dirichlet
                return g;
            }
            g.cIn = 1.0;
            g.cEdge = -sign * 2.0 * delta * e.w1 / e.w2;
            g.b.resize(len);
            for (int k = 0; k < len; ++k) {
                const double q = e.w1 * e.value[k] + e.w2 * e.slope[k];
                g.b[k] = sign * 2.0 * delta * q / e.w2;
            }
            return g;
        }
    }
    return g;
}

// Pinned value for a Dirichlet-like edge node (value profile; Robin w2=0 folds value+slope).
double pinned_value(const EdgeCondition& e, int k) {
    if (e.kind == EdgeKind::Robin) return e.value[k] + e.w2 / e.w1 * e.slope[k];
    return e.value[k];
}

struct GhostSet {
    Ghost E, W, N, S;
};

} // namespace

// ---------------------------------------------------------------------------
// PatchIntegrator
// ---------------------------------------------------------------------------

PatchIntegrator::PatchIntegrator(double xi_c, double eta_c, const MicroGrid& grid, double l,
                                 CoeffSampler coeffs, bool coeffs_time_independent,
                                 SourceSpec source, Scheme scheme, UpwindSpec upwind)
    : grid_(grid),
      xi0_(xi_c - 0.5 * grid.dxi * grid.nx),
      eta0_(eta_c - 0.5 * grid.deta * grid.ny),
      l_(l),
      sampler_(std::move(coeffs)),
      static_coeffs_(coeffs_time_independent),
      source_(std::move(source)),
      scheme_(scheme),
      upwind_(upwind) {
    if (l_ == 0.0) throw ValidationError("time-derivative multiplier l must be nonzero");
    sample_coeffs(0.0, co0_);
    if (source_.separable) {
        source_spatial_ = Field2D(grid_.nx + 1, grid_.ny + 1);
        for (int i = 0; i <= grid_.nx; ++i)
            for (int j = 0; j <= grid_.ny; ++j)
                source_spatial_(i, j) = source_.spatial(node_xi(i), node_eta(j));
    }
}

void PatchIntegrator::sample_coeffs(double t, Coeffs& out) const {
    const int n1 = grid_.nx + 1, n2 = grid_.ny + 1;
    if (out.A.n1() != n1 || out.A.n2() != n2) {
        out.A = Field2D(n1, n2);
        out.C = Field2D(n1, n2);
        out.Vx = Field2D(n1, n2);
        out.Vy = Field2D(n1, n2);
        out.W = Field2D(n1, n2);
    }
    double max_diff = 0.0;
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            const geometry::TransformedCoefficients tc = sampler_(node_xi(i), node_eta(j), t);
            if (std::abs(tc.b) > kMixedTermTol) {
                std::ostringstream os;
                os << "mixed-derivative coefficient b=" << tc.b << " at patch node (" << i << ","
                   << j << "); only orthogonal mappings are supported";
                throw MixedTermUnsupported(os.str());
            }
            out.A(i, j) = -tc.a / l_;
            out.C(i, j) = -tc.c / l_;
            out.Vx(i, j) = tc.d / l_;
            out.Vy(i, j) = tc.e / l_;
            out.W(i, j) = tc.f / l_;
            max_diff = std::max({max_diff, std::abs(out.A(i, j)), std::abs(out.C(i, j))});
        }
    }
    if (scheme_ == Scheme::Explicit) {
        const double dmin = std::min(grid_.dxi, grid_.deta);
        const double number = max_diff * grid_.dt / (dmin * dmin);
        if (number > kStabilityLimit + 1e-12) {
            std::ostringstream os;
            os << "explicit micro scheme diffusive stability number " << number << " exceeds "
               << kStabilityLimit;
            throw StabilityViolation(os.str());
        }
    }
}

void PatchIntegrator::sample_source(double t, Field2D& out) const {
    const int n1 = grid_.nx + 1, n2 = grid_.ny + 1;
    if (out.n1() != n1 || out.n2() != n2) out = Field2D(n1, n2);
    if (source_.zero) {
        std::fill(out.raw().begin(), out.raw().end(), 0.0);
        return;
    }
    if (source_.separable) {
        const double ft = source_.time(t) / l_;
        const double* sp = source_spatial_.data();
        double* o = out.data();
        for (std::size_t k = 0; k < out.size(); ++k) o[k] = sp[k] * ft;
        return;
    }
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) out(i, j) = source_.general(node_xi(i), node_eta(j), t) / l_;
}

namespace {

inline bool node_pinned(const GhostSet& gs, int i, int j, int nx, int ny) {
    return (i == 0 && gs.W.pinned) || (i == nx && gs.E.pinned) || (j == 0 && gs.S.pinned) ||
           (j == ny && gs.N.pinned);
}

} // namespace

void PatchIntegrator::explicit_sweep(const Coeffs& co, const Field2D& G,
                                     const std::array<EdgeCondition, 4>& edges, const Field2D& u,
                                     Field2D& out) const {
    const int nx = grid_.nx, ny = grid_.ny;
    const double dxi = grid_.dxi, deta = grid_.deta, dt = grid_.dt;
    const GhostSet gs{make_ghost(edges[EdgeE], dxi, +1.0, ny + 1),
                      make_ghost(edges[EdgeW], dxi, -1.0, ny + 1),
                      make_ghost(edges[EdgeN], deta, +1.0, nx + 1),
                      make_ghost(edges[EdgeS], deta, -1.0, nx + 1)};
    const double idx2 = 1.0 / (dxi * dxi), idy2 = 1.0 / (deta * deta);
    const double idx = 1.0 / (2.0 * dxi), idy = 1.0 / (2.0 * deta);

    for (int i = 0; i <= nx; ++i) {
        for (int j = 0; j <= ny; ++j) {
            if (node_pinned(gs, i, j, nx, ny)) {
                if (i == 0 && gs.W.pinned) out(i, j) = pinned_value(edges[EdgeW], j);
                else if (i == nx && gs.E.pinned) out(i, j) = pinned_value(edges[EdgeE], j);
                else if (j == 0 && gs.S.pinned) out(i, j) = pinned_value(edges[EdgeS], i);
                else out(i, j) = pinned_value(edges[EdgeN], i);
                continue;
            }
            const double uc = u(i, j);
            const double uW =
                (i > 0) ? u(i - 1, j) : gs.W.cIn * u(1, j) + gs.W.cEdge * u(0, j) + gs.W.b[j];
            const double uE = (i < nx)
                                  ? u(i + 1, j)
                                  : gs.E.cIn * u(nx - 1, j) + gs.E.cEdge * u(nx, j) + gs.E.b[j];
            const double uS =
                (j > 0) ? u(i, j - 1) : gs.S.cIn * u(i, 1) + gs.S.cEdge * u(i, 0) + gs.S.b[i];
            const double uN = (j < ny)
                                  ? u(i, j + 1)
                                  : gs.N.cIn * u(i, ny - 1) + gs.N.cEdge * u(i, ny) + gs.N.b[i];
            const double uxx = (uW - 2.0 * uc + uE) * idx2;
            const double uyy = (uS - 2.0 * uc + uN) * idy2;
            const double ux = (uE - uW) * idx;
            const double uy = (uN - uS) * idy;
            out(i, j) = uc + dt * (co.A(i, j) * uxx + co.C(i, j) * uyy - co.Vx(i, j) * ux -
                                   co.Vy(i, j) * uy - co.W(i, j) * uc + G(i, j));
        }
    }
}

void PatchIntegrator::adi_sweep(const Coeffs& co, const Field2D& G,
                                const std::array<EdgeCondition, 4>& edges, Field2D& u) const {
    const int nx = grid_.nx, ny = grid_.ny;
    const double dxi = grid_.dxi, deta = grid_.deta;
    const double half = 0.5 * grid_.dt;
    const GhostSet gs{make_ghost(edges[EdgeE], dxi, +1.0, ny + 1),
                      make_ghost(edges[EdgeW], dxi, -1.0, ny + 1),
                      make_ghost(edges[EdgeN], deta, +1.0, nx + 1),
                      make_ghost(edges[EdgeS], deta, -1.0, nx + 1)};
    const bool banded = upwind_.order != UpwindOrder::Two;

    auto ghost_lo = [&](const Ghost& g, const Field2D& f, bool xi_dir, int k) {
        return xi_dir ? g.cIn * f(1, k) + g.cEdge * f(0, k) + g.b[k]
                      : g.cIn * f(k, 1) + g.cEdge * f(k, 0) + g.b[k];
    };
    auto ghost_hi = [&](const Ghost& g, const Field2D& f, bool xi_dir, int k) {
        return xi_dir ? g.cIn * f(nx - 1, k) + g.cEdge * f(nx, k) + g.b[k]
                      : g.cIn * f(k, ny - 1) + g.cEdge * f(k, ny) + g.b[k];
    };

    // Explicit operator in the direction not being swept; reaction carried half here.
    auto cross_term = [&](const Field2D& f, int i, int j, bool eta_dir) {
        if (eta_dir) {
            const double um = (j > 0) ? f(i, j - 1) : ghost_lo(gs.S, f, false, i);
            const double up = (j < ny) ? f(i, j + 1) : ghost_hi(gs.N, f, false, i);
            const double uc = f(i, j);
            const double uyy = (um - 2.0 * uc + up) / (deta * deta);
            const double v = co.Vy(i, j);
            const StencilW sw =
                upwind_with_fallback(upwind_.order, upwind_.r, deta, v >= 0 ? 1 : -1, j, ny);
            double du = 0.0;
            for (int k = 0; k < sw.n; ++k) {
                const int jj = j + sw.off[k];
                const double val = (jj < 0)    ? ghost_lo(gs.S, f, false, i)
                                   : (jj > ny) ? ghost_hi(gs.N, f, false, i)
                                               : f(i, jj);
                du += sw.w[k] * val;
            }
            return co.C(i, j) * uyy - v * du - 0.5 * co.W(i, j) * uc;
        }
        const double um = (i > 0) ? f(i - 1, j) : ghost_lo(gs.W, f, true, j);
        const double up = (i < nx) ? f(i + 1, j) : ghost_hi(gs.E, f, true, j);
        const double uc = f(i, j);
        const double uxx = (um - 2.0 * uc + up) / (dxi * dxi);
        const double v = co.Vx(i, j);
        const StencilW sw =
            upwind_with_fallback(upwind_.order, upwind_.r, dxi, v >= 0 ? 1 : -1, i, nx);
        double du = 0.0;
        for (int k = 0; k < sw.n; ++k) {
            const int ii = i + sw.off[k];
            const double val = (ii < 0)    ? ghost_lo(gs.W, f, true, j)
                               : (ii > nx) ? ghost_hi(gs.E, f, true, j)
                                           : f(ii, j);
            du += sw.w[k] * val;
        }
        return co.A(i, j) * uxx - v * du - 0.5 * co.W(i, j) * uc;
    };

    const int nmax = std::max(nx, ny) + 1;
    std::vector<double> lo(nmax), di(nmax), up(nmax), rhs(nmax), scratch(nmax);
    std::optional<BandedMatrix> band;

    // Solves (I - half*L_swept) out = rhs_field line by line.
    auto implicit_sweep = [&](const Field2D& rhs_field, Field2D& out, bool xi_dir) {
        const int nline = xi_dir ? ny : nx;
        const int n = xi_dir ? nx + 1 : ny + 1;
        const double dd = xi_dir ? dxi : deta;
        const Ghost& glo = xi_dir ? gs.W : gs.S;
        const Ghost& ghi = xi_dir ? gs.E : gs.N;
        const EdgeCondition& elo = xi_dir ? edges[EdgeW] : edges[EdgeS];
        const EdgeCondition& ehi = xi_dir ? edges[EdgeE] : edges[EdgeN];
        const Ghost& side_lo = xi_dir ? gs.S : gs.W;
        const Ghost& side_hi = xi_dir ? gs.N : gs.E;
        const EdgeCondition& eside_lo = xi_dir ? edges[EdgeS] : edges[EdgeW];
        const EdgeCondition& eside_hi = xi_dir ? edges[EdgeN] : edges[EdgeE];

        for (int line = 0; line <= nline; ++line) {
            if ((line == 0 && side_lo.pinned) || (line == nline && side_hi.pinned)) {
                const EdgeCondition& e = (line == 0) ? eside_lo : eside_hi;
                for (int k = 0; k < n; ++k) {
                    if (xi_dir) out(k, line) = pinned_value(e, k);
                    else out(line, k) = pinned_value(e, k);
                }
                continue;
            }
            if (banded) {
                if (!band) band.emplace(n, 2, 2);
                band->clear();
            }
            for (int k = 0; k < n; ++k) {
                const bool pin_lo = (k == 0 && glo.pinned), pin_hi = (k == n - 1 && ghi.pinned);
                if (pin_lo || pin_hi) {
                    if (banded) band->at(k, k) = 1.0;
                    else { di[k] = 1.0; lo[k] = 0.0; up[k] = 0.0; }
                    rhs[k] = pinned_value(pin_lo ? elo : ehi, line);
                    continue;
                }
                const int i = xi_dir ? k : line;
                const int j = xi_dir ? line : k;
                const double A = xi_dir ? co.A(i, j) : co.C(i, j);
                const double V = xi_dir ? co.Vx(i, j) : co.Vy(i, j);
                const double s = half * A / (dd * dd);
                double diag = 1.0 + 2.0 * s + half * 0.5 * co.W(i, j);
                double sub = -s, sup = -s;
                double lo2 = 0.0, hi2 = 0.0;
                double rr = rhs_field(i, j);

                const StencilW sw =
                    upwind_with_fallback(upwind_.order, upwind_.r, dd, V >= 0 ? 1 : -1, k, n - 1);
                for (int m = 0; m < sw.n; ++m) {
                    const double wgt = half * V * sw.w[m];
                    switch (sw.off[m]) {
                        case 0: diag += wgt; break;
                        case -1: sub += wgt; break;
                        case 1: sup += wgt; break;
                        case -2: lo2 += wgt; break;
                        default: hi2 += wgt; break;
                    }
                }
                if (k == 0) { // sub multiplies the low ghost
                    rr -= sub * glo.b[line];
                    diag += sub * glo.cEdge;
                    sup += sub * glo.cIn;
                    sub = 0.0;
                } else if (k == n - 1) {
                    rr -= sup * ghi.b[line];
                    diag += sup * ghi.cEdge;
                    sub += sup * ghi.cIn;
                    sup = 0.0;
                }
                rhs[k] = rr;
                if (banded) {
                    band->at(k, k) = diag;
                    if (k > 0) band->at(k, k - 1) = sub;
                    if (k < n - 1) band->at(k, k + 1) = sup;
                    if (lo2 != 0.0) band->at(k, k - 2) = lo2;
                    if (hi2 != 0.0) band->at(k, k + 2) = hi2;
                } else {
                    di[k] = diag;
                    lo[k] = sub;
                    up[k] = sup;
                }
            }
            std::span<double> r(rhs.data(), n);
            if (banded) {
                band->solve(r);
            } else {
                solve_tridiagonal(std::span<const double>(lo.data(), n),
                                  std::span<const double>(di.data(), n),
                                  std::span<const double>(up.data(), n), r, scratch);
            }
            for (int k = 0; k < n; ++k) {
                if (xi_dir) out(k, line) = rhs[k];
                else out(line, k) = rhs[k];
            }
        }
    };

    Field2D work(nx + 1, ny + 1), rhs_field(nx + 1, ny + 1);

    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j <= ny; ++j)
            rhs_field(i, j) = node_pinned(gs, i, j, nx, ny)
                                  ? 0.0
                                  : u(i, j) + half * (cross_term(u, i, j, true) + G(i, j));
    implicit_sweep(rhs_field, work, true);

    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j <= ny; ++j)
            rhs_field(i, j) = node_pinned(gs, i, j, nx, ny)
                                  ? 0.0
                                  : work(i, j) + half * (cross_term(work, i, j, false) + G(i, j));
    implicit_sweep(rhs_field, u, false);
}

Field2D PatchIntegrator::integrate(const Field2D& initial,
                                   const std::array<EdgeCondition, 4>& edges, double t0) const {
    const int nx = grid_.nx, ny = grid_.ny;
    if (initial.n1() != nx + 1 || initial.n2() != ny + 1)
        throw ShapeMismatch("initial field does not match the micro grid");

    for (int e = 0; e < 4; ++e) {
        const int len = (e == EdgeE || e == EdgeW) ? ny + 1 : nx + 1;
        if (edges[e].kind == EdgeKind::Dirichlet &&
            static_cast<int>(edges[e].value.size()) != len)
            throw ShapeMismatch("dirichlet edge profile length mismatch");
    }
    Field2D u = initial;
    // Dirichlet edges pin their nodes from the start of the horizon.
    if (edges[EdgeW].kind == EdgeKind::Dirichlet)
        for (int j = 0; j <= ny; ++j) u(0, j) = edges[EdgeW].value[j];
    if (edges[EdgeE].kind == EdgeKind::Dirichlet)
        for (int j = 0; j <= ny; ++j) u(nx, j) = edges[EdgeE].value[j];
    if (edges[EdgeS].kind == EdgeKind::Dirichlet)
        for (int i = 0; i <= nx; ++i) u(i, 0) = edges[EdgeS].value[i];
    if (edges[EdgeN].kind == EdgeKind::Dirichlet)
        for (int i = 0; i <= nx; ++i) u(i, ny) = edges[EdgeN].value[i];

    Field2D G(nx + 1, ny + 1);
    Field2D next(nx + 1, ny + 1);
    Coeffs fresh;
    for (int step = 0; step < grid_.nt; ++step) {
        const double t_co =
            scheme_ == Scheme::ADI ? t0 + (step + 0.5) * grid_.dt : t0 + step * grid_.dt;
        const Coeffs* co = &co0_;
        if (!static_coeffs_) {
            sample_coeffs(t_co, fresh);
            co = &fresh;
        }
        sample_source(t_co, G);
        if (scheme_ == Scheme::ADI) {
            adi_sweep(*co, G, edges, u);
        } else {
            explicit_sweep(*co, G, edges, u, next);
            std::swap(u, next);
        }
    }
    return u;
}

Field2D step_adi(const PatchProblem& p, const MicroGrid& g, UpwindSpec upwind) {
    PatchIntegrator pi(p.xi_c, p.eta_c, g, p.l, p.coeffs, p.coeffs_time_independent, p.source,
                       PatchIntegrator::Scheme::ADI, upwind);
    return pi.integrate(p.initial, p.edges, p.t0);
}

Field2D step_explicit(const PatchProblem& p, const MicroGrid& g) {
    PatchIntegrator pi(p.xi_c, p.eta_c, g, p.l, p.coeffs, p.coeffs_time_independent, p.source,
                       PatchIntegrator::Scheme::Explicit);
    return pi.integrate(p.initial, p.edges, p.t0);
}

} // namespace patchdyn::microsim
