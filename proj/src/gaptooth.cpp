#include "patchdyn/gaptooth.hpp"

#include <cmath>
#include <sstream>

#include "patchdyn/errors.hpp"

namespace patchdyn::gaptooth {

// ---------------------------------------------------------------------------
// Tensor Lagrange interpolant
// ---------------------------------------------------------------------------

namespace {

// Degree-2 Lagrange basis on nodes {-D, 0, D}, evaluated at offset X.
inline void lagrange3(double X, double D, double out[3]) {
    const double invD2 = 1.0 / (D * D);
    out[0] = 0.5 * X * (X - D) * invD2;
    out[1] = 1.0 - X * X * invD2;
    out[2] = 0.5 * X * (X + D) * invD2;
}

inline void lagrange3_deriv(double X, double D, double out[3]) {
    const double invD2 = 1.0 / (D * D);
    out[0] = (X - 0.5 * D) * invD2;
    out[1] = -2.0 * X * invD2;
    out[2] = (X + 0.5 * D) * invD2;
}

} // namespace

double StencilPoly::eval(double xi, double eta) const {
    double Lp[3], Lq[3];
    lagrange3(xi - xi_c, dxi, Lp);
    lagrange3(eta - eta_c, deta, Lq);
    double acc = 0.0;
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) acc += Lp[p] * Lq[q] * vals[p][q];
    return acc;
}

double StencilPoly::d_xi(double xi, double eta) const {
    double Lp[3], Lq[3];
    lagrange3_deriv(xi - xi_c, dxi, Lp);
    lagrange3(eta - eta_c, deta, Lq);
    double acc = 0.0;
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) acc += Lp[p] * Lq[q] * vals[p][q];
    return acc;
}

double StencilPoly::d_eta(double xi, double eta) const {
    double Lp[3], Lq[3];
    lagrange3(xi - xi_c, dxi, Lp);
    lagrange3_deriv(eta - eta_c, deta, Lq);
    double acc = 0.0;
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) acc += Lp[p] * Lq[q] * vals[p][q];
    return acc;
}

StencilPoly::CenterDerivs StencilPoly::center() const {
    CenterDerivs d;
    d.U = vals[1][1];
    d.Uxi = (vals[2][1] - vals[0][1]) / (2.0 * dxi);
    d.Ueta = (vals[1][2] - vals[1][0]) / (2.0 * deta);
    d.Uxixi = (vals[2][1] - 2.0 * vals[1][1] + vals[0][1]) / (dxi * dxi);
    d.Uetaeta = (vals[1][2] - 2.0 * vals[1][1] + vals[1][0]) / (deta * deta);
    d.Uxieta = (vals[2][2] - vals[2][0] - vals[0][2] + vals[0][0]) / (4.0 * dxi * deta);
    return d;
}

StencilPoly build_stencil(const CoarseField& F, int i, int j) {
    const CoarseGrid& g = F.grid;
    if (j < 1 || j > g.Neta - 1) {
        std::ostringstream os;
        os << "stencil center j=" << j << " outside interior [1," << g.Neta - 1 << "]";
        throw IndexOutOfRange(os.str());
    }
    const bool per = F.periodic_xi();
    if (!per && (i < 1 || i > g.Nxi - 1)) {
        std::ostringstream os;
        os << "stencil center i=" << i << " outside interior [1," << g.Nxi - 1 << "]";
        throw IndexOutOfRange(os.str());
    }
    StencilPoly s;
    s.dxi = g.dxi();
    s.deta = g.deta();
    s.eta_c = g.eta(j);
    if (per) {
        const int iw = ((i % g.Nxi) + g.Nxi) % g.Nxi;
        s.xi_c = g.xi(iw);
        for (int p = -1; p <= 1; ++p) {
            const int ip = ((iw + p) % g.Nxi + g.Nxi) % g.Nxi;
            for (int q = -1; q <= 1; ++q) s.vals[p + 1][q + 1] = F.at(ip, j + q);
        }
    } else {
        s.xi_c = g.xi(i);
        for (int p = -1; p <= 1; ++p)
            for (int q = -1; q <= 1; ++q) s.vals[p + 1][q + 1] = F.at(i + p, j + q);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Patch boundary profiles, lifting, restriction
// ---------------------------------------------------------------------------

EdgeProfiles dirichlet_edge_values(const StencilPoly& s, double h_xi, double h_eta, int nx,
                                   int ny) {
    EdgeProfiles out;
    out.E.resize(ny + 1);
    out.W.resize(ny + 1);
    out.N.resize(nx + 1);
    out.S.resize(nx + 1);
    const double xiE = s.xi_c + 0.5 * h_xi, xiW = s.xi_c - 0.5 * h_xi;
    const double etaN = s.eta_c + 0.5 * h_eta, etaS = s.eta_c - 0.5 * h_eta;
    for (int j = 0; j <= ny; ++j) {
        const double eta = etaS + h_eta * j / ny;
        out.E[j] = s.eval(xiE, eta);
        out.W[j] = s.eval(xiW, eta);
    }
    for (int i = 0; i <= nx; ++i) {
        const double xi = xiW + h_xi * i / nx;
        out.N[i] = s.eval(xi, etaN);
        out.S[i] = s.eval(xi, etaS);
    }
    return out;
}

EdgeProfiles neumann_edge_slopes(const StencilPoly& s, double h_xi, double h_eta, int nx,
                                 int ny) {
    EdgeProfiles out;
    out.E.resize(ny + 1);
    out.W.resize(ny + 1);
    out.N.resize(nx + 1);
    out.S.resize(nx + 1);
    const double xiE = s.xi_c + 0.5 * h_xi, xiW = s.xi_c - 0.5 * h_xi;
    const double etaN = s.eta_c + 0.5 * h_eta, etaS = s.eta_c - 0.5 * h_eta;
    for (int j = 0; j <= ny; ++j) {
        const double eta = etaS + h_eta * j / ny;
        out.E[j] = s.d_xi(xiE, eta);
        out.W[j] = s.d_xi(xiW, eta);
    }
    for (int i = 0; i <= nx; ++i) {
        const double xi = xiW + h_xi * i / nx;
        out.N[i] = s.d_eta(xi, etaN);
        out.S[i] = s.d_eta(xi, etaS);
    }
    return out;
}

Field2D lift(const StencilPoly& s, double h_xi, double h_eta, const microsim::MicroGrid& g) {
    const StencilPoly::CenterDerivs d = s.center();
    const double C0 =
        d.U - h_xi * h_xi / 24.0 * d.Uxixi - h_eta * h_eta / 24.0 * d.Uetaeta;
    Field2D u(g.nx + 1, g.ny + 1);
    for (int i = 0; i <= g.nx; ++i) {
        const double X = -0.5 * h_xi + g.dxi * i;
        for (int j = 0; j <= g.ny; ++j) {
            const double Y = -0.5 * h_eta + g.deta * j;
            u(i, j) = C0 + X * d.Uxi + Y * d.Ueta + 0.5 * X * X * d.Uxixi + X * Y * d.Uxieta +
                      0.5 * Y * Y * d.Uetaeta;
        }
    }
    return u;
}

double restrict_average(const Field2D& u, cpi::SchemeConfig::Quadrature q) {
    const int nx = u.n1() - 1, ny = u.n2() - 1;
    auto weights = [&](int n) {
        std::vector<double> w(n + 1);
        if (q == cpi::SchemeConfig::Quadrature::Trapezoid) {
            for (int i = 0; i <= n; ++i) w[i] = (i == 0 || i == n) ? 0.5 / n : 1.0 / n;
        } else {
            if (n % 2 != 0)
                throw ValidationError("Simpson restriction needs an even micro resolution");
            for (int i = 0; i <= n; ++i) {
                double c = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
                w[i] = c / (3.0 * n);
            }
        }
        return w;
    };
    const std::vector<double> wx = weights(nx), wy = weights(ny);
    double acc = 0.0;
    for (int i = 0; i <= nx; ++i) {
        double row = 0.0;
        for (int j = 0; j <= ny; ++j) row += wy[j] * u(i, j);
        acc += wx[i] * row;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

GapToothEngine::GapToothEngine(const problems::ProblemSpec& problem, const cpi::SchemeConfig& cfg)
    : problem_(problem), cfg_(cfg) {
    cfg_.validate(problem.b - problem.a, problem.d - problem.c);
    grid_ = CoarseGrid{problem.a, problem.b, problem.c, problem.d, cfg.N_xi, cfg.N_eta};
    micro_ = microsim::make_micro_grid(cfg.h_xi, cfg.h_eta, cfg.tau, cfg.nx, cfg.ny, cfg.nt);
    policy_ = {problem.periodic_xi ? SidePolicy::Periodic : SidePolicy::DirichletFromProblem,
               problem.periodic_xi ? SidePolicy::Periodic : SidePolicy::DirichletFromProblem,
               SidePolicy::DirichletFromProblem, SidePolicy::DirichletFromProblem};
    if (!problem.periodic_xi && (!problem.bcW || !problem.bcE))
        throw ValidationError("problem lacks W/E boundary functions");
    if (!problem.bcS || !problem.bcN)
        throw ValidationError("problem lacks S/N boundary functions");

    const bool linear_eligible = problem.coeffs_time_independent && problem.source_zero &&
                                 problem.coeffs_xi_independent;
    switch (cfg.linear_cache) {
        case cpi::SchemeConfig::LinearCache::Off: use_fast_ = false; break;
        case cpi::SchemeConfig::LinearCache::Auto: use_fast_ = linear_eligible; break;
        case cpi::SchemeConfig::LinearCache::On:
            if (!linear_eligible)
                throw ValidationError(
                    "linear_cache=on requires time-independent coefficients, a zero source and "
                    "xi-independent coefficients");
            use_fast_ = true;
            break;
    }

    const geometry::Mapping map = problem_.mapping;
    const geometry::PhysicalCoefficients phys = problem_.physical;
    microsim::CoeffSampler sampler = [map, phys](double xi, double eta, double t) {
        return geometry::transform_coefficients(map, phys, xi, eta, t);
    };
    microsim::SourceSpec source;
    if (problem_.source_zero) {
        source.zero = true;
    } else if (problem_.source_separable) {
        source.zero = false;
        source.separable = true;
        source.spatial = problem_.source_spatial;
        source.time = problem_.source_time;
    } else {
        source.zero = false;
        source.general = [map, phys](double xi, double eta, double t) {
            const auto xy = map.forward(xi, eta);
            return phys.phi(xy.x, xy.y, t);
        };
    }
    const auto scheme = cfg.solver == cpi::SchemeConfig::Solver::ADI
                            ? microsim::PatchIntegrator::Scheme::ADI
                            : microsim::PatchIntegrator::Scheme::Explicit;

    const int i_lo = problem_.periodic_xi ? 0 : 1;
    const int i_hi = grid_.Nxi - 1;
    // With xi-independent coefficients one integrator per eta-row serves the row.
    const bool share_rows = problem_.coeffs_time_independent && problem_.coeffs_xi_independent &&
                            problem_.source_zero;
    std::vector<std::shared_ptr<microsim::PatchIntegrator>> row_cache;
    if (share_rows) row_cache.resize(grid_.Neta);

    for (int j = 1; j <= grid_.Neta - 1; ++j) {
        std::shared_ptr<microsim::PatchIntegrator> shared;
        if (share_rows) {
            shared = std::make_shared<microsim::PatchIntegrator>(
                grid_.xi(i_lo), grid_.eta(j), micro_, phys.l, sampler,
                problem_.coeffs_time_independent, source, scheme, cfg.upwind);
            row_cache[j] = shared;
        }
        for (int i = i_lo; i <= i_hi; ++i) {
            Patch p;
            p.i = i;
            p.j = j;
            if (share_rows) {
                p.integrator = nullptr; // row-shared, looked up via row_share_
            } else {
                p.integrator = std::make_unique<microsim::PatchIntegrator>(
                    grid_.xi(i), grid_.eta(j), micro_, phys.l, sampler,
                    problem_.coeffs_time_independent, source, scheme, cfg.upwind);
            }
            patches_.push_back(std::move(p));
        }
    }
    row_share_ = std::move(row_cache);
}

CoarseField GapToothEngine::initial_field() const {
    CoarseField F;
    F.grid = grid_;
    F.policy = policy_;
    F.U = Field2D(grid_.Nxi + 1, grid_.Neta + 1);
    for (int i = 0; i <= grid_.Nxi; ++i)
        for (int j = 0; j <= grid_.Neta; ++j) F.U(i, j) = problem_.initial(grid_.xi(i), grid_.eta(j));
    if (problem_.periodic_xi)
        for (int j = 0; j <= grid_.Neta; ++j) F.U(grid_.Nxi, j) = F.U(0, j);
    return F;
}

void GapToothEngine::refresh_boundary(CoarseField& F, double t) const {
    const int N1 = grid_.Nxi, N2 = grid_.Neta;
    for (int i = 0; i <= N1; ++i) {
        F.U(i, 0) = problem_.bcS(grid_.xi(i), t);
        F.U(i, N2) = problem_.bcN(grid_.xi(i), t);
    }
    if (problem_.periodic_xi) {
        for (int j = 0; j <= N2; ++j) F.U(N1, j) = F.U(0, j);
    } else {
        for (int j = 0; j <= N2; ++j) {
            F.U(0, j) = problem_.bcW(grid_.eta(j), t);
            F.U(N1, j) = problem_.bcE(grid_.eta(j), t);
        }
    }
}

double GapToothEngine::evolve_patch(const microsim::PatchIntegrator& integ, const StencilPoly& s,
                                    double t) const {
    std::array<microsim::EdgeCondition, 4> edges;
    switch (cfg_.bc_type) {
        case cpi::SchemeConfig::BCType::Robin: {
            EdgeProfiles vals =
                dirichlet_edge_values(s, cfg_.h_xi, cfg_.h_eta, micro_.nx, micro_.ny);
            EdgeProfiles slopes =
                neumann_edge_slopes(s, cfg_.h_xi, cfg_.h_eta, micro_.nx, micro_.ny);
            edges[microsim::EdgeE] =
                microsim::robin_edge(cfg_.robin_w1, cfg_.robin_w2, vals.E, slopes.E);
            edges[microsim::EdgeW] =
                microsim::robin_edge(cfg_.robin_w1, cfg_.robin_w2, vals.W, slopes.W);
            edges[microsim::EdgeN] =
                microsim::robin_edge(cfg_.robin_w1, cfg_.robin_w2, vals.N, slopes.N);
            edges[microsim::EdgeS] =
                microsim::robin_edge(cfg_.robin_w1, cfg_.robin_w2, vals.S, slopes.S);
            break;
        }
        case cpi::SchemeConfig::BCType::Dirichlet: {
            EdgeProfiles vals =
                dirichlet_edge_values(s, cfg_.h_xi, cfg_.h_eta, micro_.nx, micro_.ny);
            edges[microsim::EdgeE] = microsim::dirichlet_edge(std::move(vals.E));
            edges[microsim::EdgeW] = microsim::dirichlet_edge(std::move(vals.W));
            edges[microsim::EdgeN] = microsim::dirichlet_edge(std::move(vals.N));
            edges[microsim::EdgeS] = microsim::dirichlet_edge(std::move(vals.S));
            break;
        }
        case cpi::SchemeConfig::BCType::Neumann: {
            EdgeProfiles slopes =
                neumann_edge_slopes(s, cfg_.h_xi, cfg_.h_eta, micro_.nx, micro_.ny);
            edges[microsim::EdgeE] = microsim::neumann_edge(std::move(slopes.E));
            edges[microsim::EdgeW] = microsim::neumann_edge(std::move(slopes.W));
            edges[microsim::EdgeN] = microsim::neumann_edge(std::move(slopes.N));
            edges[microsim::EdgeS] = microsim::neumann_edge(std::move(slopes.S));
            break;
        }
    }
    const Field2D u0 = lift(s, cfg_.h_xi, cfg_.h_eta, micro_);
    const Field2D uT = integ.integrate(u0, edges, t);
    return restrict_average(uT, cfg_.quadrature);
}

const microsim::PatchIntegrator& GapToothEngine::integrator_for(const Patch& p) const {
    if (p.integrator) return *p.integrator;
    return *row_share_[p.j];
}

CoarseField GapToothEngine::step_direct(const CoarseField& F, double t) const {
    CoarseField out = F;
    for (const Patch& p : patches_) {
        StencilPoly s;
        try {
            s = build_stencil(F, p.i, p.j);
            out.U(p.i, p.j) = evolve_patch(integrator_for(p), s, t);
        } catch (const Error& err) {
            std::ostringstream os;
            os << "patch (" << p.i << "," << p.j << "): " << err.what();
            throw MacroPatchError(os.str());
        }
    }
    refresh_boundary(out, t + cfg_.tau);
    return out;
}

void GapToothEngine::build_row_weights() const {
    row_w_.assign(grid_.Neta, {});
    const int i0 = problem_.periodic_xi ? 0 : 1;
    for (int j = 1; j <= grid_.Neta - 1; ++j) {
        const microsim::PatchIntegrator& integ = *row_share_[j];
        for (int p = -1; p <= 1; ++p) {
            for (int q = -1; q <= 1; ++q) {
                StencilPoly s;
                s.xi_c = grid_.xi(i0);
                s.eta_c = grid_.eta(j);
                s.dxi = grid_.dxi();
                s.deta = grid_.deta();
                s.vals[p + 1][q + 1] = 1.0;
                row_w_[j][p + 1][q + 1] = evolve_patch(integ, s, 0.0);
            }
        }
    }
    weights_ready_ = true;
}

CoarseField GapToothEngine::step(const CoarseField& F, double t) const {
    if (!use_fast_) return step_direct(F, t);
    if (!weights_ready_) build_row_weights();
    CoarseField out = F;
    const int N1 = grid_.Nxi;
    const int i_lo = problem_.periodic_xi ? 0 : 1;
    const int i_hi = N1 - 1;
    for (int j = 1; j <= grid_.Neta - 1; ++j) {
        const auto& w = row_w_[j];
        for (int i = i_lo; i <= i_hi; ++i) {
            double acc = 0.0;
            for (int p = -1; p <= 1; ++p) {
                int ip = i + p;
                if (problem_.periodic_xi) ip = ((ip % N1) + N1) % N1;
                for (int q = -1; q <= 1; ++q) acc += w[p + 1][q + 1] * F.U(ip, j + q);
            }
            out.U(i, j) = acc;
        }
    }
    refresh_boundary(out, t + cfg_.tau);
    return out;
}

} // namespace patchdyn::gaptooth
