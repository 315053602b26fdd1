#include "patchdyn/cpi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "patchdyn/errors.hpp"

namespace patchdyn::cpi {

void SchemeConfig::validate(double domain_xi_extent, double domain_eta_extent) const {
    auto fail = [](const std::string& m) { throw ValidationError(m); };
    if (N_xi < 2 || N_eta < 2) fail("coarse grid needs at least 2 intervals per direction");
    if (Nt < 1) fail("Nt must be at least 1");
    if (!(T > 0)) fail("final time T must be positive");
    if (!(tau > 0)) fail("gap-tooth horizon tau must be positive");
    if (k < 0) fail("k must be non-negative");
    if (!((k + 1) * tau < dt())) {
        std::ostringstream os;
        os << "(k+1)*tau = " << (k + 1) * tau << " must stay below the macro step dt = " << dt();
        fail(os.str());
    }
    if (!(h_xi > 0 && h_eta > 0)) fail("patch extents must be positive");
    const double dxi = domain_xi_extent / N_xi;
    const double deta = domain_eta_extent / N_eta;
    if (h_xi > dxi * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "h_xi = " << h_xi << " exceeds the coarse spacing " << dxi
           << " (patches must not overlap)";
        fail(os.str());
    }
    if (h_eta > deta * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "h_eta = " << h_eta << " exceeds the coarse spacing " << deta
           << " (patches must not overlap)";
        fail(os.str());
    }
    if (nx < 2 || ny < 2) fail("micro resolution needs nx, ny >= 2");
    if (nt < 1) fail("micro time steps nt must be >= 1");
    if (quadrature == Quadrature::Simpson && (nx % 2 != 0 || ny % 2 != 0))
        fail("Simpson restriction needs even nx and ny");
    if (bc_type == BCType::Robin && robin_w1 == 0.0 && robin_w2 == 0.0)
        fail("robin patch conditions need nonzero weights");
}

Field2D estimate_derivative(const gaptooth::CoarseField& Uk, const gaptooth::CoarseField& Uk1,
                            double tau) {
    if (!Uk.U.same_shape(Uk1.U)) throw ShapeMismatch("derivative estimate on mismatched fields");
    const int N1 = Uk.grid.Nxi, N2 = Uk.grid.Neta;
    Field2D F(N1 + 1, N2 + 1, 0.0);
    const int i_lo = Uk.periodic_xi() ? 0 : 1;
    const int i_hi = N1 - 1;
    for (int i = i_lo; i <= i_hi; ++i)
        for (int j = 1; j <= N2 - 1; ++j) F(i, j) = (Uk1.at(i, j) - Uk.at(i, j)) / tau;
    return F;
}

gaptooth::CoarseField projective_step(const gaptooth::GapToothEngine& engine,
                                      const gaptooth::CoarseField& U, double t) {
    const SchemeConfig& cfg = engine.config();
    const int k = cfg.k;
    std::vector<gaptooth::CoarseField> chain;
    chain.reserve(k + 2);
    chain.push_back(U);
    for (int m = 0; m <= k; ++m) chain.push_back(engine.step(chain.back(), t + m * cfg.tau));

    const Field2D F = estimate_derivative(chain[k], chain[k + 1], cfg.tau);
    gaptooth::CoarseField out = U;
    const int N1 = out.grid.Nxi, N2 = out.grid.Neta;
    const int i_lo = out.periodic_xi() ? 0 : 1;
    const double horizon = cfg.dt() - k * cfg.tau;
    for (int i = i_lo; i <= N1 - 1; ++i)
        for (int j = 1; j <= N2 - 1; ++j)
            out.U(i, j) = chain[k].at(i, j) + horizon * F(i, j);
    engine.refresh_boundary(out, t + cfg.dt());
    return out;
}

double max_percent_error(const gaptooth::GapToothEngine& engine, const gaptooth::CoarseField& U,
                         double t) {
    const problems::ProblemSpec& p = engine.problem();
    if (!p.has_exact()) return 0.0;
    const gaptooth::CoarseGrid& g = engine.grid();
    const int i_lo = U.periodic_xi() ? 0 : 1;
    double worst = 0.0;
    for (int i = i_lo; i <= g.Nxi - 1; ++i) {
        for (int j = 1; j <= g.Neta - 1; ++j) {
            const double ex = p.exact(g.xi(i), g.eta(j), t);
            if (std::abs(ex) < 1e-12) continue;
            worst = std::max(worst, std::abs(U.at(i, j) - ex) / std::abs(ex) * 100.0);
        }
    }
    return worst;
}

namespace {

problems::Snapshot take_snapshot(const gaptooth::CoarseField& U, double t) {
    problems::Snapshot s;
    s.t = t;
    s.Nxi = U.grid.Nxi;
    s.Neta = U.grid.Neta;
    s.U = U.U.raw();
    return s;
}

void check_compatibility(const gaptooth::GapToothEngine& engine,
                         const gaptooth::CoarseField& U0) {
    const problems::ProblemSpec& p = engine.problem();
    const gaptooth::CoarseGrid& g = engine.grid();
    double worst = 0.0;
    for (int i = 0; i <= g.Nxi; ++i) {
        worst = std::max(worst, std::abs(U0.at(i, 0) - p.bcS(g.xi(i), 0.0)));
        worst = std::max(worst, std::abs(U0.at(i, g.Neta) - p.bcN(g.xi(i), 0.0)));
    }
    if (p.periodic_xi) {
        for (int j = 0; j <= g.Neta; ++j)
            worst = std::max(worst, std::abs(U0.at(0, j) - U0.at(g.Nxi, j)));
    } else {
        for (int j = 0; j <= g.Neta; ++j) {
            worst = std::max(worst, std::abs(U0.at(0, j) - p.bcW(g.eta(j), 0.0)));
            worst = std::max(worst, std::abs(U0.at(g.Nxi, j) - p.bcE(g.eta(j), 0.0)));
        }
    }
    if (worst > 1e-10) {
        std::ostringstream os;
        os << "initial and boundary data disagree on the boundary at t=0 by " << worst;
        throw ValidationError(os.str());
    }
}

} // namespace

RunResult run(const gaptooth::GapToothEngine& engine, const RunOptions& opts) {
    const SchemeConfig& cfg = engine.config();
    const double dt = cfg.dt();

    gaptooth::CoarseField U = engine.initial_field();
    check_compatibility(engine, U);
    engine.refresh_boundary(U, 0.0);

    double scale0 = 0.0;
    for (double v : U.U.raw()) scale0 = std::max(scale0, std::abs(v));
    const double blowup = 10.0 * std::max(scale0, 1e-12);

    RunResult res;
    res.times.reserve(cfg.Nt);
    if (engine.problem().has_exact()) res.step_max_pct_err.reserve(cfg.Nt);
    for (auto [pi, pj] : opts.probe_nodes) {
        ProbeSeries ps;
        ps.i = pi;
        ps.j = pj;
        ps.values.reserve(cfg.Nt);
        res.probes.push_back(std::move(ps));
    }

    // Snapshot step indices (nearest macro step to each requested time).
    std::vector<int> snap_steps;
    for (double ts : opts.snapshot_times) {
        const int n = static_cast<int>(std::lround(ts / dt));
        snap_steps.push_back(std::clamp(n, 0, cfg.Nt));
    }
    auto maybe_snapshot = [&](int n, double t) {
        for (std::size_t s = 0; s < snap_steps.size(); ++s) {
            if (snap_steps[s] == n) {
                res.snapshots.push_back(take_snapshot(U, t));
                snap_steps[s] = -1; // once
                break;
            }
        }
    };
    maybe_snapshot(0, 0.0);

    const bool has_exact = engine.problem().has_exact();
    for (int n = 0; n < cfg.Nt; ++n) {
        const double t = n * dt;
        try {
            U = projective_step(engine, U, t);
        } catch (const MacroPatchError& e) {
            std::ostringstream os;
            os << "macro step " << n + 1 << " (t=" << t << "): " << e.what();
            throw MacroPatchError(os.str());
        }
        const double t1 = (n + 1) * dt;
        res.times.push_back(t1);

        double umax = 0.0;
        bool finite = true;
        for (double v : U.U.raw()) {
            if (!std::isfinite(v)) {
                finite = false;
                break;
            }
            umax = std::max(umax, std::abs(v));
        }
        if (!finite || umax > blowup) {
            std::ostringstream os;
            os << "coarse field " << (finite ? "exceeded 10x the initial magnitude" : "became non-finite")
               << " at macro step " << n + 1 << " (t=" << t1 << "); the projective step size is "
               << "likely beyond the stable range";
            throw MacroInstability(os.str());
        }

        for (ProbeSeries& ps : res.probes) ps.values.push_back(U.at(ps.i, ps.j));
        if (has_exact) {
            const double e = max_percent_error(engine, U, t1);
            res.step_max_pct_err.push_back(e);
            res.max_pct_err = std::max(res.max_pct_err, e);
        }
        maybe_snapshot(n + 1, t1);
        if (opts.progress_every > 0 && opts.progress && (n + 1) % opts.progress_every == 0)
            opts.progress(n + 1, t1, res.max_pct_err);
    }
    res.final_field = std::move(U);
    return res;
}

} // namespace patchdyn::cpi
