// Acceptance suite: runs every acceptance criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "patchdyn/cpi.hpp"
#include "patchdyn/errors.hpp"
#include "patchdyn/gaptooth.hpp"
#include "patchdyn/geometry.hpp"
#include "patchdyn/problems.hpp"

using namespace patchdyn;
using gaptooth::CoarseField;
using gaptooth::GapToothEngine;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

cpi::SchemeConfig cdr_config(int N, int Nt) {
    cpi::SchemeConfig s;
    s.N_xi = s.N_eta = N;
    s.Nt = Nt;
    s.T = 1.0;
    s.tau = 1e-6;
    s.k = 0;
    s.h_xi = s.h_eta = 1e-3;
    s.nx = s.ny = 10;
    s.nt = 2;
    s.solver = cpi::SchemeConfig::Solver::ADI;
    return s;
}

cpi::SchemeConfig annulus_config(int Nx, int Ny, int Nt, int micro_nt) {
    cpi::SchemeConfig s;
    s.N_xi = Nx;
    s.N_eta = Ny;
    s.Nt = Nt;
    s.T = 1.0;
    s.tau = 1e-6;
    s.k = 0;
    s.h_xi = s.h_eta = 1e-3;
    s.nx = s.ny = 20;
    s.nt = micro_nt;
    s.solver = cpi::SchemeConfig::Solver::Explicit;
    return s;
}

cpi::RunResult run_problem(const problems::ProblemSpec& p, const cpi::SchemeConfig& cfg,
                           const cpi::RunOptions& opts = {}) {
    const GapToothEngine engine(p, cfg);
    return cpi::run(engine, opts);
}

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

// ---------------------------------------------------------------------------

void criterion1() {
    try {
        const problems::ProblemSpec p = problems::problem1_constant(0.0);
        cpi::RunOptions opts;
        opts.probe_nodes = {{2, 2}, {4, 4}, {6, 6}, {8, 8}};
        const cpi::RunResult res = run_problem(p, cdr_config(10, 1001), opts);
        const double want[4] = {4.0544, 6.0466, 9.0183, 13.4543};
        bool pass = true;
        std::ostringstream os;
        os << "probe values at t=1 within +-0.002 of reference:";
        for (int k = 0; k < 4; ++k) {
            const double got = res.probes[k].values.back();
            pass = pass && std::abs(got - want[k]) <= 0.002;
            os << " " << fmt(got) << " (ref " << fmt(want[k]) << ")";
        }
        report(1, pass, os.str());
    } catch (const std::exception& e) {
        report(1, false, std::string("exception: ") + e.what());
    }
}

void criterion2() {
    try {
        const double lambdas[7] = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
        const double ref[7] = {0.0762, 0.0246, 0.0774, 0.1486, 0.2200, 0.2912, 0.3618};
        double err[7];
        bool within = true;
        for (int k = 0; k < 7; ++k) {
            const cpi::RunResult res =
                run_problem(problems::problem1_constant(lambdas[k]), cdr_config(10, 2000));
            err[k] = res.max_pct_err;
            within = within && err[k] <= 2.0 * ref[k];
            std::fprintf(stderr, "  lambda=%.1f max%%err=%.4f (paper %.4f)\n", lambdas[k], err[k],
                         ref[k]);
        }
        bool min_at_01 = true;
        for (int k = 0; k < 7; ++k)
            if (k != 1 && err[k] <= err[1]) min_at_01 = false;
        std::ostringstream os;
        os << "lambda sweep 11x11/Nt=2000 within 2x of reference and minimal at lambda=0.1 "
              "(errors:";
        for (double e : err) os << " " << fmt(e);
        os << ")";
        report(2, within && min_at_01, os.str());
    } catch (const std::exception& e) {
        report(2, false, std::string("exception: ") + e.what());
    }
}

void criterion3() {
    try {
        const double lambdas[6] = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
        double err[6];
        for (int k = 0; k < 6; ++k) {
            const cpi::RunResult res =
                run_problem(problems::problem1_variable(lambdas[k]), cdr_config(10, 2000));
            err[k] = res.max_pct_err;
            std::fprintf(stderr, "  var lambda=%.1f max%%err=%.4f\n", lambdas[k], err[k]);
        }
        bool min_at_01 = true;
        for (int k = 0; k < 6; ++k)
            if (k != 1 && err[k] <= err[1]) min_at_01 = false;
        const bool small = err[1] <= 0.02;
        std::ostringstream os;
        os << "variable diffusivity: lambda=0.1 error " << fmt(err[1])
           << " <= 0.02 and minimal over the sweep";
        report(3, small && min_at_01, os.str());
    } catch (const std::exception& e) {
        report(3, false, std::string("exception: ") + e.what());
    }
}

std::vector<double> g_c4_probe_series; // reused by criterion 8
std::vector<double> g_c4_probe_times;

void criterion4() {
    try {
        struct Row {
            int Nx, Ny, Nt, micro_nt;
        };
        // micro nt = 1700 on the finest grid keeps the explicit patch update inside
        // the two-direction diffusion limit near r = 1 (1500 is unstable there)
        const Row rows[3] = {{16, 10, 500, 1500}, {32, 20, 2000, 1500}, {64, 40, 8000, 1700}};
        double e1[3];
        const problems::ProblemSpec p = problems::problem2_annulus();
        for (int k = 0; k < 3; ++k) {
            cpi::RunOptions opts;
            if (k == 0) {
                // record the (theta, r) = (pi/2, 1.5) probe for the decay-rate fit
                opts.probe_nodes = {{4, 5}};
            }
            const cpi::RunResult res =
                run_problem(p, annulus_config(rows[k].Nx, rows[k].Ny, rows[k].Nt, rows[k].micro_nt),
                            opts);
            e1[k] = res.step_max_pct_err.back();
            if (k == 0) {
                g_c4_probe_series = res.probes[0].values;
                g_c4_probe_times = res.times;
            }
            std::fprintf(stderr, "  annulus (%d,%d,%d) nt=%d: err(t=1)=%.4f\n", rows[k].Nx,
                         rows[k].Ny, rows[k].Nt, rows[k].micro_nt, e1[k]);
        }
        const bool band0 = std::abs(e1[0] - 2.5569) <= 0.25 * 2.5569;
        const bool band2 = std::abs(e1[2] - 0.3518) <= 0.25 * 0.3518;
        const bool mono = e1[0] > e1[1] && e1[1] > e1[2];
        std::ostringstream os;
        os << "annulus ladder errors at t=1: " << fmt(e1[0]) << " (ref 2.5569), " << fmt(e1[1])
           << ", " << fmt(e1[2]) << " (ref 0.3518); within 25% at both ends and monotone";
        report(4, band0 && band2 && mono, os.str());
    } catch (const std::exception& e) {
        report(4, false, std::string("exception: ") + e.what());
    }
}

void criterion5() {
    try {
        std::vector<double> times;
        for (int k = 1; k <= 20; ++k) times.push_back(0.05 * k);
        auto snapshots_of = [&](const problems::ProblemSpec& p, int N, int Nt) {
            cpi::RunOptions opts;
            opts.snapshot_times = times;
            const cpi::RunResult res = run_problem(p, cdr_config(N, Nt), opts);
            return res.snapshots;
        };
        const double rate_const =
            problems::grid_independence(snapshots_of(problems::problem1_constant(0.1), 10, 2000),
                                        snapshots_of(problems::problem1_constant(0.1), 20, 8500));
        std::fprintf(stderr, "  grid independence const-D: %.4f%%\n", rate_const);
        const double rate_var =
            problems::grid_independence(snapshots_of(problems::problem1_variable(0.1), 10, 2000),
                                        snapshots_of(problems::problem1_variable(0.1), 20, 8500));
        std::fprintf(stderr, "  grid independence var-D: %.4f%%\n", rate_var);
        std::ostringstream os;
        os << "grid independence (11x11,2000) vs (21x21,8500) at lambda=0.1: const-D "
           << fmt(rate_const) << "% and var-D " << fmt(rate_var) << "% both <= 0.1%";
        report(5, rate_const <= 0.1 && rate_var <= 0.1, os.str());
    } catch (const std::exception& e) {
        report(5, false, std::string("exception: ") + e.what());
    }
}

void criterion6() {
    try {
        std::mt19937 rng(2026);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst = 0.0;
        for (const bool variable : {false, true}) {
            const problems::ProblemSpec p =
                variable ? problems::problem1_variable(0.3) : problems::problem1_constant(0.3);
            for (int k = 0; k < 1000; ++k) {
                const double x = u01(rng), y = u01(rng), t = u01(rng);
                const double u = std::exp(x + y + t);
                const auto& c = p.physical;
                const double res = c.l * u + c.alpha(x, y, t) * u + c.beta(x, y, t) * u +
                                   c.gamma(x, y, t) * u + c.nu(x, y, t) * u +
                                   c.omega(x, y, t) * u - c.phi(x, y, t);
                worst = std::max(worst, std::abs(res));
            }
        }
        std::ostringstream os;
        os << "manufactured-solution residuals of both CDR variants < 1e-10 at 1000 random "
              "points (max "
           << worst << ")";
        report(6, worst < 1e-10, os.str());
    } catch (const std::exception& e) {
        report(6, false, std::string("exception: ") + e.what());
    }
}

void criterion7() {
    try {
        bool pass = true;
        std::ostringstream os;
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> u01(0.0, 1.0);

        // partition of unity / constant reproduction through the interpolant
        {
            CoarseField F;
            F.grid = gaptooth::CoarseGrid{0, 1, 0, 1, 8, 8};
            F.U = Field2D(9, 9, 3.7);
            const gaptooth::StencilPoly s = gaptooth::build_stencil(F, 4, 4);
            double dev = 0.0;
            for (int k = 0; k < 50; ++k) {
                const double xi = s.xi_c + (u01(rng) - 0.5) * F.grid.dxi();
                const double eta = s.eta_c + (u01(rng) - 0.5) * F.grid.deta();
                dev = std::max(dev, std::abs(s.eval(xi, eta) - 3.7));
            }
            pass = pass && dev < 1e-13;
            os << "cardinal/unity dev " << dev;
        }
        // quadratic reproduction of edge values and slopes
        {
            auto quad = [](double xi, double eta) {
                return 2 * xi * xi - xi * eta + eta * eta + xi - 3 * eta + 0.5;
            };
            CoarseField F;
            F.grid = gaptooth::CoarseGrid{0, 1, 0, 1, 10, 10};
            F.U = Field2D(11, 11);
            for (int i = 0; i <= 10; ++i)
                for (int j = 0; j <= 10; ++j) F.U(i, j) = quad(F.grid.xi(i), F.grid.eta(j));
            const gaptooth::StencilPoly s = gaptooth::build_stencil(F, 5, 6);
            const double h = 0.05;
            const gaptooth::EdgeProfiles vals = gaptooth::dirichlet_edge_values(s, h, h, 6, 6);
            const gaptooth::EdgeProfiles slp = gaptooth::neumann_edge_slopes(s, h, h, 6, 6);
            double dev = 0.0;
            for (int j = 0; j <= 6; ++j) {
                const double eta = s.eta_c - h / 2 + h * j / 6;
                dev = std::max(dev, std::abs(vals.E[j] - quad(s.xi_c + h / 2, eta)));
                dev = std::max(dev,
                               std::abs(slp.E[j] - (4 * (s.xi_c + h / 2) - eta + 1)));
            }
            pass = pass && dev < 1e-12;
            os << ", quad-edge dev " << dev;
        }
        // lifting box-average identity for quadratics + bilinear restriction
        {
            auto quad = [](double xi, double eta) { return xi * xi + 2 * eta * eta - xi * eta; };
            CoarseField F;
            F.grid = gaptooth::CoarseGrid{0, 1, 0, 1, 10, 10};
            F.U = Field2D(11, 11);
            for (int i = 0; i <= 10; ++i)
                for (int j = 0; j <= 10; ++j) F.U(i, j) = quad(F.grid.xi(i), F.grid.eta(j));
            const gaptooth::StencilPoly s = gaptooth::build_stencil(F, 4, 7);
            const microsim::MicroGrid g = microsim::make_micro_grid(1e-3, 1e-3, 1e-6, 10, 10, 1);
            const Field2D lifted = gaptooth::lift(s, 1e-3, 1e-3, g);
            // Simpson is exact on the lifted quadratic, so it realizes the
            // analytic box average
            const double avg =
                gaptooth::restrict_average(lifted, cpi::SchemeConfig::Quadrature::Simpson);
            pass = pass && std::abs(avg - F.U(4, 7)) < 1e-12;
            os << ", lift-average dev " << std::abs(avg - F.U(4, 7));

            Field2D bil(11, 11);
            for (int i = 0; i <= 10; ++i)
                for (int j = 0; j <= 10; ++j) bil(i, j) = (2.0 * i / 10 - 1) * (3.0 * j / 10 + 2);
            pass = pass && std::abs(gaptooth::restrict_average(bil)) < 1e-13;
        }
        // identity-map coefficient equivalence
        {
            const geometry::Mapping id = geometry::identity_map();
            const problems::ProblemSpec p = problems::problem1_constant(0.0);
            double dev = 0.0;
            for (int k = 0; k < 100; ++k) {
                const double xi = u01(rng), eta = u01(rng), t = u01(rng);
                const auto tc = geometry::transform_coefficients(id, p.physical, xi, eta, t);
                dev = std::max({dev, std::abs(tc.a + 1.0), std::abs(tc.b),
                                std::abs(tc.c + 1.0), std::abs(tc.d - 10 * xi),
                                std::abs(tc.e - 10 * eta)});
            }
            pass = pass && dev < 1e-12;
            os << ", identity-coeff dev " << dev;
        }
        // stretched-map Jacobian closed form
        {
            const double lam = 0.4;
            const geometry::Mapping st = geometry::stretched_map(lam);
            double dev = 0.0;
            for (int k = 0; k < 100; ++k) {
                const double xi = u01(rng), eta = u01(rng);
                const double J = geometry::jacobian(st, xi, eta);
                dev = std::max(dev, std::abs(J - (1 + lam * std::cos(M_PI * xi)) *
                                                     (1 + lam * std::cos(M_PI * eta))));
            }
            pass = pass && dev < 1e-13;
            os << ", jacobian dev " << dev;
        }
        // locality: 9-point support of the gap-tooth step
        {
            const problems::ProblemSpec p = problems::problem1_constant(0.0);
            cpi::SchemeConfig cfg = cdr_config(8, 1000);
            const GapToothEngine eng(p, cfg);
            CoarseField U = eng.initial_field();
            eng.refresh_boundary(U, 0.0);
            const CoarseField S0 = eng.step(U, 0.0);
            CoarseField Up = U;
            Up.U(4, 4) += 0.5;
            const CoarseField S1 = eng.step(Up, 0.0);
            bool local = true;
            for (int i = 1; i <= 7; ++i)
                for (int j = 1; j <= 7; ++j) {
                    const bool near = std::abs(i - 4) <= 1 && std::abs(j - 4) <= 1;
                    if (!near && S1.at(i, j) != S0.at(i, j)) local = false;
                }
            pass = pass && local;
            os << ", locality " << (local ? "ok" : "VIOLATED");
        }
        report(7, pass, "operator property suite (" + os.str() + ")");
    } catch (const std::exception& e) {
        report(7, false, std::string("exception: ") + e.what());
    }
}

void criterion8() {
    try {
        const problems::AnnulusSolution sol(20);
        // 20-mode IC reconstruction at 200 sample points
        double worst = 0.0;
        for (int ir = 0; ir < 20; ++ir)
            for (int it = 0; it < 10; ++it) {
                const double r = 1.0 + (ir + 0.5) / 20.0;
                const double th = 2 * M_PI * (it + 0.3) / 10.0;
                worst = std::max(worst, std::abs(sol.eval(r, th, 0.0) -
                                                 (r - 1) * (2 - r) * std::sin(th)));
            }
        const bool ic_ok = worst < 1e-3;

        // root residuals
        double fmax = 0.0;
        for (double mu : sol.roots())
            fmax = std::max(fmax, std::abs(problems::bessel_j1(mu) * problems::bessel_y1(2 * mu) -
                                           problems::bessel_y1(mu) * problems::bessel_j1(2 * mu)));
        const bool roots_ok = fmax < 1e-10;

        // decay-rate fit at (r,theta)=(1.5,pi/2) over t in [0.5,1] from the
        // criterion-4 coarse run
        bool slope_ok = false;
        double slope = 0.0;
        if (!g_c4_probe_series.empty()) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            int n = 0;
            for (std::size_t k = 0; k < g_c4_probe_times.size(); ++k) {
                const double t = g_c4_probe_times[k];
                if (t < 0.5 || t > 1.0) continue;
                const double v = std::abs(g_c4_probe_series[k]);
                if (v <= 0) continue;
                const double ly = std::log(v);
                sx += t;
                sy += ly;
                sxx += t * t;
                sxy += t * ly;
                ++n;
            }
            slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            const double mu1 = sol.roots()[0];
            slope_ok = std::abs(slope + mu1 * mu1) < 0.05 * mu1 * mu1;
        }
        std::ostringstream os;
        os << "annulus oracle: IC reconstruction max err " << worst << ", root residual max "
           << fmax << ", fitted decay slope " << fmt(slope) << " vs -mu1^2 "
           << fmt(-sol.roots()[0] * sol.roots()[0]);
        report(8, ic_ok && roots_ok && slope_ok, os.str());
    } catch (const std::exception& e) {
        report(8, false, std::string("exception: ") + e.what());
    }
}

void criterion9() {
    try {
        // zero problem stays identically zero
        problems::ProblemSpec pz;
        pz.name = "zero";
        pz.mapping = geometry::identity_map();
        auto one = [](double, double, double) { return 1.0; };
        auto zero3 = [](double, double, double) { return 0.0; };
        pz.physical = geometry::cdr_coefficients(one, one, zero3, zero3, zero3);
        pz.initial = [](double, double) { return 0.0; };
        auto zf = [](double, double) { return 0.0; };
        pz.bcW = pz.bcE = pz.bcS = pz.bcN = zf;
        pz.source_zero = true;
        cpi::SchemeConfig cz;
        cz.N_xi = cz.N_eta = 6;
        cz.Nt = 20;
        cz.nx = cz.ny = 6;
        cz.linear_cache = cpi::SchemeConfig::LinearCache::Off;
        const cpi::RunResult rz = run_problem(pz, cz);
        double zmax = 0.0;
        for (double v : rz.final_field.U.raw()) zmax = std::max(zmax, std::abs(v));
        const bool zero_ok = zmax == 0.0;

        // steady state preserved to 1e-9 per step
        problems::ProblemSpec ps;
        ps.name = "steady";
        ps.mapping = geometry::identity_map();
        ps.physical = geometry::cdr_coefficients(one, one, zero3, zero3, zero3);
        ps.initial = [](double xi, double eta) { return xi + eta; };
        ps.bcW = [](double eta, double) { return eta; };
        ps.bcE = [](double eta, double) { return 1 + eta; };
        ps.bcS = [](double xi, double) { return xi; };
        ps.bcN = [](double xi, double) { return 1 + xi; };
        ps.source_zero = true;
        cpi::SchemeConfig cs = cz;
        cs.Nt = 200;
        const GapToothEngine eng(ps, cs);
        CoarseField U = eng.initial_field();
        eng.refresh_boundary(U, 0.0);
        const CoarseField U0 = U;
        double sdev = 0.0;
        for (int n = 0; n < 5; ++n) {
            U = cpi::projective_step(eng, U, n * cs.dt());
            for (int i = 0; i <= 6; ++i)
                for (int j = 0; j <= 6; ++j)
                    sdev = std::max(sdev, std::abs(U.at(i, j) - U0.at(i, j)) / (n + 1.0));
        }
        const bool steady_ok = sdev <= 1e-9;

        // 100x-too-large projective step on the annulus must abort, not emit garbage
        bool guarded = false;
        try {
            cpi::SchemeConfig ca = annulus_config(16, 10, 5, 400);
            ca.nx = ca.ny = 10;
            run_problem(problems::problem2_annulus(), ca);
        } catch (const MacroInstability&) {
            guarded = true;
        }
        std::ostringstream os;
        os << "degenerate/guard suite: zero-trajectory max " << zmax << ", steady drift/step "
           << sdev << ", MacroInstability " << (guarded ? "raised" : "NOT raised");
        report(9, zero_ok && steady_ok && guarded, os.str());
    } catch (const std::exception& e) {
        report(9, false, std::string("exception: ") + e.what());
    }
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%d of 9 criteria passed\n", 9 - g_failures);
    return g_failures;
}
