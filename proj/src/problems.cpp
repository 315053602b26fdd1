#include "patchdyn/problems.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "patchdyn/errors.hpp"

namespace patchdyn::problems {

// ---------------------------------------------------------------------------
// Benchmark problems
// ---------------------------------------------------------------------------

namespace {

ProblemSpec problem1_base(double lambda, bool variable) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        std::ostringstream os;
        os << "stretching parameter must lie in [0,1), got " << lambda;
        throw InvalidStretch(os.str());
    }
    ProblemSpec p;
    p.name = variable ? "cdr-var" : "cdr-const";
    p.mapping = lambda == 0.0 ? geometry::identity_map() : geometry::stretched_map(lambda);
    p.a = 0;
    p.b = 1;
    p.c = 0;
    p.d = 1;
    p.T = 1.0;
    p.phys_Lx = 1.0;
    p.phys_Ly = 1.0;

    auto Dx = [variable](double x, double, double) { return variable ? 1.0 + x : 1.0; };
    auto vx = [](double x, double, double) { return 10.0 * x; };
    auto vy = [](double, double y, double) { return 10.0 * y; };
    const double c0 = variable ? 8.0 : 10.0;
    auto src = [c0](double x, double y, double t) {
        return (c0 * x + 10.0 * y - 1.0) * std::exp(x + y + t);
    };
    p.physical = geometry::cdr_coefficients(Dx, Dx, vx, vy, src);

    const geometry::Mapping m = p.mapping; // captured by value in the lambdas below
    p.initial = [m](double xi, double eta) {
        const auto xy = m.forward(xi, eta);
        return std::exp(xy.x + xy.y);
    };
    p.exact = [m](double xi, double eta, double t) {
        const auto xy = m.forward(xi, eta);
        return std::exp(xy.x + xy.y + t);
    };
    p.bcW = [m](double eta, double t) { return std::exp(m.forward(0, eta).y + t); };
    p.bcE = [m](double eta, double t) { return std::exp(1.0 + m.forward(1, eta).y + t); };
    p.bcS = [m](double xi, double t) { return std::exp(m.forward(xi, 0).x + t); };
    p.bcN = [m](double xi, double t) { return std::exp(m.forward(xi, 1).x + 1.0 + t); };

    p.coeffs_time_independent = true;
    p.source_zero = false;
    p.source_separable = true;
    p.source_spatial = [m, c0](double xi, double eta) {
        const auto xy = m.forward(xi, eta);
        return (c0 * xy.x + 10.0 * xy.y - 1.0) * std::exp(xy.x + xy.y);
    };
    p.source_time = [](double t) { return std::exp(t); };
    p.coeffs_xi_independent = false;
    return p;
}

} // namespace

ProblemSpec problem1_constant(double lambda) { return problem1_base(lambda, false); }

ProblemSpec problem1_variable(double lambda) { return problem1_base(lambda, true); }

namespace {

// Memoized series evaluation: the run loop queries the exact solution at the
// same grid radii every step, so cache the radial profiles and the per-time
// exponential factors.
struct AnnulusExactMemo {
    AnnulusSolution sol;
    std::mutex mtx;
    std::map<double, std::vector<double>> radial;
    double last_t = -1.0;
    std::vector<double> tfac;

    explicit AnnulusExactMemo(int m_max) : sol(m_max) {}

    double eval(double theta, double r, double t) {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = radial.find(r);
        if (it == radial.end()) it = radial.emplace(r, sol.radial_profile(r)).first;
        const std::vector<double>& prof = it->second;
        if (t != last_t) {
            const std::vector<double>& mu = sol.roots();
            tfac.resize(mu.size());
            for (std::size_t m = 0; m < mu.size(); ++m) tfac[m] = std::exp(-mu[m] * mu[m] * t);
            last_t = t;
        }
        double acc = 0.0;
        for (std::size_t m = 0; m < prof.size(); ++m) acc += prof[m] * tfac[m];
        return acc * std::sin(theta);
    }
};

} // namespace

ProblemSpec problem2_annulus() {
    ProblemSpec p;
    p.name = "annulus";
    p.mapping = geometry::polar_map();
    p.a = 0;
    p.b = 2.0 * M_PI;
    p.c = 1.0;
    p.d = 2.0;
    p.T = 1.0;
    p.periodic_xi = true;
    p.phys_Lx = 2.0;
    p.phys_Ly = 2.0;

    auto one = [](double, double, double) { return 1.0; };
    auto zero = [](double, double, double) { return 0.0; };
    p.physical = geometry::cdr_coefficients(one, one, zero, zero, zero);

    p.initial = [](double theta, double r) { return (r - 1.0) * (2.0 - r) * std::sin(theta); };
    p.bcS = [](double, double) { return 0.0; }; // r = 1
    p.bcN = [](double, double) { return 0.0; }; // r = 2

    auto memo = std::make_shared<AnnulusExactMemo>(20);
    p.exact = [memo](double theta, double r, double t) { return memo->eval(theta, r, t); };

    p.coeffs_time_independent = true;
    p.source_zero = true;
    p.coeffs_xi_independent = true;
    return p;
}

ProblemSpec by_name(const std::string& name, double lambda) {
    if (name == "cdr-const") return problem1_constant(lambda);
    if (name == "cdr-var") return problem1_variable(lambda);
    if (name == "annulus") return problem2_annulus();
    throw ValidationError("unknown problem name '" + name +
                          "' (expected cdr-const, cdr-var or annulus)");
}

// ---------------------------------------------------------------------------
// Bessel machinery
// ---------------------------------------------------------------------------

double bessel_j1(double x) {
    if (!(x >= 0.0)) throw DomainError("bessel_j1 requires x >= 0");
    return std::cyl_bessel_j(1.0, x);
}

double bessel_y1(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_y1 requires x > 0");
    return std::cyl_neumann(1.0, x);
}

double cross_product_z1(double mu, double r) {
    return bessel_j1(mu) * bessel_y1(mu * r) - bessel_y1(mu) * bessel_j1(mu * r);
}

namespace {

double cross_product(double mu) {
    return bessel_j1(mu) * bessel_y1(2.0 * mu) - bessel_y1(mu) * bessel_j1(2.0 * mu);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double flo) {
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0) != (fm < 0)) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// Adaptive Simpson refinement to the requested absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace

std::vector<double> cross_product_roots(int m_max) {
    if (m_max < 1) throw ValidationError("cross_product_roots needs m_max >= 1");
    std::vector<double> roots;
    roots.reserve(m_max);
    const double step = 0.01;
    const double hi_end = m_max * M_PI + 10.0;
    double x = 0.1;
    double fx = cross_product(x);
    while (x < hi_end && static_cast<int>(roots.size()) < m_max) {
        const double x1 = x + step;
        const double f1 = cross_product(x1);
        if (fx == 0.0) {
            roots.push_back(x);
        } else if ((fx < 0) != (f1 < 0)) {
            roots.push_back(bisect_root(cross_product, x, x1, fx));
        }
        x = x1;
        fx = f1;
    }
    if (static_cast<int>(roots.size()) < m_max) {
        std::ostringstream os;
        os << "root scan found only " << roots.size() << " of " << m_max
           << " cross-product roots on (0.1," << hi_end << ")";
        throw RootBracketFailure(os.str());
    }
    return roots;
}

AnnulusSolution::AnnulusSolution(int m_max) {
    mu_ = cross_product_roots(m_max);
    coef_.resize(mu_.size());
    for (std::size_t m = 0; m < mu_.size(); ++m) {
        const double mu = mu_[m];
        const double proj = integrate(
            [mu](double s) { return s * (s - 1.0) * (2.0 - s) * cross_product_z1(mu, s); }, 1.0,
            2.0, 1e-12);
        const double j1mu = bessel_j1(mu), j12mu = bessel_j1(2.0 * mu);
        const double B = mu * mu * j12mu * j12mu / (j1mu * j1mu - j12mu * j12mu);
        coef_[m] = 0.5 * M_PI * M_PI * proj * B;
    }
}

double AnnulusSolution::eval(double r, double theta, double t) const {
    if (!(r >= 1.0 - 1e-12 && r <= 2.0 + 1e-12))
        throw DomainError("annulus solution requires 1 <= r <= 2");
    double acc = 0.0;
    for (std::size_t m = 0; m < mu_.size(); ++m) {
        acc += coef_[m] * cross_product_z1(mu_[m], r) * std::exp(-mu_[m] * mu_[m] * t);
    }
    return acc * std::sin(theta);
}

bool AnnulusSolution::truncation_warning(double r, double theta, double t) const {
    const double total = std::abs(eval(r, theta, t));
    const std::size_t last = mu_.size() - 1;
    const double tail = std::abs(coef_[last] * cross_product_z1(mu_[last], r) *
                                 std::exp(-mu_[last] * mu_[last] * t) * std::sin(theta));
    return tail > 1e-12 * std::max(total, 1e-300);
}

std::vector<double> AnnulusSolution::radial_profile(double r) const {
    std::vector<double> out(mu_.size());
    for (std::size_t m = 0; m < mu_.size(); ++m) out[m] = coef_[m] * cross_product_z1(mu_[m], r);
    return out;
}

double annulus_exact(double r, double theta, double t, int m_max) {
    static std::mutex mtx;
    static std::map<int, std::shared_ptr<AnnulusSolution>> cache;
    std::shared_ptr<AnnulusSolution> sol;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto& slot = cache[m_max];
        if (!slot) slot = std::make_shared<AnnulusSolution>(m_max);
        sol = slot;
    }
    return sol->eval(r, theta, t);
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

PecletField peclet_field(const ProblemSpec& p, int nxi_samples, int neta_samples) {
    PecletField out;
    out.n1 = nxi_samples + 1;
    out.n2 = neta_samples + 1;
    const std::size_t total = static_cast<std::size_t>(out.n1) * out.n2;
    out.x.resize(total);
    out.y.resize(total);
    out.pe.resize(total);
    out.convection_dominated.resize(total);
    for (int i = 0; i <= nxi_samples; ++i) {
        const double xi = p.a + (p.b - p.a) * i / nxi_samples;
        for (int j = 0; j <= neta_samples; ++j) {
            const double eta = p.c + (p.d - p.c) * j / neta_samples;
            const auto xy = p.mapping.forward(xi, eta);
            const double Dx = std::abs(p.physical.alpha(xy.x, xy.y, 0.0));
            const double Dy = std::abs(p.physical.beta(xy.x, xy.y, 0.0));
            const double vx = std::abs(p.physical.gamma(xy.x, xy.y, 0.0));
            const double vy = std::abs(p.physical.nu(xy.x, xy.y, 0.0));
            const double pex = Dx > 0 ? vx * p.phys_Lx / Dx : (vx > 0 ? INFINITY : 0.0);
            const double pey = Dy > 0 ? vy * p.phys_Ly / Dy : (vy > 0 ? INFINITY : 0.0);
            const double pe = std::max(pex, pey);
            const std::size_t k = static_cast<std::size_t>(i) * out.n2 + j;
            out.x[k] = xy.x;
            out.y[k] = xy.y;
            out.pe[k] = pe;
            out.convection_dominated[k] = pe > 1.0 ? 1 : 0;
            out.max_pe = std::max(out.max_pe, pe);
        }
    }
    return out;
}

double grid_independence(const Trajectory& coarse, const Trajectory& fine) {
    if (coarse.empty() || fine.empty()) throw GridMismatch("empty trajectory");
    const int Nc1 = coarse.front().Nxi, Nc2 = coarse.front().Neta;
    const int Nf1 = fine.front().Nxi, Nf2 = fine.front().Neta;
    if (Nf1 != 2 * Nc1 || Nf2 != 2 * Nc2) {
        std::ostringstream os;
        os << "fine grid " << Nf1 << "x" << Nf2 << " is not a 2x refinement of " << Nc1 << "x"
           << Nc2;
        throw GridMismatch(os.str());
    }
    double worst = 0.0;
    bool any_shared = false;
    for (const Snapshot& sc : coarse) {
        const Snapshot* sf = nullptr;
        for (const Snapshot& s : fine) {
            if (std::abs(s.t - sc.t) < 1e-9) {
                sf = &s;
                break;
            }
        }
        if (!sf) continue;
        any_shared = true;
        for (int i = 0; i <= Nc1; ++i) {
            for (int j = 0; j <= Nc2; ++j) {
                const double tc = sc.U[static_cast<std::size_t>(i) * (Nc2 + 1) + j];
                const double tf =
                    sf->U[static_cast<std::size_t>(2 * i) * (Nf2 + 1) + 2 * j];
                if (std::abs(tf) < 1e-12) continue;
                worst = std::max(worst, std::abs(tf - tc) / std::abs(tf) * 100.0);
            }
        }
    }
    if (!any_shared) throw GridMismatch("no shared snapshot times between the runs");
    return worst;
}

} // namespace patchdyn::problems
