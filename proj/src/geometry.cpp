#include "patchdyn/geometry.hpp"

#include <cmath>
#include <sstream>

#include "patchdyn/errors.hpp"

namespace patchdyn::geometry {

namespace {
constexpr double kJacobianFloor = 1e-14;
}

Mapping identity_map() {
    Mapping m;
    m.kind = MapKind::Identity;
    m.forward = [](double xi, double eta) { return PhysPoint{xi, eta}; };
    m.metrics = [](double, double) { return InverseMetrics{1.0, 0.0, 0.0, 1.0}; };
    m.second = [](double, double) { return SecondDerivs{0, 0, 0, 0, 0, 0}; };
    return m;
}

Mapping stretched_map(double lambda) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        std::ostringstream os;
        os << "stretching parameter must lie in [0,1), got " << lambda;
        throw InvalidStretch(os.str());
    }
    Mapping m;
    m.kind = MapKind::Stretched;
    m.stretch = lambda;
    auto X = [lambda](double s) { return s + lambda / M_PI * std::sin(M_PI * s); };
    auto Xp = [lambda](double s) { return 1.0 + lambda * std::cos(M_PI * s); };
    auto Xpp = [lambda](double s) { return -lambda * M_PI * std::sin(M_PI * s); };
    m.forward = [X](double xi, double eta) { return PhysPoint{X(xi), X(eta)}; };
    m.metrics = [Xp](double xi, double eta) { return InverseMetrics{Xp(xi), 0.0, 0.0, Xp(eta)}; };
    m.second = [Xpp](double xi, double eta) {
        return SecondDerivs{Xpp(xi), 0.0, 0.0, 0.0, 0.0, Xpp(eta)};
    };
    return m;
}

Mapping polar_map() {
    Mapping m;
    m.kind = MapKind::Polar;
    m.forward = [](double th, double r) { return PhysPoint{r * std::sin(th), r * std::cos(th)}; };
    m.metrics = [](double th, double r) {
        return InverseMetrics{r * std::cos(th), std::sin(th), -r * std::sin(th), std::cos(th)};
    };
    m.second = [](double th, double r) {
        return SecondDerivs{-r * std::sin(th), std::cos(th), 0.0,
                            -r * std::cos(th), -std::sin(th), 0.0};
    };
    return m;
}

Mapping user_analytic_map(std::function<PhysPoint(double, double)> fwd,
                          std::function<InverseMetrics(double, double)> met,
                          std::function<SecondDerivs(double, double)> sec) {
    Mapping m;
    m.kind = MapKind::UserAnalytic;
    m.forward = std::move(fwd);
    m.metrics = std::move(met);
    m.second = std::move(sec);
    return m;
}

PhysicalCoefficients cdr_coefficients(PhysicalCoefficients::Fn Dx, PhysicalCoefficients::Fn Dy,
                                      PhysicalCoefficients::Fn vx, PhysicalCoefficients::Fn vy,
                                      PhysicalCoefficients::Fn source) {
    PhysicalCoefficients p;
    p.alpha = [Dx](double x, double y, double t) { return -Dx(x, y, t); };
    p.beta = [Dy](double x, double y, double t) { return -Dy(x, y, t); };
    p.gamma = std::move(vx);
    p.nu = std::move(vy);
    p.omega = [](double, double, double) { return 0.0; };
    p.phi = std::move(source);
    p.l = 1.0;
    return p;
}

double jacobian(const Mapping& m, double xi, double eta) {
    const InverseMetrics g = m.metrics(xi, eta);
    const double J = g.x_xi * g.y_eta - g.y_xi * g.x_eta;
    if (!(J > kJacobianFloor)) {
        std::ostringstream os;
        os << "non-positive Jacobian " << J << " at (xi,eta)=(" << xi << "," << eta << ")";
        throw NonPositiveJacobian(os.str());
    }
    return J;
}

TransformedCoefficients transform_coefficients(const Mapping& m, const PhysicalCoefficients& p,
                                               double xi, double eta, double t) {
    const double J = jacobian(m, xi, eta);
    const InverseMetrics g = m.metrics(xi, eta);
    const SecondDerivs s = m.second(xi, eta);
    const PhysPoint xy = m.forward(xi, eta);

    const double ah = p.alpha(xy.x, xy.y, t);
    const double ch = p.beta(xy.x, xy.y, t);
    const double dh = p.gamma(xy.x, xy.y, t);
    const double eh = p.nu(xy.x, xy.y, t);

    const double A = ch * g.x_eta * g.x_eta + ah * g.y_eta * g.y_eta;
    const double B = ah * g.y_eta * g.y_xi + ch * g.x_eta * g.x_xi;
    const double C = ch * g.x_xi * g.x_xi + ah * g.y_xi * g.y_xi;
    const double J2 = J * J;
    const double J3 = J2 * J;

    const double PX = A * s.x_xixi - 2.0 * B * s.x_xieta + C * s.x_etaeta;
    const double PY = A * s.y_xixi - 2.0 * B * s.y_xieta + C * s.y_etaeta;

    TransformedCoefficients out;
    out.a = A / J2;
    out.b = -2.0 * B / J2;
    out.c = C / J2;
    out.R = (-g.y_eta * PX + g.x_eta * PY) / J3;
    out.S = (g.y_xi * PX - g.x_xi * PY) / J3;
    out.d = dh / J * g.y_eta - eh / J * g.x_eta + out.R;
    out.e = -dh / J * g.y_xi + eh / J * g.x_xi + out.S;
    out.f = p.omega(xy.x, xy.y, t);
    out.g = p.phi(xy.x, xy.y, t);
    return out;
}

DerivativeReport verify_mapping_derivatives(const Mapping& m,
                                            const std::vector<std::pair<double, double>>& samples,
                                            double h) {
    DerivativeReport rep;
    auto upd = [](double& acc, double v) {
        if (std::abs(v) > acc) acc = std::abs(v);
    };
    for (auto [xi, eta] : samples) {
        const InverseMetrics g = m.metrics(xi, eta);
        const PhysPoint xp = m.forward(xi + h, eta), xm = m.forward(xi - h, eta);
        const PhysPoint yp = m.forward(xi, eta + h), ym = m.forward(xi, eta - h);
        upd(rep.max_metric_dev, (xp.x - xm.x) / (2 * h) - g.x_xi);
        upd(rep.max_metric_dev, (xp.y - xm.y) / (2 * h) - g.y_xi);
        upd(rep.max_metric_dev, (yp.x - ym.x) / (2 * h) - g.x_eta);
        upd(rep.max_metric_dev, (yp.y - ym.y) / (2 * h) - g.y_eta);

        // Second derivatives are checked as differences of the analytic metrics;
        // differencing the forward map twice would drown in rounding at h=1e-5.
        const SecondDerivs s = m.second(xi, eta);
        const InverseMetrics gxp = m.metrics(xi + h, eta), gxm = m.metrics(xi - h, eta);
        const InverseMetrics gyp = m.metrics(xi, eta + h), gym = m.metrics(xi, eta - h);
        upd(rep.max_second_dev, (gxp.x_xi - gxm.x_xi) / (2 * h) - s.x_xixi);
        upd(rep.max_second_dev, (gyp.x_xi - gym.x_xi) / (2 * h) - s.x_xieta);
        upd(rep.max_second_dev, (gyp.x_eta - gym.x_eta) / (2 * h) - s.x_etaeta);
        upd(rep.max_second_dev, (gxp.y_xi - gxm.y_xi) / (2 * h) - s.y_xixi);
        upd(rep.max_second_dev, (gyp.y_xi - gym.y_xi) / (2 * h) - s.y_xieta);
        upd(rep.max_second_dev, (gyp.y_eta - gym.y_eta) / (2 * h) - s.y_etaeta);
    }
    if (rep.max_metric_dev > 1e-6 || rep.max_second_dev > 1e-6) {
        std::ostringstream os;
        os << "analytic derivatives disagree with finite differences: metrics dev "
           << rep.max_metric_dev << ", second-derivative dev " << rep.max_second_dev;
        throw DerivativeMismatch(os.str());
    }
    return rep;
}

} // namespace patchdyn::geometry
