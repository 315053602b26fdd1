#pragma once

#include <functional>
#include <vector>

namespace patchdyn::geometry {

enum class MapKind { Identity, Stretched, Polar, UserAnalytic };

struct PhysPoint {
    double x, y;
};

// Inverse metrics: derivatives of the physical coordinates with respect to the
// computational ones.
struct InverseMetrics {
    double x_xi, x_eta, y_xi, y_eta;
};

struct SecondDerivs {
    double x_xixi, x_xieta, x_etaeta;
    double y_xixi, y_xieta, y_etaeta;
};

// Invertible, orientation-preserving coordinate transformation (xi,eta) -> (x,y).
// Metrics and second derivatives are supplied analytically by each kind;
// verify_mapping_derivatives() cross-checks them against finite differences.
// Mappings are static in time.
struct Mapping {
    MapKind kind = MapKind::Identity;
    double stretch = 0.0; // lambda, for Stretched
    std::function<PhysPoint(double, double)> forward;
    std::function<InverseMetrics(double, double)> metrics;
    std::function<SecondDerivs(double, double)> second;
};

Mapping identity_map();

// x = xi + (lambda/pi) sin(pi xi), y likewise in eta; lambda in [0,1).
Mapping stretched_map(double lambda);

// (xi,eta) = (theta,r), forward (x,y) = (r sin(theta), r cos(theta)).
// The angle runs clockwise from the +y axis so that J = +r stays positive
// with theta on the first computational axis.
Mapping polar_map();

Mapping user_analytic_map(std::function<PhysPoint(double, double)> fwd,
                          std::function<InverseMetrics(double, double)> met,
                          std::function<SecondDerivs(double, double)> sec);

// Coefficients of the physical-domain equation
//   l u_t + alpha u_xx + beta u_yy + gamma u_x + nu u_y + omega u = phi.
// A convection-diffusion-reaction problem written as
//   u_t + vx u_x + vy u_y = Dx u_xx + Dy u_yy - w u + S
// enters with alpha = -Dx, beta = -Dy, gamma = vx, nu = vy, omega = w, phi = S.
struct PhysicalCoefficients {
    using Fn = std::function<double(double x, double y, double t)>;
    Fn alpha, beta, gamma, nu, omega, phi;
    double l = 1.0;
};

PhysicalCoefficients cdr_coefficients(PhysicalCoefficients::Fn Dx, PhysicalCoefficients::Fn Dy,
                                      PhysicalCoefficients::Fn vx, PhysicalCoefficients::Fn vy,
                                      PhysicalCoefficients::Fn source);

// Pointwise coefficients of the transformed equation
//   l u_t + a u_xixi + b u_xieta + c u_etaeta + d u_xi + e u_eta + f u = g,
// including the first-derivative contributions R, S from the curvature of the map.
struct TransformedCoefficients {
    double a, b, c, d, e, f, g;
    double R, S;
};

double jacobian(const Mapping& m, double xi, double eta);

TransformedCoefficients transform_coefficients(const Mapping& m, const PhysicalCoefficients& p,
                                               double xi, double eta, double t);

struct DerivativeReport {
    double max_metric_dev = 0.0;
    double max_second_dev = 0.0;
};

// Checks declared metrics against central differences of the forward map, and
// declared second derivatives against central differences of the metrics.
// Throws DerivativeMismatch if either deviation exceeds 1e-6.
DerivativeReport verify_mapping_derivatives(const Mapping& m,
                                            const std::vector<std::pair<double, double>>& samples,
                                            double h);

} // namespace patchdyn::geometry
