#pragma once

#include <vector>

namespace gapkit {

/// First positive root of tan(theta) = theta and the limit gap (theta/pi)^2.
struct ThetaConstant {
    double theta = 0.0;
    double limit_gap = 0.0;
    double residual = 0.0;  // |tan(theta) - theta|
};

ThetaConstant solve_theta();

/// Leading-order reduced system in y1, where y = pi/2 + y1 mu + O(mu^2):
/// tan(pi r) = r / y1 with r in (1, 3/2), tanh(pi s) = s / y1 with s >= 0.
struct ReducedSolution {
    double y1 = 0.0;
    double r = 0.0;
    double s = 0.0;
    bool has_s = false;  // false when y1 < 1/pi (no root s >= 0)
    double eta = 0.0;    // y1 (y1 - 1/pi)
    double gap_proxy = 0.0;
    double residual_r = 0.0;
    double residual_s = 0.0;
};

ReducedSolution solve_reduced(double y1);

/// (2/pi) (s^2 / (s^2 - eta) - r^2 / (r^2 + eta)), with its limit 1/pi at y1 = 1/pi.
double gap_proxy_derivative(double y1);

/// 3 / (2 tanh(3 pi / 2)): the y1 at which s = 3/2.
double gap_proxy_upper_limit();

struct ProxyMinimum {
    double y1_star = 0.0;
    double gap_star = 0.0;
    double eta_star = 0.0;
    double upper_y1 = 0.0;
    double gap_at_upper = 0.0;
    double derivative_identity_residual = 0.0;  // max over interior samples
    int derivative_samples = 0;
    bool interior_critical_point = false;
};

/// Minimises r^2 + s^2 over [1/pi, 3 / (2 tanh(3 pi / 2))] and checks the
/// derivative identity by central differences at interior points.
ProxyMinimum minimize_gap_proxy();

/// pi / (2 sqrt(M)) + 1 / (pi M).
double x_minus_expansion(double M);

}  // namespace gapkit
