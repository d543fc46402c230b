#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gapkit {

// Closed-form spectrum of V = M on [x_minus, pi], 0 on [0, x_minus), with
// Dirichlet conditions and p = 1.

enum class StepBranch { Trig, Tanh, Degenerate };  // lambda > M, < M, = M

std::string to_string(StepBranch branch);

struct StepEigenvalue {
    double lambda = 0.0;
    StepBranch branch = StepBranch::Trig;
    double residual = 0.0;  // matching_residual at lambda
};

/// Wronskian of the left solution sin(k x)/k and the right solution that
/// vanishes at pi, evaluated at x_minus. Entire in lambda (no cotangent
/// poles); on the lambda < M side it carries the positive factor
/// exp(-s (pi - x_minus)) so it never overflows. Zeros are exactly the
/// eigenvalues.
double matching_residual(double lambda, double M, double x_minus);

/// Number of eigenvalues strictly below lambda, from the zero count of the
/// solution with u(0) = 0, u'(0) = 1.
int step_count_below(double lambda, double M, double x_minus);

/// The k lowest eigenvalues (k <= 4), each isolated by the zero count and
/// refined on matching_residual.
std::vector<StepEigenvalue> step_eigenvalues(double M, double x_minus, int k, double tol = 1e-15);

/// Rescaled variables mu = M^-1/2, y = sqrt(M) x_minus and r^2 = lambda - M
/// or s^2 = M - lambda.
struct RescaledState {
    double mu = 0.0;
    double y = 0.0;
    std::optional<double> r;
    std::optional<double> s;
    bool degenerate = false;  // lambda == M
};

struct StepParameters {
    double lambda = 0.0;
    double M = 0.0;
    double x_minus = 0.0;
};

RescaledState rescale(double lambda, double M, double x_minus);
StepParameters unscale(const RescaledState& state);

/// tan(r (pi - mu y)) + mu r / sqrt(1 + mu^2 r^2) tan(sqrt(1 + mu^2 r^2) y).
double rescaled_residual_trig(double r, double mu, double y);
/// tanh(s (pi - mu y)) + mu s / sqrt(1 - mu^2 s^2) tan(sqrt(1 - mu^2 s^2) y).
double rescaled_residual_tanh(double s, double mu, double y);
/// Factor f with matching_residual = rescaled residual * f at the same point.
double rescaled_to_matching_factor(double lambda, double M, double x_minus);

/// C^1 condition for an eigenfunction with lambda = M, as derived:
/// sin(sqrt(M) x) + sqrt(M) (pi - x) cos(sqrt(M) x), equivalent to
/// tan(sqrt(M) x) = -sqrt(M) (pi - x).
double degenerate_condition(double M, double x_minus);
/// The simplified form as printed: sqrt(M) (pi - x) + sin(sqrt(M) x).
double degenerate_condition_printed(double M, double x_minus);

/// Jump of u'/u across x_minus between the left and right solutions.
double log_derivative_jump(double lambda, double M, double x_minus);

/// L2-normalised eigenfunction for a given eigenvalue of the step.
class StepEigenfunction {
public:
    StepEigenfunction(double lambda, double M, double x_minus);
    double operator()(double x) const;
    double derivative(double x) const;
    double lambda() const { return lambda_; }

private:
    double lambda_, M_, x_;
    double k_, q_;  // q = r, s or 0 depending on branch
    StepBranch branch_;
    double B_ = 1.0;     // right amplitude relative to sin(k x)
    double A_ = 1.0;     // normalisation
};

/// u2(x_minus)^2 - u1(x_minus)^2 with normalised eigenfunctions; zero at a
/// stationary step location.
double step_stationarity(double M, double x_minus);

}  // namespace gapkit
