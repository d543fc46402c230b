#include "gapkit/step.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "gapkit/error.hpp"
#include "gapkit/potential.hpp"

namespace gapkit {

namespace {

void check_step(double M, double x_minus) {
    if (!(M >= 0.0) || !std::isfinite(M)) fail(ErrorKind::InvalidArgument, "step height must be >= 0");
    if (!(x_minus > 0.0 && x_minus < kPi)) {
        fail(ErrorKind::InvalidArgument, "step location must lie in (0, pi)");
    }
}

StepBranch branch_of(double lambda, double M) {
    if (lambda > M) return StepBranch::Trig;
    if (lambda < M) return StepBranch::Tanh;
    return StepBranch::Degenerate;
}

// (2z - sin 2z) / 4 without cancellation for small z.
double sin_sq_integral(double z) {
    if (std::abs(z) < 1e-2) {
        const double w = 2.0 * z;
        const double w3 = w * w * w;
        return (w3 / 6.0 - w3 * w * w / 120.0 + w3 * w * w * w * w / 5040.0) / 4.0;
    }
    return (2.0 * z - std::sin(2.0 * z)) / 4.0;
}

// Integral over [0, z] of sinh^2(t) / sinh^2(z), for z > 0.
double sinh_ratio_sq_integral(double z) {
    if (z < 1e-2) {
        const double w = 2.0 * z;
        const double w3 = w * w * w;
        const double sh = std::sinh(z);
        return (w3 / 6.0 + w3 * w * w / 120.0 + w3 * w * w * w * w / 5040.0) / (4.0 * sh * sh);
    }
    const double e = std::exp(-2.0 * z);
    const double coth = (1.0 + e) / (1.0 - e);
    const double tail = 4.0 * z * e / ((1.0 - e) * (1.0 - e));
    return 0.5 * (coth - tail);
}

}  // namespace

std::string to_string(StepBranch branch) {
    switch (branch) {
    case StepBranch::Trig: return "trig";
    case StepBranch::Tanh: return "tanh";
    case StepBranch::Degenerate: return "degenerate";
    }
    return "unknown";
}

double matching_residual(double lambda, double M, double x_minus) {
    check_step(M, x_minus);
    if (!(lambda > 0.0)) fail(ErrorKind::Domain, "matching residual needs lambda > 0");
    const double L = kPi - x_minus;
    const double k = std::sqrt(lambda);
    const double a = std::cos(k * x_minus);
    const double b = std::sin(k * x_minus) / k;
    const double d = lambda - M;
    if (d > 0.0) {
        const double r = std::sqrt(d);
        return a * std::sin(r * L) / r + b * std::cos(r * L);
    }
    if (d < 0.0) {
        const double s = std::sqrt(-d);
        const double e = std::exp(-2.0 * s * L);
        return a * 0.5 * (1.0 - e) / s + b * 0.5 * (1.0 + e);
    }
    return a * L + b;
}

int step_count_below(double lambda, double M, double x_minus) {
    check_step(M, x_minus);
    if (!(lambda > 0.0)) return 0;
    const double L = kPi - x_minus;
    const double k = std::sqrt(lambda);
    int count = static_cast<int>(std::ceil(k * x_minus / kPi)) - 1;
    const double u0 = std::sin(k * x_minus) / k;
    const double w0 = std::cos(k * x_minus);
    const double d = lambda - M;
    if (d > 0.0) {
        const double r = std::sqrt(d);
        const double delta = std::atan2(r * u0, w0);
        count += static_cast<int>(std::ceil((delta + r * L) / kPi) - std::ceil(delta / kPi));
    } else if (d < 0.0) {
        const double s = std::sqrt(-d);
        if (u0 == 0.0) {
            ++count;
        } else if (u0 * w0 < 0.0 && std::abs(s * u0 / w0) < std::tanh(s * L)) {
            ++count;
        }
    } else {
        if (u0 == 0.0) {
            ++count;
        } else if (w0 != 0.0) {
            const double t = -u0 / w0;
            if (t > 0.0 && t < L) ++count;
        }
    }
    return count;
}

std::vector<StepEigenvalue> step_eigenvalues(double M, double x_minus, int k, double tol) {
    check_step(M, x_minus);
    if (k < 1 || k > 4) fail(ErrorKind::InvalidArgument, "step_eigenvalues supports 1 <= k <= 4");
    std::vector<StepEigenvalue> out;
    out.reserve(k);
    auto D = [&](double lambda) { return matching_residual(lambda, M, x_minus); };
    for (int n = 1; n <= k; ++n) {
        double a = 0.5;
        double b = double(n) * n + M + 1.0;
        int na = step_count_below(a, M, x_minus);
        int nb = step_count_below(b, M, x_minus);
        if (na != 0 || nb < n) fail(ErrorKind::Convergence, "step eigenvalue bracket is inconsistent");
        for (int it = 0; it < 200 && !(na == n - 1 && nb == n); ++it) {
            const double m = 0.5 * (a + b);
            const int nm = step_count_below(m, M, x_minus);
            if (nm >= n) {
                b = m;
                nb = nm;
            } else {
                a = m;
                na = nm;
            }
        }
        if (!(na == n - 1 && nb == n)) fail(ErrorKind::Convergence, "could not isolate a step eigenvalue");
        const double fa = D(a);
        const double fb = D(b);
        double lambda;
        if (fb == 0.0) {
            lambda = b;
        } else if (fa * fb > 0.0) {
            fail(ErrorKind::Convergence, "matching residual does not change sign on the isolating interval");
        } else {
            std::uintmax_t iters = 200;
            auto done = [tol](double lo, double hi) {
                return hi - lo <= tol * std::max(1.0, std::abs(lo));
            };
            const auto [lo, hi] = boost::math::tools::toms748_solve(D, a, b, fa, fb, done, iters);
            lambda = 0.5 * (lo + hi);
        }
        out.push_back({lambda, branch_of(lambda, M), D(lambda)});
    }
    return out;
}

RescaledState rescale(double lambda, double M, double x_minus) {
    if (!(M > 0.0)) fail(ErrorKind::InvalidArgument, "rescaling needs M > 0");
    RescaledState st;
    st.mu = 1.0 / std::sqrt(M);
    st.y = std::sqrt(M) * x_minus;
    if (lambda > M) {
        st.r = std::sqrt(lambda - M);
    } else if (lambda < M) {
        st.s = std::sqrt(M - lambda);
    } else {
        st.degenerate = true;
    }
    return st;
}

StepParameters unscale(const RescaledState& st) {
    if (!(st.mu > 0.0)) fail(ErrorKind::InvalidArgument, "mu must be positive");
    StepParameters p;
    p.M = 1.0 / (st.mu * st.mu);
    p.x_minus = st.mu * st.y;
    p.lambda = p.M;
    if (st.r) p.lambda = p.M + *st.r * *st.r;
    if (st.s) p.lambda = p.M - *st.s * *st.s;
    return p;
}

double rescaled_residual_trig(double r, double mu, double y) {
    const double g = std::sqrt(1.0 + mu * mu * r * r);
    return std::tan(r * (kPi - mu * y)) + mu * (r / g) * std::tan(g * y);
}

double rescaled_residual_tanh(double s, double mu, double y) {
    const double g2 = 1.0 - mu * mu * s * s;
    if (!(g2 > 0.0)) fail(ErrorKind::Domain, "tanh branch needs mu s < 1 (lambda > 0)");
    const double g = std::sqrt(g2);
    return std::tanh(s * (kPi - mu * y)) + mu * (s / g) * std::tan(g * y);
}

double rescaled_to_matching_factor(double lambda, double M, double x_minus) {
    check_step(M, x_minus);
    const double L = kPi - x_minus;
    const double ck = std::cos(std::sqrt(lambda) * x_minus);
    if (lambda > M) {
        const double r = std::sqrt(lambda - M);
        return ck * std::cos(r * L) / r;
    }
    if (lambda < M) {
        const double s = std::sqrt(M - lambda);
        return ck * 0.5 * (1.0 + std::exp(-2.0 * s * L)) / s;
    }
    fail(ErrorKind::Domain, "the rescaled equations exclude lambda = M");
}

double degenerate_condition(double M, double x_minus) {
    check_step(M, x_minus);
    const double k = std::sqrt(M);
    return std::sin(k * x_minus) + k * (kPi - x_minus) * std::cos(k * x_minus);
}

double degenerate_condition_printed(double M, double x_minus) {
    check_step(M, x_minus);
    const double k = std::sqrt(M);
    return k * (kPi - x_minus) + std::sin(k * x_minus);
}

double log_derivative_jump(double lambda, double M, double x_minus) {
    check_step(M, x_minus);
    const double L = kPi - x_minus;
    const double k = std::sqrt(lambda);
    const double left = k / std::tan(k * x_minus);
    double right;
    if (lambda > M) {
        const double r = std::sqrt(lambda - M);
        right = -r / std::tan(r * L);
    } else if (lambda < M) {
        const double s = std::sqrt(M - lambda);
        right = -s / std::tanh(s * L);
    } else {
        right = -1.0 / L;
    }
    return left - right;
}

StepEigenfunction::StepEigenfunction(double lambda, double M, double x_minus)
    : lambda_(lambda), M_(M), x_(x_minus) {
    check_step(M, x_minus);
    if (!(lambda > 0.0)) fail(ErrorKind::Domain, "eigenfunction needs lambda > 0");
    k_ = std::sqrt(lambda);
    const double L = kPi - x_;
    const double tol = 1e-12 * std::max(1.0, M);
    if (std::abs(lambda - M) <= tol) {
        branch_ = StepBranch::Degenerate;
        q_ = 0.0;
    } else {
        branch_ = branch_of(lambda, M);
        q_ = std::sqrt(std::abs(lambda - M));
    }
    const double sl = std::sin(k_ * x_);
    const double cl = std::cos(k_ * x_);

    double right_integral;
    switch (branch_) {
    case StepBranch::Trig: {
        const double sr = std::sin(q_ * L);
        const double cr = std::cos(q_ * L);
        B_ = std::abs(sr) >= std::abs(cr) ? sl / sr : -k_ * cl / (q_ * cr);
        right_integral = B_ * B_ * sin_sq_integral(q_ * L) / q_;
        break;
    }
    case StepBranch::Tanh:
        B_ = sl;
        right_integral = B_ * B_ * sinh_ratio_sq_integral(q_ * L) / q_;
        break;
    case StepBranch::Degenerate:
    default:
        B_ = sl;
        right_integral = B_ * B_ * L / 3.0;
        break;
    }
    const double left_integral = sin_sq_integral(k_ * x_) / k_;
    A_ = 1.0 / std::sqrt(left_integral + right_integral);
}

double StepEigenfunction::operator()(double x) const {
    if (x < x_) return A_ * std::sin(k_ * x);
    const double t = x - x_;
    const double L = kPi - x_;
    switch (branch_) {
    case StepBranch::Trig: return A_ * B_ * std::sin(q_ * (kPi - x));
    case StepBranch::Tanh: {
        const double e = std::exp(-2.0 * q_ * (kPi - x));
        const double eL = std::exp(-2.0 * q_ * L);
        return A_ * B_ * std::exp(-q_ * t) * (1.0 - e) / (1.0 - eL);
    }
    case StepBranch::Degenerate:
    default: return A_ * B_ * (kPi - x) / L;
    }
}

double StepEigenfunction::derivative(double x) const {
    if (x < x_) return A_ * k_ * std::cos(k_ * x);
    const double t = x - x_;
    const double L = kPi - x_;
    switch (branch_) {
    case StepBranch::Trig: return -A_ * B_ * q_ * std::cos(q_ * (kPi - x));
    case StepBranch::Tanh: {
        const double e = std::exp(-2.0 * q_ * (kPi - x));
        const double eL = std::exp(-2.0 * q_ * L);
        return -A_ * B_ * q_ * std::exp(-q_ * t) * (1.0 + e) / (1.0 - eL);
    }
    case StepBranch::Degenerate:
    default: return -A_ * B_ / L;
    }
}

double step_stationarity(double M, double x_minus) {
    const auto ev = step_eigenvalues(M, x_minus, 2);
    const StepEigenfunction u1(ev[0].lambda, M, x_minus);
    const StepEigenfunction u2(ev[1].lambda, M, x_minus);
    const double a = u1(x_minus);
    const double b = u2(x_minus);
    return b * b - a * a;
}

}  // namespace gapkit
