#include "gapkit/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "gapkit/error.hpp"
#include "gapkit/potential.hpp"

namespace gapkit {

namespace {

template <class F>
double bracketed_root(F&& f, double a, double b) {
    std::uintmax_t iters = 200;
    auto done = [](double lo, double hi) { return hi - lo <= 2e-16 * std::max(1.0, std::abs(lo)); };
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, done, iters);
    return 0.5 * (lo + hi);
}

}  // namespace

ThetaConstant solve_theta() {
    // sin - theta cos has the same root as tan - theta but no pole at 3 pi / 2.
    auto f = [](double t) { return std::sin(t) - t * std::cos(t); };
    ThetaConstant out;
    out.theta = bracketed_root(f, kPi + 1e-9, 1.5 * kPi - 1e-9);
    out.limit_gap = (out.theta / kPi) * (out.theta / kPi);
    out.residual = std::abs(std::tan(out.theta) - out.theta);
    return out;
}

ReducedSolution solve_reduced(double y1) {
    if (!(y1 > 0.0) || !std::isfinite(y1)) fail(ErrorKind::InvalidArgument, "y1 must be positive");
    ReducedSolution out;
    out.y1 = y1;
    out.r = bracketed_root([y1](double r) { return y1 * std::sin(kPi * r) - r * std::cos(kPi * r); },
                           1.0, 1.5);
    const double critical = 1.0 / kPi;
    out.has_s = y1 >= critical;
    if (y1 > critical) {
        auto h = [y1](double s) { return y1 * std::tanh(kPi * s) - s; };
        double lo = y1;
        while (h(lo) <= 0.0 && lo > 1e-300) lo *= 0.5;
        out.s = lo > 1e-300 ? bracketed_root(h, lo, y1) : 0.0;
    }
    out.eta = y1 * (y1 - critical);
    out.gap_proxy = out.r * out.r + out.s * out.s;
    out.residual_r = std::abs(std::tan(kPi * out.r) - out.r / y1);
    out.residual_s = std::abs(std::tanh(kPi * out.s) - out.s / y1);
    return out;
}

double gap_proxy_derivative(double y1) {
    const ReducedSolution sol = solve_reduced(y1);
    if (!sol.has_s) fail(ErrorKind::Domain, "gap proxy derivative needs y1 >= 1/pi");
    const double r2 = sol.r * sol.r;
    const double s2 = sol.s * sol.s;
    if (sol.eta == 0.0 || s2 == 0.0) {
        // s^2 ~ 3 eps / pi and eta ~ eps / pi as y1 = 1/pi + eps.
        return 1.0 / kPi;
    }
    return (2.0 / kPi) * (s2 / (s2 - sol.eta) - r2 / (r2 + sol.eta));
}

double gap_proxy_upper_limit() { return 3.0 / (2.0 * std::tanh(1.5 * kPi)); }

ProxyMinimum minimize_gap_proxy() {
    const double lo = 1.0 / kPi;
    const double hi = gap_proxy_upper_limit();
    auto f = [](double y1) { return solve_reduced(y1).gap_proxy; };

    ProxyMinimum out;
    std::uintmax_t iters = 500;
    const auto [y_brent, g_brent] = boost::math::tools::brent_find_minima(f, lo, hi, 50, iters);
    const double g_lo = f(lo);
    if (g_lo <= g_brent) {
        out.y1_star = lo;
        out.gap_star = g_lo;
    } else {
        out.y1_star = y_brent;
        out.gap_star = g_brent;
    }
    out.eta_star = out.y1_star * (out.y1_star - lo);
    out.upper_y1 = hi;
    out.gap_at_upper = f(hi);

    constexpr int kSamples = 20;
    constexpr double h = 1e-6;
    out.derivative_samples = kSamples;
    for (int i = 1; i <= kSamples; ++i) {
        const double y = lo + (hi - lo) * i / (kSamples + 1);
        const double fd = (f(y + h) - f(y - h)) / (2.0 * h);
        out.derivative_identity_residual =
            std::max(out.derivative_identity_residual, std::abs(fd - gap_proxy_derivative(y)));
        if (gap_proxy_derivative(y) <= 0.0) out.interior_critical_point = true;
    }
    return out;
}

double x_minus_expansion(double M) {
    if (!(M > 0.0)) fail(ErrorKind::InvalidArgument, "M must be positive");
    return kPi / (2.0 * std::sqrt(M)) + 1.0 / (kPi * M);
}

}  // namespace gapkit
