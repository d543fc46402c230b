// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gapkit/asymptotics.hpp"
#include "gapkit/optimizer.hpp"
#include "gapkit/solver.hpp"
#include "gapkit/step.hpp"
#include "generators.hpp"

using namespace gapkit;
using namespace gapkit::testing;

namespace {

const CoefficientP kOne = CoefficientP::constant(1.0);
const BoundaryConditions kDir = BoundaryConditions::dirichlet();

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

int failures = 0;

// Runs one criterion; a positive budget (seconds) is part of the pass condition.
void criterion(int id, const char* name, double budget, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget > 0.0 && secs >= budget) {
        o.passed = false;
        o.detail += fmt("; over budget %.3g s", budget);
    }
    if (!o.passed) ++failures;
    std::printf("%s %2d %-34s %9.3f s  %s\n", o.passed ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
    std::fflush(stdout);
}

std::vector<MinimizerReport> g_steps;

}  // namespace

int main() {
    criterion(1, "free-problem gap", 1.0, [] {
        const auto s = shoot_eigenvalues(kOne, Potential::constant(0.0), kDir, 2);
        const int N = 1024;
        const double h = kPi / N;
        const auto o = dense_oracle(kOne, Potential::constant(0.0), kDir, 2, N);
        const double es = std::max(std::abs(s[0].lambda - 1.0), std::abs(s[1].lambda - 4.0));
        const double eo = std::max(std::abs(o[0].lambda - 1.0), std::abs(o[1].lambda - 4.0));
        const double gamma = s[1].lambda - s[0].lambda;
        return Outcome{es < 1e-8 && std::abs(gamma - 3.0) < 1e-8 && eo < 10 * h * h,
                       fmt("shooting err %.2e, oracle err %.2e (10h^2 = %.2e)", es, eo, 10 * h * h)};
    });

    criterion(2, "limit constant", 1e-3, [] {
        const ThetaConstant t = solve_theta();
        return Outcome{std::abs(t.limit_gap - 2.04575) < 5e-6 && t.residual < 1e-12,
                       fmt("(theta/pi)^2 = %.9f, |tan t - t| = %.2e", t.limit_gap, t.residual)};
    });

    criterion(3, "reduced gap at upper endpoint", 1e-2, [] {
        const ReducedSolution r = solve_reduced(gap_proxy_upper_limit());
        return Outcome{std::abs(r.gap_proxy - 4.8171) < 5e-4,
                       fmt("y1 = %.10f, r^2 + s^2 = %.9f, target 4.8171", r.y1, r.gap_proxy)};
    });

    criterion(4, "reduced-system minimum", 0.1, [] {
        const ProxyMinimum m = minimize_gap_proxy();
        const double limit = solve_theta().limit_gap;
        return Outcome{std::abs(m.y1_star - 1.0 / kPi) < 1e-8 && std::abs(m.gap_star - limit) < 1e-10,
                       fmt("y1* - 1/pi = %.2e, gap* - limit = %.2e", m.y1_star - 1.0 / kPi, m.gap_star - limit)};
    });

    criterion(5, "monotone convergence of step gap", 30.0, [] {
        for (double M : {1e2, 1e3, 1e4, 1e5, 1e6}) g_steps.push_back(minimize_step_family(M));
        const double limit = solve_theta().limit_gap;
        bool decreasing = true, above = true, shrinking = true;
        for (std::size_t i = 0; i < g_steps.size(); ++i) {
            above = above && g_steps[i].gamma_star > limit;
            if (i > 0) decreasing = decreasing && g_steps[i].gamma_star < g_steps[i - 1].gamma_star;
            if (i > 1) {
                shrinking = shrinking && g_steps[i - 1].gamma_star - g_steps[i].gamma_star <
                                             g_steps[i - 2].gamma_star - g_steps[i - 1].gamma_star;
            }
        }
        std::string d = fmt("decreasing %.0f, shrinking %.0f, above limit %.0f; gamma*(1e6) = %.9f", decreasing,
                            shrinking, above, g_steps.back().gamma_star);
        d += fmt(" vs %.9f", limit);
        return Outcome{decreasing && above && shrinking, d};
    });

    criterion(6, "minimizer bounds", 0.0, [] {
        if (g_steps.empty()) return Outcome{false, "no step optima"};
        bool ok = true;
        std::string d;
        for (const auto& r : g_steps) {
            const double lo = kPi / (2 * std::sqrt(r.M));
            const double hi = kPi / std::sqrt(r.M - 2);
            const bool x_ok = r.x_minus_star >= lo && r.x_minus_star <= hi;
            const bool l2_ok = r.M + 1 < r.lambda2 && r.lambda2 < r.M + 4;
            const bool l1_ok = r.M - 2 < r.lambda1 && r.lambda1 < r.M + 1;
            const bool below = r.lambda1 < r.M;
            ok = ok && x_ok && l2_ok && l1_ok && below;
            if (!(x_ok && l2_ok && l1_ok && below)) {
                d += fmt("M=%.0e: x*/lower = %.8f, l1-M = %.4f, l2-M = %.4f; ", r.M, r.x_minus_star / lo,
                         r.lambda1 - r.M, r.lambda2 - r.M);
            }
        }
        return Outcome{ok, ok ? "all five M" : d};
    });

    criterion(7, "asymptotic step location", 0.0, [] {
        if (g_steps.empty()) return Outcome{false, "no step optima"};
        const double x = g_steps.back().x_minus_star;
        const double rel = std::abs(x - x_minus_expansion(1e6)) / x;
        return Outcome{rel < 1e-2, fmt("x*(1e6) = %.12f, expansion %.12f, rel %.2e", x, x_minus_expansion(1e6), rel)};
    });

    criterion(8, "single-crossing property", 60.0, [] {
        std::mt19937_64 rng(8);
        int worst = 0;
        for (int i = 0; i < 100; ++i) {
            const Potential V = random_single_well(rng, 100.0, 15);
            const auto s = shoot_eigenvalues(kOne, V, kDir, 2);
            std::vector<double> d(s[0].u.size());
            for (std::size_t k = 0; k < d.size(); ++k) d[k] = s[1].u[k] * s[1].u[k] - s[0].u[k] * s[0].u[k];
            worst = std::max(worst, count_sign_changes(d));
        }
        return Outcome{worst <= 2, fmt("max sign changes %.0f over 100 wells", worst)};
    });

    criterion(9, "Feynman-Hellmann consistency", 30.0, [] {
        std::mt19937_64 rng(9);
        double worst = 0.0;
        const double h = 1e-4;
        for (int i = 0; i < 20; ++i) {
            const std::vector<double> b = random_breakpoints(rng, uniform_int(rng, 1, 10));
            std::vector<double> v, dv;
            for (std::size_t c = 0; c + 1 < b.size(); ++c) {
                v.push_back(uniform(rng, 0.0, 100.0));
                dv.push_back(uniform(rng, -10.0, 10.0));
            }
            auto shifted = [&](double t) {
                std::vector<double> w(v.size());
                for (std::size_t c = 0; c < v.size(); ++c) w[c] = v[c] + t * dv[c];
                return Potential::piecewise_constant(b, w);
            };
            const Potential dV = Potential::piecewise_constant(b, dv);
            const auto base = shoot_eigenvalues(kOne, shifted(0.0), kDir, 2);
            const auto up = shoot_eigenvalues(kOne, shifted(h), kDir, 2);
            const auto dn = shoot_eigenvalues(kOne, shifted(-h), kDir, 2);
            for (int n = 0; n < 2; ++n) {
                const double fd = (up[n].lambda - dn[n].lambda) / (2 * h);
                const double fh = feynman_hellmann(base[n], dV);
                worst = std::max(worst, std::abs(fh - fd) / std::max(1.0, std::abs(base[n].lambda)));
            }
        }
        return Outcome{worst < 1e-4, fmt("max scaled difference %.2e", worst)};
    });

    criterion(10, "step vs dense oracle", 120.0, [] {
        std::mt19937_64 rng(10);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double M = std::exp(uniform(rng, 0.0, std::log(1e3)));
            const double x = uniform(rng, 0.05, kPi - 0.05);
            const auto ev = step_eigenvalues(M, x, 2);
            const auto o = dense_oracle_extrapolated(kOne, StepPotential(M, x).to_potential(), kDir, 2, 2048);
            for (int n = 0; n < 2; ++n) worst = std::max(worst, std::abs(ev[n].lambda - o[n]) / ev[n].lambda);
        }
        return Outcome{worst < 1e-6, fmt("max relative difference %.2e (M in [1, 1e3])", worst)};
    });

    criterion(11, "convex class affine optimum", 0.0, [] {
        const MinimizerReport a = minimize_convex_pl(10.0, 16);
        const MinimizerReport b = minimize_convex_pl(10.0, 16, Potential::affine(1.0, 0.0));
        const bool ok = a.affine && std::abs(a.slope) < 1e-3 && std::abs(a.gamma_star - 3.0) < 1e-3 && b.affine &&
                        std::abs(b.slope + 1.0) < 1e-3;
        return Outcome{ok, fmt("V0=0: slope %.2e, gamma %.9f; V0=x: slope %.9f", a.slope, a.gamma_star, b.slope)};
    });

    criterion(12, "single-well grid near a step", 0.0, [] {
        const MinimizerReport g = minimize_single_well_grid(50.0, 32);
        const MinimizerReport s = minimize_step_family(50.0);
        const double allow = 0.25 * 50.0 * kPi / 32.0;
        const double dg = g.gamma_star - s.gamma_star;
        return Outcome{g.l1_to_step <= allow && std::abs(dg) < 1e-3,
                       fmt("L1 %.4f (allowed %.4f), gamma grid - step = %.2e", g.l1_to_step, allow, dg)};
    });

    criterion(13, "truncation of 1/x", 0.0, [] {
        const TruncationReport t = truncation_experiment({1.0, 1.0}, {1e2, 1e3, 1e4, 1e5}, 1e-2);
        bool ok = t.monotone;
        std::string d = fmt("monotone %.0f", t.monotone);
        for (const auto& r : t.rows) {
            if (r.M_cap >= 1e4) ok = ok && r.within_epsilon;
            d += fmt("; cap %.0e: %.2e, %.2e", r.M_cap, r.shift1, r.shift2);
        }
        return Outcome{ok, d};
    });

    std::printf("%d of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
