#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "gapkit/error.hpp"
#include "gapkit/solver.hpp"
#include "gapkit/step.hpp"
#include "generators.hpp"

using namespace gapkit;
using namespace gapkit::testing;

namespace {

// 40-digit matching-condition roots (mpmath, tests/oracles/step_spectrum.py).
struct Frozen {
    double M, x, l1, l2;
};

const Frozen kFrozen[] = {
    {100.0, kPi / 20, 100.26298330400287648, 102.3667362408917632},
    {50.0, 0.2216491044, 50.284733795987393506, 52.433432865803413538},
    {1e4, 0.01570795228, 10000.251324822622096, 10002.261362331306675},
    {3.5, 0.7, 4.1290816305334215469, 6.7034522403889345394},
    {1000.0, 0.05, 999.99657084161834832, 1002.0764677752806349},
};

}  // namespace

TEST_CASE("closed-form eigenvalues match frozen high-precision roots") {
    for (const Frozen& f : kFrozen) {
        const auto ev = step_eigenvalues(f.M, f.x, 2);
        CHECK(std::abs(ev[0].lambda - f.l1) < 1e-12 * f.l1);
        CHECK(std::abs(ev[1].lambda - f.l2) < 1e-12 * f.l2);
    }
}

TEST_CASE("branches follow the sign of lambda - M") {
    const auto a = step_eigenvalues(100.0, kPi / 20, 2);
    CHECK(a[0].branch == StepBranch::Trig);
    const auto b = step_eigenvalues(1000.0, 0.05, 2);
    CHECK(b[0].branch == StepBranch::Tanh);
    CHECK(b[1].branch == StepBranch::Trig);
    CHECK(to_string(StepBranch::Tanh) == "tanh");
}

TEST_CASE("zero height is the free problem") {
    const auto ev = step_eigenvalues(0.0, 1.0, 4);
    for (int n = 1; n <= 4; ++n) CHECK(ev[n - 1].lambda == doctest::Approx(n * n).epsilon(1e-13));
}

TEST_CASE("eigenvalue counting brackets the roots") {
    for (const Frozen& f : kFrozen) {
        CHECK(step_count_below(f.l1 * (1 - 1e-9), f.M, f.x) == 0);
        CHECK(step_count_below(0.5 * (f.l1 + f.l2), f.M, f.x) == 1);
        CHECK(step_count_below(f.l2 * (1 + 1e-9), f.M, f.x) == 2);
    }
}

TEST_CASE("rescaled residuals vanish at the eigenvalues") {
    for (const Frozen& f : kFrozen) {
        for (double lambda : {f.l1, f.l2}) {
            const RescaledState st = rescale(lambda, f.M, f.x);
            const StepParameters back = unscale(st);
            CHECK(back.lambda == doctest::Approx(lambda).epsilon(1e-13));
            CHECK(back.M == doctest::Approx(f.M).epsilon(1e-13));
            CHECK(back.x_minus == doctest::Approx(f.x).epsilon(1e-13));
            auto res = [&](double l) {
                const RescaledState q = rescale(l, f.M, f.x);
                return q.r ? rescaled_residual_trig(*q.r, q.mu, q.y) : rescaled_residual_tanh(*q.s, q.mu, q.y);
            };
            CHECK(res(lambda * (1 - 1e-12)) * res(lambda * (1 + 1e-12)) <= 0.0);
            CHECK(std::abs(log_derivative_jump(lambda, f.M, f.x)) < 1e-6 * std::sqrt(f.M));
        }
    }
    CHECK_THROWS_AS(rescale(1.0, 0.0, 1.0), Error);
}

TEST_CASE("matching residual equals the rescaled one times the factor") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const double M = std::exp(uniform(rng, 0.0, std::log(1e4)));
        const double x = uniform(rng, 0.05, 3.0);
        double lambda = uniform(rng, 0.2, 2.0) * M + uniform(rng, 0.5, 5.0);
        if (std::abs(lambda - M) < 1e-3) lambda += 0.1;
        const RescaledState st = rescale(lambda, M, x);
        const double rescaled = st.r ? rescaled_residual_trig(*st.r, st.mu, st.y)
                                     : rescaled_residual_tanh(*st.s, st.mu, st.y);
        if (!std::isfinite(rescaled) || std::abs(rescaled) > 1e6) continue;
        const double direct = matching_residual(lambda, M, x);
        const double via = rescaled * rescaled_to_matching_factor(lambda, M, x);
        CHECK(std::abs(direct - via) < 1e-8 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("closed form agrees with shooting on random steps") {
    std::mt19937_64 rng(77);
    const CoefficientP p = CoefficientP::constant(1.0);
    for (int i = 0; i < 200; ++i) {
        const double M = std::exp(uniform(rng, std::log(0.5), std::log(2e3)));
        const double x = uniform(rng, 0.02, kPi - 0.02);
        const auto closed = step_eigenvalues(M, x, 2);
        const auto shot = shoot_eigenvalues(p, StepPotential(M, x).to_potential(),
                                            BoundaryConditions::dirichlet(), 2);
        CHECK(std::abs(closed[0].lambda - shot[0].lambda) < 1e-9 * closed[0].lambda);
        CHECK(std::abs(closed[1].lambda - shot[1].lambda) < 1e-9 * closed[1].lambda);
    }
}

TEST_CASE("eigenvalues move continuously across lambda = M") {
    // lambda_1(M, x) crosses M as x moves through the degenerate location.
    const double M = 200.0;
    double prev = step_eigenvalues(M, 0.08, 1)[0].lambda;
    for (int i = 1; i <= 200; ++i) {
        const double x = 0.08 + 0.002 * i;
        const double cur = step_eigenvalues(M, x, 1)[0].lambda;
        CHECK(cur <= prev + 1e-12 * M);  // a longer free interval lowers lambda_1
        CHECK(prev - cur < 0.05 * M);
        prev = cur;
    }
}

TEST_CASE("eigenfunctions are C1, normalised and orthogonal") {
    for (const Frozen& f : kFrozen) {
        const auto ev = step_eigenvalues(f.M, f.x, 2);
        const StepEigenfunction u1(ev[0].lambda, f.M, f.x);
        const StepEigenfunction u2(ev[1].lambda, f.M, f.x);
        const double h = 1e-9;
        for (const StepEigenfunction* u : {&u1, &u2}) {
            CHECK(std::abs((*u)(f.x - h) - (*u)(f.x + h)) < 1e-6);
            CHECK(std::abs(u->derivative(f.x - h) - u->derivative(f.x + h)) < 1e-5 * std::sqrt(f.M));
            CHECK(std::abs((*u)(0.0)) < 1e-12);
            CHECK(std::abs((*u)(kPi)) < 1e-10);
        }
        const int n = 200000;
        double n1 = 0.0, n2 = 0.0, c = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = kPi * (i + 0.5) / n;
            const double a = u1(x), b = u2(x);
            n1 += a * a;
            n2 += b * b;
            c += a * b;
        }
        const double w = kPi / n;
        CHECK(n1 * w == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(n2 * w == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::abs(c * w) < 1e-6);
        CHECK(u1(0.5 * f.x) > 0.0);
    }
}

TEST_CASE("degenerate condition forms") {
    for (double M : {3.0, 10.0, 100.0, 1e4}) {
        const double k = std::sqrt(M);
        for (double x : {0.1, 0.7, 2.0}) {
            CHECK(degenerate_condition(M, x) ==
                  doctest::Approx(std::sin(k * x) + k * (kPi - x) * std::cos(k * x)));
            CHECK(degenerate_condition_printed(M, x) == doctest::Approx(k * (kPi - x) + std::sin(k * x)));
        }
    }
}

TEST_CASE("stationarity matches the finite-difference gap slope") {
    for (const Frozen& f : kFrozen) {
        const double h = 1e-4 * f.x;
        auto g = [&](double x) {
            const auto ev = step_eigenvalues(f.M, x, 2);
            return ev[1].lambda - ev[0].lambda;
        };
        const double d1 = (g(f.x + h) - g(f.x - h)) / (2 * h);
        const double d2 = (g(f.x + h / 2) - g(f.x - h / 2)) / h;
        const double fd = (4 * d2 - d1) / 3;
        CHECK(std::abs(-f.M * step_stationarity(f.M, f.x) - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("argument errors") {
    CHECK_THROWS_AS(step_eigenvalues(10.0, 0.0, 2), Error);
    CHECK_THROWS_AS(step_eigenvalues(10.0, kPi, 2), Error);
    CHECK_THROWS_AS(step_eigenvalues(-1.0, 1.0, 2), Error);
    CHECK_THROWS_AS(step_eigenvalues(10.0, 1.0, 5), Error);
    CHECK_THROWS_AS(matching_residual(0.0, 10.0, 1.0), Error);
}
