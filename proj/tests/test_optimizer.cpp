#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "gapkit/error.hpp"
#include "gapkit/optimizer.hpp"
#include "gapkit/step.hpp"
#include "generators.hpp"

using namespace gapkit;
using namespace gapkit::testing;

TEST_CASE("optimal step matches frozen high-precision minima") {
    struct Row {
        double M, x, gamma;
    };
    for (const Row& r : {Row{50.0, 0.22164910439, 2.14869906981602}, Row{100.0, 0.156960579601, 2.103702548327883},
                         Row{1000.0, 0.0496718221392, 2.0319976670045}}) {
        const MinimizerReport rep = minimize_step_family(r.M);
        CHECK(std::abs(rep.gamma_star - r.gamma) < 1e-9);
        CHECK(std::abs(rep.x_minus_star - r.x) < 1e-8);
        CHECK(std::abs(rep.stationarity) < 1e-8);
        CHECK(rep.converged);
        CHECK(rep.lambda2_bounds_ok);
        CHECK(rep.x_upper_bound_ok);
        CHECK(rep.reflected_x_minus == doctest::Approx(kPi - rep.x_minus_star));
        CHECK(rep.gamma_star == doctest::Approx(rep.lambda2 - rep.lambda1));
    }
    CHECK_THROWS_AS(minimize_step_family(0.0), Error);
}

TEST_CASE("gap at the optimum is at or below every sampled step") {
    const double M = 100.0;
    const MinimizerReport rep = minimize_step_family(M);
    for (int i = 1; i < 200; ++i) {
        const double x = kPi * i / 200.0;
        const auto ev = step_eigenvalues(M, x, 2);
        CHECK(rep.gamma_star <= ev[1].lambda - ev[0].lambda + 1e-12);
    }
}

TEST_CASE("first-order checks at the optimal step") {
    const MinimizerReport rep = minimize_step_family(100.0);
    const auto checks = verify_first_order(*rep.potential, PotentialClass::Step);
    REQUIRE_FALSE(checks.empty());
    bool saw_plateau = false;
    for (const auto& c : checks) {
        if (c.direction == "plateau") {
            saw_plateau = true;
            CHECK(std::abs(c.derivative) < 1e-6);
        }
        if (c.admissible) CHECK(c.derivative >= -1e-6);
    }
    CHECK(saw_plateau);
    CHECK(first_order_certified(checks, 1e-6));
}

TEST_CASE("a non-optimal step has a descent direction") {
    const Potential V = StepPotential(100.0, kPi / 2).to_potential().with_tag(PotentialClass::Step, 100.0);
    const auto checks = verify_first_order(V, PotentialClass::Step);
    CHECK_FALSE(first_order_certified(checks, 1e-6));
    CHECK_THROWS_AS(verify_first_order(V, PotentialClass::None), Error);
}

TEST_CASE("convex search without background returns the zero potential") {
    const MinimizerReport rep = minimize_convex_pl(10.0, 6, std::nullopt, 1e-8, 150);
    CHECK(rep.gamma_star == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(rep.affine);
    CHECK(std::abs(rep.slope) < 1e-4);
    CHECK_THROWS_AS(minimize_convex_pl(10.0, 2), Error);
}

TEST_CASE("single-well grid search stays in class and improves on the free gap") {
    const MinimizerReport rep = minimize_single_well_grid(20.0, 8, std::nullopt, 1, 1e-8, 100);
    REQUIRE(rep.potential.has_value());
    CHECK(classify(*rep.potential, 1e-12).single_well);
    CHECK(rep.potential->sup_variable() <= 20.0 + 1e-12);
    CHECK(rep.potential->inf_variable() >= -1e-12);
    CHECK(rep.gamma_star < 3.0);
    // Best grid-aligned end step as a floor the search must reach.
    double best = 1e300;
    for (int j = 1; j < 8; ++j) {
        const auto ev = step_eigenvalues(20.0, kPi * j / 8, 2);
        best = std::min(best, ev[1].lambda - ev[0].lambda);
    }
    CHECK(rep.gamma_star <= best + 1e-9);

    const MinimizerReport zero = minimize_single_well_grid(0.0, 4, std::nullopt, 1, 1e-8, 20);
    CHECK(zero.gamma_star == doctest::Approx(3.0).epsilon(1e-9));
    CHECK_THROWS_AS(minimize_single_well_grid(1.0, 3), Error);
    CHECK_THROWS_AS(minimize_single_well_grid(1.0, 8, std::nullopt, 2), Error);
}

TEST_CASE("truncating 1/x converges from below") {
    const TruncationReport rep = truncation_experiment({1.0, 1.0}, {1e2, 1e3, 1e4}, 1e-6);
    CHECK(std::abs(rep.lambda1_reference - 1.7296297500033195) < 1e-9);
    CHECK(std::abs(rep.lambda2_reference - 4.9621648448775516) < 1e-9);
    CHECK(rep.monotone);
    REQUIRE(rep.rows.size() == 3);
    for (const auto& r : rep.rows) {
        CHECK(r.shift1 <= 1e-9);
        CHECK(r.shift2 <= 1e-9);
        CHECK(r.ell == doctest::Approx(1.0 / r.M_cap));
    }
    CHECK(rep.rows.back().within_epsilon);

    const TruncationReport cv = truncation_experiment({1.0, 1.0}, {1e3, 1e4}, 1e-6, TruncationMode::Convex);
    CHECK(cv.rows.back().ell == doctest::Approx(2.0 / 1e4));
    CHECK(cv.rows.back().within_epsilon);

    CHECK_THROWS_AS(truncation_experiment({1.0, 2.5}, {10.0}, 1e-3), Error);
    CHECK_THROWS_AS(truncation_experiment({1.0, 1.0}, {}, 1e-3), Error);
}

TEST_CASE("truncating a bounded potential above its maximum changes nothing") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const Potential V = random_single_well(rng, 50.0, 8);
        CHECK(l1_distance(truncate(V, 50.0), V) < 1e-12);
        const Potential T = truncate(V, 10.0);
        CHECK(T.sup_variable() <= 10.0 + 1e-12);
        CHECK(classify(T, 1e-12).single_well);
    }
}

TEST_CASE("degenerate step location") {
    for (double M : {3.0, 10.0, 100.0, 1e4}) {
        const double x = degenerate_step_location(M);
        REQUIRE(std::isfinite(x));
        CHECK(std::abs(degenerate_condition(M, x)) < 1e-8 * std::sqrt(M));
        const auto ev = step_eigenvalues(M, x, 1);
        CHECK(std::abs(ev[0].lambda - M) < 1e-7 * M);
    }
    CHECK(std::isnan(degenerate_step_location(0.5)));
    CHECK(std::isnan(degenerate_step_location(-1.0)));

    const DegenerateScan scan = degenerate_branch_scan({2.0, 5.0, 20.0, 100.0});
    REQUIRE(scan.rows.size() == 4);
    for (const auto& r : scan.rows) CHECK(r.lambda1_minus_M > -2.0);
    if (std::isfinite(scan.threshold)) CHECK(scan.threshold >= 2.0);
}
