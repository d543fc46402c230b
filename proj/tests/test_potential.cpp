#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "gapkit/error.hpp"
#include "gapkit/io.hpp"
#include "gapkit/potential.hpp"
#include "generators.hpp"

using namespace gapkit;
using namespace gapkit::testing;

namespace {

Potential vee() {
    const std::vector<double> knots{kPi / 2, 0.0, kPi / 2};
    return Potential::piecewise_linear({0.0, kPi / 2, kPi}, knots);
}

Potential double_wall(double M) {
    const std::vector<double> v{0.0, M, 0.0};
    return Potential::piecewise_constant({0.0, kPi / 3, 2 * kPi / 3, kPi}, v);
}

bool same_values(const Potential& a, const Potential& b, double tol = 1e-12) {
    for (int i = 0; i <= 400; ++i) {
        const double x = kPi * (i + 0.37) / 401.0;
        if (std::abs(a.evaluate(x) - b.evaluate(x)) > tol) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("evaluation follows the left-closed convention") {
    CHECK(Potential::constant(0.0).evaluate(1.0) == 0.0);
    const StepPotential s(10.0, 0.5);
    CHECK(s.evaluate(0.25) == 0.0);
    CHECK(s.evaluate(2.0) == 10.0);
    CHECK(s.evaluate(0.5) == 10.0);
    CHECK(s.to_potential().evaluate(0.5) == 10.0);
    CHECK(s.to_potential().evaluate(0.4999) == 0.0);
    CHECK_THROWS_AS(Potential::constant(1.0).evaluate(-0.1), Error);
    CHECK_THROWS_AS(Potential::constant(1.0).evaluate(4.0), Error);
}

TEST_CASE("background and sign compose as V0 + sign V1") {
    const auto bg = std::make_shared<const Potential>(Potential::affine(1.0, 0.0));
    const Potential V = Potential::constant(2.0).with_background(bg, -1);
    CHECK(V.evaluate(1.0) == doctest::Approx(-1.0));
    CHECK(V.variable_part(1.0) == 2.0);
    CHECK(V.flattened().evaluate(3.0) == doctest::Approx(1.0));
}

TEST_CASE("constructor rejects malformed data") {
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(Potential::piecewise_constant({0.0, 1.0}, one), Error);
    const std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(Potential::piecewise_constant({0.0, 2.0, 1.0, kPi}, std::vector<double>{1, 2, 3}), Error);
    CHECK_THROWS_AS(Potential::piecewise_constant({0.0, 1.0, kPi}, two, PotentialClass::Convex), Error);
    CHECK_THROWS_AS(double_wall(5.0).with_tag(PotentialClass::SingleWell), Error);
    CHECK_THROWS_AS(Potential::constant(3.0).with_tag(PotentialClass::SingleWell, 2.0), Error);
    CHECK_THROWS_AS(StepPotential(0.0, 1.0), Error);
    CHECK_THROWS_AS(StepPotential(1.0, kPi), Error);
    CHECK_THROWS_AS(BoundaryConditions(kPi, 0.0), Error);
}

TEST_CASE("classify: constant, vee and double wall") {
    const Classification c = classify(Potential::constant(2.0));
    CHECK(c.single_well);
    CHECK(c.convex);
    CHECK(c.transition_lo == 0.0);
    CHECK(c.transition_hi == doctest::Approx(kPi));

    const Classification v = classify(vee());
    CHECK(v.single_well);
    CHECK(v.convex);
    CHECK(v.transition_lo == doctest::Approx(kPi / 2));
    CHECK(v.transition_hi == doctest::Approx(kPi / 2));
    CHECK(v.label() == "single_well+convex");

    const Classification w = classify(double_wall(7.0));
    CHECK_FALSE(w.single_well);
    CHECK_FALSE(w.convex);
    CHECK(w.label() == "neither");

    const Classification s = classify(StepPotential(4.0, 1.0).to_potential());
    CHECK(s.single_well);
    CHECK_FALSE(s.convex);
    CHECK(s.transition_lo == 0.0);
    CHECK(s.transition_hi == doctest::Approx(1.0));
}

TEST_CASE("reflect maps coordinates and is an involution") {
    const StepPotential s(3.0, 1.0);
    CHECK(s.reflected().side == StepSide::Right);
    CHECK(s.reflected().x_minus == doctest::Approx(kPi - 1.0));
    CHECK(same_values(reflect(s.to_potential()), s.reflected().to_potential()));

    const std::vector<double> v{1.0, 2.0};
    const Potential P = Potential::piecewise_constant({0.0, 1.0, kPi}, v);
    const Potential R = reflect(P);
    REQUIRE(R.breakpoints().size() == 3);
    CHECK(R.breakpoints()[1] == doctest::Approx(kPi - 1.0));
    CHECK(same_values(reflect(Potential::constant(2.5)), Potential::constant(2.5)));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const Potential V = random_single_well(rng, 20.0, 10);
        const Potential RR = reflect(reflect(V));
        CHECK(RR.tag() == V.tag());
        CHECK(l1_distance(RR, V) < 1e-12);
    }
}

TEST_CASE("blend endpoints and linearity") {
    const Potential V = vee();
    CHECK(same_values(blend(V, V, 0.3), V));
    const Potential P = StepPotential(8.0, 1.0).to_potential();
    CHECK(same_values(blend(V, P, 0.0), V));
    CHECK(same_values(blend(V, P, 1.0), P));
    const Potential half = blend(Potential::constant(0.0), P, 0.5);
    CHECK(half.evaluate(2.0) == doctest::Approx(4.0));
    CHECK(half.evaluate(0.5) == doctest::Approx(0.0));
    CHECK_THROWS_AS(blend(V, P, 1.5), Error);
}

TEST_CASE("proof perturbations match their definitions") {
    const Potential flat = Potential::constant(3.0);
    const Potential plateau = proof_perturbation(flat, PerturbationKind::Plateau, {0.8, 2.0, 0.0, 0.0});
    CHECK(l1_distance(plateau, flat) < 1e-14);

    const Potential step = StepPotential(10.0, 1.0).to_potential();
    const Potential fill = proof_perturbation(step, PerturbationKind::LeftFill, {0.5, 2.0, 0.5, 0.0});
    CHECK(l1_distance(fill, step) < 1e-14);

    // Tent for a convex V: 0 at x_-, 1 at x_n, 0 at x_+.
    const Potential V = vee();
    const Potential tent = proof_perturbation(V, PerturbationKind::Hinge, {1.0, 2.5, 0.0, 1.5});
    const Potential D = subtract(tent, V);
    CHECK(D.evaluate(1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(D.evaluate(1.5) == doctest::Approx(1.0));
    CHECK(D.evaluate(2.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(D.evaluate(1.25) == doctest::Approx(0.5));

    const Potential hinge = proof_perturbation(V, PerturbationKind::Hinge, {1.0, 2.5, 0.0, 0.5});
    const Potential H = subtract(hinge, V);
    CHECK(H.evaluate(0.0) == doctest::Approx(-0.5));
    CHECK(H.evaluate(0.8) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(proof_perturbation(V, PerturbationKind::Plateau, {2.0, 1.0, 0.0, 0.0}), Error);
    CHECK_THROWS_AS(proof_perturbation(V, PerturbationKind::Hinge, {1.0, 2.0, 0.0, 0.0}), Error);
}

TEST_CASE("fills preserve the single-well class for every kappa") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) {
        const Potential V = random_single_well(rng, 30.0, 10);
        const double a = uniform(rng, 0.0, kPi);
        const auto kind = i % 2 ? PerturbationKind::LeftFill : PerturbationKind::RightFill;
        const Potential R = proof_perturbation(V, kind, {0.0, kPi, a, 0.0}).with_tag(PotentialClass::SingleWell);
        for (double k : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const Potential B = blend(V, R, k);
            CHECK(B.tag() == PotentialClass::SingleWell);
            CHECK(B.inf_variable() >= -1e-12);
            CHECK(B.sup_variable() <= 30.0 + 1e-12);
        }
        CHECK(admissible_kappa(V, R, PotentialClass::SingleWell) == 1.0);
    }
}

TEST_CASE("a plateau on one monotone side preserves the single-well class") {
    std::mt19937_64 rng(6);
    int tested = 0;
    for (int i = 0; i < 200 && tested < 40; ++i) {
        const Potential V = random_single_well(rng, 30.0, 10);
        const Classification c = classify(V);
        double lo, hi;
        if (kPi - c.transition_hi > 0.2) {
            lo = uniform(rng, c.transition_hi, kPi - 0.1);
            hi = uniform(rng, lo + 0.05, kPi);
        } else if (c.transition_lo > 0.2) {
            hi = uniform(rng, 0.1, c.transition_lo);
            lo = uniform(rng, 0.0, hi - 0.05);
        } else {
            continue;
        }
        ++tested;
        const Potential R = proof_perturbation(V, PerturbationKind::Plateau, {lo, hi, 0.0, 0.0})
                                .with_tag(PotentialClass::SingleWell);
        for (double k : {0.1, 0.5, 0.9}) CHECK(blend(V, R, k).tag() == PotentialClass::SingleWell);
    }
    CHECK(tested >= 20);
}

TEST_CASE("hinge directions keep convexity up to the admissible kappa") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 40; ++i) {
        const Potential V = random_convex(rng, 10.0, 6);
        const double xm = uniform(rng, 0.1, 1.4);
        const double xp = uniform(rng, 1.8, 3.0);
        const double xn = V.breakpoints().size() > 2 ? V.breakpoints()[1] : 1.6;
        const Potential R = proof_perturbation(V, PerturbationKind::Hinge, {xm, xp, 0.0, xn});
        const double k = admissible_kappa(V, R, PotentialClass::Convex);
        if (k > 0.0) {
            const Potential B = blend(V.with_tag(PotentialClass::None), R, 0.999 * k);
            CHECK(classify(B, 1e-9).convex);
        }
    }
}

TEST_CASE("l1 distance is exact on linear pieces") {
    const Potential a = Potential::affine(1.0, -1.0);  // x - 1
    const Potential zero = Potential::constant(0.0);
    // Integral of |x - 1| over [0, pi].
    CHECK(l1_distance(a, zero) == doctest::Approx(0.5 + 0.5 * (kPi - 1) * (kPi - 1)));
    CHECK(l1_distance(StepPotential(2.0, 1.0).to_potential(), zero) == doctest::Approx(2.0 * (kPi - 1.0)));
}

TEST_CASE("JSON descriptors round-trip") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const Potential V = random_single_well(rng, 15.0, 8);
        const Potential W = potential_from_json(potential_to_json(V));
        CHECK(W.tag() == V.tag());
        CHECK(W.bound() == V.bound());
        CHECK(l1_distance(V, W) == 0.0);
    }
    const auto j = nlohmann::json::parse(R"({"breakpoints":[0,1,3.141592653589793],
        "segments":[{"left":0,"right":1},[2,2]],"class":"none","background":{"breakpoints":[0,3.141592653589793],"segments":[1]},"sign":-1})");
    const Potential V = potential_from_json(j);
    CHECK(V.sign() == -1);
    CHECK(V.evaluate(0.5) == doctest::Approx(0.5));
    CHECK(V.evaluate(2.0) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(potential_from_json(nlohmann::json::parse(R"({"segments":[]})")), Error);
    CHECK_THROWS_AS(potential_from_json(nlohmann::json::parse(R"({"breakpoints":[0,3.141592653589793],"segments":[1],"class":"round"})")), Error);
    try {
        read_potential("/nonexistent/zero.json");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
}
