#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "gapkit/error.hpp"
#include "gapkit/optimizer.hpp"

namespace gapkit {

namespace {

std::string at(const char* name, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s@%.6g", name, x);
    return buf;
}

void add_check(std::vector<FirstOrderCheck>& out, const Potential& V, const Potential& R,
               PotentialClass cls, std::string name, double anchor) {
    FirstOrderCheck c;
    c.direction = std::move(name);
    c.anchor = anchor;
    c.kappa = admissible_kappa(V, R, cls);
    // kappa below this only reflects the class-test tolerance.
    c.admissible = c.kappa > 1e-9;
    c.derivative = gap_derivative(V, R);
    out.push_back(std::move(c));
}

// V + D for a direction D given on a refinement of V's breakpoints.
Potential add_direction(const Potential& V, const std::vector<double>& extra,
                        const std::function<double(double)>& D) {
    std::vector<double> inner;
    for (double e : extra) {
        if (e > 0.0 && e < kPi) inner.push_back(e);
    }
    std::vector<double> cells = merge_breakpoints(V.breakpoints(), inner);
    std::vector<Segment> segs;
    for (std::size_t j = 0; j + 1 < cells.size(); ++j) {
        const double a = cells[j];
        const double b = cells[j + 1];
        // Each cell lies inside one linear piece of V1.
        const double va = V.variable_part(a);
        const double vb = 2.0 * V.variable_part(0.5 * (a + b)) - va;
        segs.push_back({va + D(a), vb + D(b)});
    }
    return Potential(std::move(cells), std::move(segs), PotentialClass::None, std::nullopt,
                     V.background_ptr(), V.sign());
}

}  // namespace

std::vector<FirstOrderCheck> verify_first_order(const Potential& V, PotentialClass cls) {
    const GapResult g = gap(CoefficientP::constant(1.0), V, BoundaryConditions::dirichlet());
    if (std::isnan(g.x_minus)) {
        fail(ErrorKind::Convergence, "crossing structure unavailable; cannot build comparison functions");
    }
    const double xm = g.x_minus;
    const double xp = g.x_plus;
    std::vector<FirstOrderCheck> out;

    if (cls == PotentialClass::SingleWell || cls == PotentialClass::Step) {
        if (xm < xp) {
            const Potential R = proof_perturbation(V, PerturbationKind::Plateau, {xm, xp, 0.0, 0.0});
            add_check(out, V, R, cls, "plateau", xm);
        }
        const Classification c = classify(V, 1e-12 * std::max(1.0, V.sup_variable()));
        for (double a : {xm, c.transition_lo}) {
            if (a > 0.0) {
                const Potential R = proof_perturbation(V, PerturbationKind::LeftFill, {xm, xp, a, 0.0});
                add_check(out, V, R, cls, at("left-fill", a), a);
            }
        }
        for (double a : {xp, c.transition_hi}) {
            if (a < kPi) {
                const Potential R = proof_perturbation(V, PerturbationKind::RightFill, {xm, xp, a, 0.0});
                add_check(out, V, R, cls, at("right-fill", a), a);
            }
        }
        return out;
    }

    if (cls == PotentialClass::Convex) {
        std::vector<double> hinges;
        for (std::size_t j = 1; j + 1 < V.breakpoints().size(); ++j) hinges.push_back(V.breakpoints()[j]);
        for (int k = 1; k < 8; ++k) hinges.push_back(kPi * k / 8);
        std::sort(hinges.begin(), hinges.end());
        hinges.erase(std::unique(hinges.begin(), hinges.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                     hinges.end());
        for (double xn : hinges) {
            if (std::abs(xn - xm) < 1e-9 || std::abs(xn - xp) < 1e-9) continue;
            const Potential R = proof_perturbation(V, PerturbationKind::Hinge, {xm, xp, 0.0, xn});
            add_check(out, V, R, cls, at("hinge", xn), xn);
        }
        add_check(out, V, add_direction(V, {}, [](double) { return 1.0; }), cls, "shift+1", 0.0);
        add_check(out, V, add_direction(V, {}, [](double) { return -1.0; }), cls, "shift-1", 0.0);
        add_check(out, V, add_direction(V, {}, [](double x) { return x - kPi / 2; }), cls, "tilt+", kPi / 2);
        add_check(out, V, add_direction(V, {}, [](double x) { return kPi / 2 - x; }), cls, "tilt-", kPi / 2);
        for (int k = 1; k < 4; ++k) {
            const double c = kPi * k / 4;
            add_check(out, V, add_direction(V, {c}, [c](double x) { return std::abs(x - c); }), cls,
                      at("vee", c), c);
        }
        return out;
    }
    fail(ErrorKind::InvalidArgument, "first-order checks exist for the single-well and convex classes");
}

bool first_order_certified(const std::vector<FirstOrderCheck>& checks, double tol) {
    for (const FirstOrderCheck& c : checks) {
        if (c.admissible && c.derivative < -tol) return false;
    }
    return true;
}

}  // namespace gapkit
