#include <algorithm>
#include <cmath>

#include "gapkit/error.hpp"
#include "gapkit/optimizer.hpp"

namespace gapkit {

namespace {

std::pair<double, double> two_lowest(const PotentialField& field) {
    SolverOptions opts;
    opts.eigenfunctions = false;
    const auto sols = shoot_eigenvalues(CoefficientP::constant(1.0), field, BoundaryConditions::dirichlet(), 2, opts);
    return {sols[0].lambda, sols[1].lambda};
}

}  // namespace

TruncationReport truncation_experiment(const DivergentPotential& V, std::vector<double> M_caps,
                                       double epsilon, TruncationMode mode) {
    if (!(V.c > 0.0)) fail(ErrorKind::InvalidArgument, "divergent potential needs c > 0");
    if (!(V.q > 0.0 && V.q < 2.0)) {
        fail(ErrorKind::Domain, "c x^-q with q outside (0, 2) cannot be shot from the endpoint");
    }
    if (!(epsilon > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be positive");
    if (M_caps.empty()) fail(ErrorKind::InvalidArgument, "no truncation levels given");
    std::sort(M_caps.begin(), M_caps.end());

    const PotentialField reference = PotentialField::power_law(V.c, V.q);
    TruncationReport rep;
    rep.epsilon = epsilon;
    std::tie(rep.lambda1_reference, rep.lambda2_reference) = two_lowest(reference);

    const double c = V.c;
    const double q = V.q;
    auto f = [c, q](double x) { return c * std::pow(x, -q); };
    for (double Mc : M_caps) {
        if (!(Mc > 0.0)) fail(ErrorKind::InvalidArgument, "truncation levels must be positive");
        TruncationRow row;
        row.M_cap = Mc;
        std::vector<PotentialField::Piece> pieces;
        if (mode == TruncationMode::SingleWell) {
            // min(V, M_cap): constant up to the point where V drops below M_cap.
            row.ell = std::pow(c / Mc, 1.0 / q);
        } else {
            // Tangent line at ell reaching M_cap at 0: c ell^-q (1 + q) = M_cap.
            row.ell = std::pow(c * (1.0 + q) / Mc, 1.0 / q);
        }
        if (row.ell >= kPi) {
            PotentialField::Piece p;
            p.x0 = 0.0;
            p.x1 = kPi;
            if (mode == TruncationMode::SingleWell) {
                p.kind = PotentialField::Kind::Constant;
                p.v0 = p.v1 = Mc;
            } else {
                const double ell = row.ell;
                p.kind = PotentialField::Kind::Affine;
                p.v0 = Mc;
                p.v1 = f(ell) - q * f(ell) / ell * (kPi - ell);
            }
            pieces.push_back(p);
        } else {
            PotentialField::Piece head;
            head.x0 = 0.0;
            head.x1 = row.ell;
            head.v0 = Mc;
            if (mode == TruncationMode::SingleWell) {
                head.kind = PotentialField::Kind::Constant;
                head.v1 = Mc;
            } else {
                head.kind = PotentialField::Kind::Affine;
                head.v1 = f(row.ell);
            }
            PotentialField::Piece tail;
            tail.x0 = row.ell;
            tail.x1 = kPi;
            tail.kind = PotentialField::Kind::Smooth;
            tail.f = f;
            pieces.push_back(head);
            pieces.push_back(tail);
        }
        std::tie(row.lambda1, row.lambda2) = two_lowest(PotentialField(std::move(pieces)));
        row.shift1 = row.lambda1 - rep.lambda1_reference;
        row.shift2 = row.lambda2 - rep.lambda2_reference;
        const double slack = 1e-9 * std::max(1.0, rep.lambda2_reference);
        row.within_epsilon = row.shift1 >= -epsilon && row.shift1 <= slack && row.shift2 >= -epsilon &&
                             row.shift2 <= slack;
        rep.rows.push_back(row);
    }
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const double slack = 1e-9 * std::max(1.0, rep.rows[i].lambda2);
        if (rep.rows[i].lambda1 < rep.rows[i - 1].lambda1 - slack ||
            rep.rows[i].lambda2 < rep.rows[i - 1].lambda2 - slack) {
            rep.monotone = false;
        }
    }
    return rep;
}

Potential truncate(const Potential& V, double M_cap) {
    const Potential flat = V.flattened();
    const auto b = flat.breakpoints();
    const auto segs = flat.segments();
    std::vector<double> nb{0.0};
    std::vector<Segment> ns;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const double x0 = b[i];
        const double x1 = b[i + 1];
        const double v0 = segs[i].left;
        const double v1 = segs[i].right;
        if ((v0 - M_cap) * (v1 - M_cap) < 0.0) {
            const double xc = x0 + (x1 - x0) * (M_cap - v0) / (v1 - v0);
            if (xc > x0 && xc < x1) {
                ns.push_back({std::min(v0, M_cap), M_cap});
                nb.push_back(xc);
                ns.push_back({M_cap, std::min(v1, M_cap)});
                nb.push_back(x1);
                continue;
            }
        }
        ns.push_back({std::min(v0, M_cap), std::min(v1, M_cap)});
        nb.push_back(x1);
    }
    return Potential(std::move(nb), std::move(ns));
}

}  // namespace gapkit
