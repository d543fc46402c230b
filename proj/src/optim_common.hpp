#pragma once

#include <vector>

#include "gapkit/potential.hpp"
#include "gapkit/solver.hpp"

namespace gapkit::detail {

/// Two lowest Dirichlet eigenpairs of -u'' + V u.
struct GapEval {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double gamma = 0.0;
    std::vector<EigenSolution> sols;
};

GapEval evaluate_gap(const Potential& V);
double gap_only(const Potential& V);

/// Integrals of d = u2^2 - u1^2 and x d over sub-intervals, from per-panel
/// Gauss rules on the Hermite interpolants of the eigenfunctions.
class DensityIntegrals {
public:
    DensityIntegrals(const EigenSolution& u1, const EigenSolution& u2);

    /// Integral over [a, b] of d(x) (c0 + c1 x).
    double linear(double a, double b, double c0, double c1) const;
    double plain(double a, double b) const { return linear(a, b, 1.0, 0.0); }

private:
    double partial(double a, double b, double c0, double c1) const;
    double prefix(const std::vector<double>& cum, double x, double c0, double c1, int which) const;

    const EigenSolution* s1_;
    const EigenSolution* s2_;
    EigenInterpolant i1_, i2_;
    std::vector<double> cum0_, cum1_;  // running integrals of d and x d at grid nodes
};

/// Euclidean projection onto nondecreasing sequences (pool adjacent violators).
void isotonic_increasing(std::vector<double>& v);
void isotonic_decreasing(std::vector<double>& v);

}  // namespace gapkit::detail
