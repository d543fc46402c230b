#include "optim_common.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss.hpp>

namespace gapkit::detail {

GapEval evaluate_gap(const Potential& V) {
    GapEval out;
    out.sols = shoot_eigenvalues(CoefficientP::constant(1.0), V, BoundaryConditions::dirichlet(), 2);
    out.lambda1 = out.sols[0].lambda;
    out.lambda2 = out.sols[1].lambda;
    out.gamma = out.lambda2 - out.lambda1;
    return out;
}

double gap_only(const Potential& V) {
    SolverOptions opts;
    opts.eigenfunctions = false;
    const auto sols = shoot_eigenvalues(CoefficientP::constant(1.0), PotentialField(V),
                                        BoundaryConditions::dirichlet(), 2, opts);
    return sols[1].lambda - sols[0].lambda;
}

using Gauss = boost::math::quadrature::gauss<double, 5>;

DensityIntegrals::DensityIntegrals(const EigenSolution& u1, const EigenSolution& u2)
    : s1_(&u1), s2_(&u2), i1_(u1, CoefficientP::constant(1.0)), i2_(u2, CoefficientP::constant(1.0)) {
    const std::size_t n = u1.x.size();
    cum0_.assign(n, 0.0);
    cum1_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cum0_[i + 1] = cum0_[i] + partial(u1.x[i], u1.x[i + 1], 1.0, 0.0);
        cum1_[i + 1] = cum1_[i] + partial(u1.x[i], u1.x[i + 1], 0.0, 1.0);
    }
}

double DensityIntegrals::partial(double a, double b, double c0, double c1) const {
    if (b <= a) return 0.0;
    return Gauss::integrate(
        [&](double x) {
            const double p = i1_.value(x);
            const double q = i2_.value(x);
            return (q * q - p * p) * (c0 + c1 * x);
        },
        a, b);
}

double DensityIntegrals::prefix(const std::vector<double>& cum, double x, double c0, double c1,
                                int which) const {
    const auto& xs = s1_->x;
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = static_cast<std::size_t>(std::distance(xs.begin(), it));
    i = std::clamp<std::size_t>(i, 1, xs.size() - 1) - 1;
    const double head = which == 0 ? c0 * cum[i] : c1 * cum[i];
    return head + partial(xs[i], x, which == 0 ? c0 : 0.0, which == 1 ? c1 : 0.0);
}

double DensityIntegrals::linear(double a, double b, double c0, double c1) const {
    if (b <= a) return 0.0;
    double total = 0.0;
    if (c0 != 0.0) total += prefix(cum0_, b, c0, 0.0, 0) - prefix(cum0_, a, c0, 0.0, 0);
    if (c1 != 0.0) total += prefix(cum1_, b, 0.0, c1, 1) - prefix(cum1_, a, 0.0, c1, 1);
    return total;
}

void isotonic_increasing(std::vector<double>& v) {
    struct Block {
        double sum;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (double x : v) {
        blocks.push_back({x, 1});
        while (blocks.size() > 1) {
            const Block& b = blocks.back();
            const Block& a = blocks[blocks.size() - 2];
            if (a.sum / a.count <= b.sum / b.count) break;
            const Block merged{a.sum + b.sum, a.count + b.count};
            blocks.pop_back();
            blocks.back() = merged;
        }
    }
    std::size_t k = 0;
    for (const Block& b : blocks) {
        for (std::size_t j = 0; j < b.count; ++j) v[k++] = b.sum / b.count;
    }
}

void isotonic_decreasing(std::vector<double>& v) {
    std::reverse(v.begin(), v.end());
    isotonic_increasing(v);
    std::reverse(v.begin(), v.end());
}

}  // namespace gapkit::detail
