#pragma once

#include <functional>
#include <vector>

namespace gapkit {

/// Leading coefficient p(x) of -(p u')' + V u, uniformly positive on [0, pi].
class CoefficientP {
public:
    /// p(x) = value.
    static CoefficientP constant(double value = 1.0);
    /// p(x) = p0 + slope * x.
    static CoefficientP affine(double p0, double slope);
    /// Arbitrary smooth p. The lower bound is estimated on a dense sample.
    static CoefficientP function(std::function<double(double)> p);

    double operator()(double x) const { return fn_(x); }

    bool is_constant() const { return constant_; }
    double p_min() const { return p_min_; }
    double p_max() const { return p_max_; }

    /// p(pi - x).
    CoefficientP reflected() const;

private:
    CoefficientP(std::function<double(double)> fn, bool constant);

    std::function<double(double)> fn_;
    bool constant_ = true;
    double p_min_ = 1.0;
    double p_max_ = 1.0;
};

}  // namespace gapkit
