#include "gapkit/coefficient.hpp"

#include <algorithm>
#include <cmath>

#include "gapkit/error.hpp"
#include "gapkit/potential.hpp"

namespace gapkit {

CoefficientP::CoefficientP(std::function<double(double)> fn, bool constant)
    : fn_(std::move(fn)), constant_(constant) {
    constexpr int kSamples = 2048;
    p_min_ = fn_(0.0);
    p_max_ = p_min_;
    for (int i = 1; i <= kSamples; ++i) {
        const double v = fn_(kPi * i / kSamples);
        if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "p must be finite on [0, pi]");
        p_min_ = std::min(p_min_, v);
        p_max_ = std::max(p_max_, v);
    }
    if (!(p_min_ > 0.0)) fail(ErrorKind::InvalidArgument, "p must be uniformly positive");
}

CoefficientP CoefficientP::constant(double value) {
    return CoefficientP([value](double) { return value; }, true);
}

CoefficientP CoefficientP::affine(double p0, double slope) {
    if (slope == 0.0) return constant(p0);
    return CoefficientP([p0, slope](double x) { return p0 + slope * x; }, false);
}

CoefficientP CoefficientP::function(std::function<double(double)> p) {
    return CoefficientP(std::move(p), false);
}

CoefficientP CoefficientP::reflected() const {
    if (constant_) return *this;
    auto f = fn_;
    return CoefficientP([f](double x) { return f(kPi - x); }, false);
}

}  // namespace gapkit
