#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "gapkit/potential.hpp"

namespace gapkit::testing {

inline double uniform(std::mt19937_64& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int a, int b) {
    return std::uniform_int_distribution<int>(a, b)(rng);
}

/// Sorted interior breakpoints at least `gap` apart, plus 0 and pi.
inline std::vector<double> random_breakpoints(std::mt19937_64& rng, int cells, double gap = 1e-3) {
    std::vector<double> inner;
    for (int i = 1; i < cells; ++i) inner.push_back(uniform(rng, 0.02, kPi - 0.02));
    std::sort(inner.begin(), inner.end());
    std::vector<double> b{0.0};
    for (double x : inner) {
        if (x - b.back() > gap) b.push_back(x);
    }
    b.push_back(kPi);
    return b;
}

/// Values in [0, M]: nonincreasing up to index j, nondecreasing after.
inline std::vector<double> single_well_values(std::mt19937_64& rng, int count, double M) {
    const int j = uniform_int(rng, 0, count - 1);
    std::vector<double> v(count);
    v[j] = uniform(rng, 0.0, M) * uniform(rng, 0.0, 1.0);
    for (int i = j - 1; i >= 0; --i) v[i] = v[i + 1] + (M - v[i + 1]) * uniform(rng, 0.0, 1.0);
    for (int i = j + 1; i < count; ++i) v[i] = v[i - 1] + (M - v[i - 1]) * uniform(rng, 0.0, 1.0);
    for (double& x : v) x = std::min(x, M);
    return v;
}

/// Random single-well potential with at most `max_cells` cells, piecewise
/// constant or continuous piecewise linear, bounded by M.
inline Potential random_single_well(std::mt19937_64& rng, double M, int max_cells) {
    const std::vector<double> b = random_breakpoints(rng, uniform_int(rng, 2, max_cells));
    const int cells = static_cast<int>(b.size()) - 1;
    if (uniform(rng, 0.0, 1.0) < 0.5) {
        return Potential::piecewise_constant(b, single_well_values(rng, cells, M), PotentialClass::SingleWell)
            .with_tag(PotentialClass::SingleWell, M);
    }
    return Potential::piecewise_linear(b, single_well_values(rng, cells + 1, M), PotentialClass::SingleWell)
        .with_tag(PotentialClass::SingleWell, M);
}

/// Convex continuous piecewise linear potential with values in [0, M].
inline Potential random_convex(std::mt19937_64& rng, double M, int max_cells) {
    const std::vector<double> b = random_breakpoints(rng, uniform_int(rng, 2, max_cells), 0.05);
    std::vector<double> slopes;
    double s = uniform(rng, -3.0, 3.0);
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        slopes.push_back(s);
        s += uniform(rng, 0.0, 2.0);
    }
    std::vector<double> v{0.0};
    for (std::size_t i = 0; i + 1 < b.size(); ++i) v.push_back(v.back() + slopes[i] * (b[i + 1] - b[i]));
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    const double scale = hi - lo > M ? M / (hi - lo) : 1.0;
    for (double& x : v) x = std::clamp((x - lo) * scale, 0.0, M);
    return Potential::piecewise_linear(b, v, PotentialClass::Convex).with_tag(PotentialClass::Convex, M);
}

/// Arbitrary bounded piecewise constant potential (no shape constraint).
inline Potential random_piecewise(std::mt19937_64& rng, double M, int max_cells) {
    const std::vector<double> b = random_breakpoints(rng, uniform_int(rng, 1, max_cells));
    std::vector<double> v;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) v.push_back(uniform(rng, 0.0, M));
    return Potential::piecewise_constant(b, v);
}

}  // namespace gapkit::testing
