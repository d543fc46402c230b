#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "gapkit/error.hpp"
#include "gapkit/solver.hpp"

namespace gapkit {

EigenInterpolant::EigenInterpolant(const EigenSolution& sol, const CoefficientP& p) {
    const std::size_t n = sol.x.size();
    const std::size_t m = sol.knot_x.size();
    x_.reserve(n + m);
    u_.reserve(n + m);
    du_.reserve(n + m);
    std::size_t k = 0;
    auto push = [&](double x, double u, double pu) {
        x_.push_back(x);
        u_.push_back(u);
        du_.push_back(pu / p(x));
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (; k < m && sol.knot_x[k] < sol.x[i]; ++k) push(sol.knot_x[k], sol.knot_u[k], sol.knot_pu[k]);
        push(sol.x[i], sol.u[i], sol.pu[i]);
    }
}

namespace {

std::size_t cell_of(const std::vector<double>& x, double v) {
    auto it = std::upper_bound(x.begin(), x.end(), v);
    std::size_t i = static_cast<std::size_t>(std::distance(x.begin(), it));
    return std::clamp<std::size_t>(i, 1, x.size() - 1) - 1;
}

}  // namespace

double EigenInterpolant::value(double x) const {
    const std::size_t i = cell_of(x_, x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * u_[i] + (t3 - 2 * t2 + t) * h * du_[i] + (-2 * t3 + 3 * t2) * u_[i + 1] +
           (t3 - t2) * h * du_[i + 1];
}

double EigenInterpolant::derivative(double x) const {
    const std::size_t i = cell_of(x_, x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * u_[i] + (-6 * t2 + 6 * t) * u_[i + 1]) / h + (3 * t2 - 4 * t + 1) * du_[i] +
           (3 * t2 - 2 * t) * du_[i + 1];
}

namespace {

// Integral of dV * uA * uB, split at grid nodes and at breakpoints of dV.
double product_integral(const EigenSolution& a, const EigenSolution& b, const CoefficientP& p,
                        const Potential& dV) {
    if (a.x.size() != b.x.size()) fail(ErrorKind::InvalidArgument, "eigenfunctions on different grids");
    const EigenInterpolant ia(a, p);
    const EigenInterpolant ib(b, p);
    const Potential flat = dV.flattened();
    const std::vector<double> nodes = merge_breakpoints(a.x, a.knot_x);
    const std::vector<double> cuts = merge_breakpoints(nodes, flat.breakpoints());
    using Gauss = boost::math::quadrature::gauss<double, 5>;
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        total += Gauss::integrate(
            [&](double x) { return flat.evaluate(x) * ia.value(x) * ib.value(x); }, cuts[j],
            cuts[j + 1]);
    }
    return total;
}

// Bisection for a sign change of g between a and b.
template <class G>
double refine_root(G&& g, double a, double b) {
    double ga = g(a);
    for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if ((gm > 0.0) == (ga > 0.0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

Crossings crossing_points(const EigenSolution& sol1, const EigenSolution& sol2,
                          const CoefficientP& p) {
    const std::size_t n = sol1.x.size();
    if (n != sol2.x.size() || n < 3) fail(ErrorKind::InvalidArgument, "incompatible eigenfunction grids");
    const EigenInterpolant i1(sol1, p);
    const EigenInterpolant i2(sol2, p);

    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = sol2.u[i] * sol2.u[i] - sol1.u[i] * sol1.u[i];
    Crossings out;
    out.sign_changes = count_sign_changes(d);
    if (out.sign_changes > 2) {
        fail(ErrorKind::Convergence, "u2^2 - u1^2 changes sign " + std::to_string(out.sign_changes) +
                                         " times; at most two are possible");
    }

    double umax = 0.0;
    for (double v : sol2.u) umax = std::max(umax, std::abs(v));
    std::size_t last_pos = n;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (sol2.u[i] > 1e-10 * umax) last_pos = i;
        if (sol2.u[i] < -1e-10 * umax && last_pos != n) {
            out.x_zero = refine_root([&](double x) { return i2.value(x); }, sol2.x[last_pos], sol2.x[i]);
            break;
        }
    }

    double dmax = 0.0;
    for (double v : d) dmax = std::max(dmax, std::abs(v));
    const double floor = 1e-10 * dmax;
    auto dfun = [&](double x) {
        const double a = i1.value(x);
        const double b = i2.value(x);
        return b * b - a * a;
    };
    int last = 0;
    std::size_t last_i = 0;
    bool have_minus = false;
    out.x_minus = 0.0;
    out.x_plus = kPi;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(d[i]) <= floor) continue;
        const int s = d[i] > 0.0 ? 1 : -1;
        if (last != 0 && s != last) {
            const double root = refine_root(dfun, sol1.x[last_i], sol1.x[i]);
            if (s < 0 && !have_minus) {
                out.x_minus = root;
                have_minus = true;
            } else if (s > 0) {
                out.x_plus = root;
            }
        }
        last = s;
        last_i = i;
    }
    return out;
}

double feynman_hellmann(const EigenSolution& sol, const CoefficientP& p, const Potential& dV) {
    return product_integral(sol, sol, p, dV);
}

double feynman_hellmann(const EigenSolution& sol, const Potential& dV) {
    return feynman_hellmann(sol, CoefficientP::constant(1.0), dV);
}

GapResult gap(const CoefficientP& p, const Potential& V, const BoundaryConditions& bc, double tol) {
    const auto sols = shoot_eigenvalues(p, V, bc, 2, tol);
    GapResult out;
    out.lambda1 = sols[0].lambda;
    out.lambda2 = sols[1].lambda;
    out.gamma = out.lambda2 - out.lambda1;
    out.degenerate = sols[0].degenerate;
    try {
        const Crossings c = crossing_points(sols[0], sols[1], p);
        out.x_minus = c.x_minus;
        out.x_zero = c.x_zero;
        out.x_plus = c.x_plus;
        out.crossing_sign_changes = c.sign_changes;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Convergence) throw;
        out.x_minus = out.x_zero = out.x_plus = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> d(sols[0].u.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            d[i] = sols[1].u[i] * sols[1].u[i] - sols[0].u[i] * sols[0].u[i];
        }
        out.crossing_sign_changes = count_sign_changes(d);
    }
    return out;
}

double gap_derivative(const CoefficientP& p, const Potential& V, const Potential& P,
                      const BoundaryConditions& bc) {
    const Potential D = subtract(P, V);
    const auto sols = shoot_eigenvalues(p, V, bc, 3);
    const double d1 = product_integral(sols[0], sols[0], p, D);
    const double l2 = sols[1].lambda;
    const double l3 = sols[2].lambda;
    if (std::abs(l3 - l2) <= 1e-12 * std::max(1.0, std::abs(l2))) {
        const double a = product_integral(sols[1], sols[1], p, D);
        const double c = product_integral(sols[2], sols[2], p, D);
        const double b = product_integral(sols[1], sols[2], p, D);
        const double lower = 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
        return lower - d1;
    }
    return product_integral(sols[1], sols[1], p, D) - d1;
}

double gap_derivative(const Potential& V, const Potential& P) {
    return gap_derivative(CoefficientP::constant(1.0), V, P, BoundaryConditions::dirichlet());
}

Wronskian wronskian_diagnostic(const EigenSolution& sol1, const EigenSolution& sol2,
                               const CoefficientP& p) {
    const std::size_t n = sol1.x.size();
    if (n != sol2.x.size() || n < 3) fail(ErrorKind::InvalidArgument, "incompatible eigenfunction grids");
    Wronskian w;
    w.x = sol1.x;
    w.W.resize(n);
    for (std::size_t i = 0; i < n; ++i) w.W[i] = sol1.u[i] * sol2.pu[i] - sol2.u[i] * sol1.pu[i];
    w.W_left = w.W.front();
    w.W_right = w.W.back();

    // With W = u1 p u2' - u2 p u1' the equation gives W' = (l1 - l2) u1 u2 and
    // (u2/u1)' = W / (p u1^2).
    const double dl = sol2.lambda - sol1.lambda;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double dW = (w.W[i + 1] - w.W[i - 1]) / (w.x[i + 1] - w.x[i - 1]);
        w.identity_residual = std::max(w.identity_residual, std::abs(dW + dl * sol1.u[i] * sol2.u[i]));
    }

    double u1max = 0.0;
    for (double v : sol1.u) u1max = std::max(u1max, v);
    double x0 = kPi;
    for (std::size_t i = 1; i < n; ++i) {
        if (sol2.u[i - 1] > 0.0 && sol2.u[i] <= 0.0 && i + 1 < n) {
            x0 = w.x[i - 1];
            break;
        }
    }
    w.min_ratio_decrease = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < n && w.x[i] < x0; ++i) {
        if (sol1.u[i] < 1e-3 * u1max) continue;
        w.min_ratio_decrease = std::min(w.min_ratio_decrease, -w.W[i] / (p(w.x[i]) * sol1.u[i] * sol1.u[i]));
    }
    return w;
}

}  // namespace gapkit
