#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "gapkit/error.hpp"
#include "gapkit/optimizer.hpp"
#include "gapkit/step.hpp"

namespace gapkit {

std::string to_string(MinimizerClass cls) {
    switch (cls) {
    case MinimizerClass::StepFamily: return "step-family";
    case MinimizerClass::SingleWellGrid: return "single-well-grid";
    case MinimizerClass::ConvexPL: return "convex-pl";
    }
    return "unknown";
}

namespace {

double step_gap(double M, double x) {
    const auto ev = step_eigenvalues(M, x, 2);
    return ev[1].lambda - ev[0].lambda;
}

std::vector<double> scan_points(double M) {
    std::vector<double> xs;
    const int n_uniform = 400;
    for (int i = 1; i < n_uniform; ++i) xs.push_back(kPi * i / n_uniform);
    // Geometric points resolve the boundary layer pi / (2 sqrt(M)) at large M.
    const double lo = std::min(1e-3, 0.05 / std::sqrt(M + 1.0));
    const int n_geo = 240;
    for (int i = 0; i <= n_geo; ++i) xs.push_back(lo * std::pow(kPi / 2 / lo, double(i) / n_geo));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             xs.end());
    return xs;
}

}  // namespace

MinimizerReport minimize_step_family(double M, double tol) {
    if (!(M > 0.0) || !std::isfinite(M)) fail(ErrorKind::InvalidArgument, "step family needs M > 0");
    MinimizerReport rep;
    rep.cls = MinimizerClass::StepFamily;
    rep.M = M;

    const std::vector<double> xs = scan_points(M);
    std::vector<double> g(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) g[i] = step_gap(M, xs[i]);

    auto f = [M](double x) { return step_gap(M, x); };
    std::vector<LocalMinimum> minima;
    int iterations = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const bool left_ok = i == 0 || g[i] <= g[i - 1];
        const bool right_ok = i + 1 == xs.size() || g[i] <= g[i + 1];
        if (!left_ok || !right_ok) continue;
        LocalMinimum m{xs[i], g[i]};
        if (i > 0 && i + 1 < xs.size()) {
            std::uintmax_t it = 200;
            const auto r = boost::math::tools::brent_find_minima(f, xs[i - 1], xs[i + 1],
                                                                 std::numeric_limits<double>::digits / 2, it);
            iterations += static_cast<int>(it);
            if (r.second <= m.gamma) m = {r.first, r.second};
            // dGamma/dx = -M (u2^2 - u1^2)(x): polish on the stationarity root,
            // which is far better conditioned than the flat gap itself.
            auto s = [M](double x) { return step_stationarity(M, x); };
            const double sa = s(xs[i - 1]);
            const double sb = s(xs[i + 1]);
            if (sa > 0.0 && sb < 0.0) {
                std::uintmax_t it2 = 200;
                const auto root = boost::math::tools::toms748_solve(
                    s, xs[i - 1], xs[i + 1], sa, sb, boost::math::tools::eps_tolerance<double>(50), it2);
                iterations += static_cast<int>(it2);
                const double xr = 0.5 * (root.first + root.second);
                const double gr = f(xr);
                if (gr <= m.gamma + 1e-9 * std::max(1.0, M) * 1e-6) m = {xr, std::min(gr, m.gamma)};
            }
        }
        const bool duplicate = std::any_of(minima.begin(), minima.end(), [&](const LocalMinimum& o) {
            return std::abs(o.x_minus - m.x_minus) < 1e-6 * std::max(1.0, m.x_minus) &&
                   std::abs(o.gamma - m.gamma) < 1e-9;
        });
        if (!duplicate) minima.push_back(m);
    }
    if (minima.empty()) fail(ErrorKind::Convergence, "step scan found no local minimum");
    std::sort(minima.begin(), minima.end(),
              [](const LocalMinimum& a, const LocalMinimum& b) { return a.gamma < b.gamma; });

    const LocalMinimum best = minima.front();
    rep.local_minima = minima;
    rep.iterations = iterations;
    rep.x_minus_star = best.x_minus;
    rep.reflected_x_minus = kPi - best.x_minus;
    rep.parameters = {best.x_minus};
    const auto ev = step_eigenvalues(M, best.x_minus, 2);
    rep.lambda1 = ev[0].lambda;
    rep.lambda2 = ev[1].lambda;
    rep.gamma_star = rep.lambda2 - rep.lambda1;
    rep.stationarity = step_stationarity(M, best.x_minus);
    rep.potential = StepPotential(M, best.x_minus, StepSide::Left).to_potential();
    rep.at_domain_boundary = best.x_minus <= xs.front() || best.x_minus >= xs.back();
    rep.converged = !rep.at_domain_boundary && tol > 0.0;

    rep.x_lower_bound_ok = best.x_minus >= kPi / (2.0 * std::sqrt(M));
    rep.x_upper_bound_ok = M > 2.0 && best.x_minus <= kPi / std::sqrt(M - 2.0);
    rep.lambda2_bounds_ok = M + 1.0 < rep.lambda2 && rep.lambda2 < M + 4.0;
    rep.lambda1_bounds_ok = M - 2.0 < rep.lambda1 && rep.lambda1 < M + 1.0;
    rep.lambda1_below_M = rep.lambda1 < M;
    if (rep.at_domain_boundary) rep.notes.push_back("minimiser on the edge of the scanned range");
    if (minima.size() > 1) {
        rep.notes.push_back(std::to_string(minima.size()) + " distinct local minimisers found");
    }
    rep.notes.push_back("RIGHT twin at x = pi - x_minus_star has the same gap");
    return rep;
}

double degenerate_step_location(double M) {
    if (!(M > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double k = std::sqrt(M);
    const double a = kPi / (2.0 * k);
    const double b = std::min(kPi / k, kPi);
    if (!(a < b)) return std::numeric_limits<double>::quiet_NaN();
    auto g = [k](double x) { return std::sin(k * x) + k * (kPi - x) * std::cos(k * x); };
    const double ga = g(a);
    const double gb = g(b);
    if (ga == 0.0) return a;
    if ((ga > 0.0) == (gb > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    std::uintmax_t it = 200;
    const auto r = boost::math::tools::toms748_solve(g, a, b, ga, gb,
                                                     boost::math::tools::eps_tolerance<double>(50), it);
    return 0.5 * (r.first + r.second);
}

DegenerateScan degenerate_branch_scan(const std::vector<double>& M_grid) {
    DegenerateScan out;
    for (double M : M_grid) {
        const MinimizerReport rep = minimize_step_family(M);
        DegenerateScanRow row;
        row.M = M;
        row.x_minus_star = rep.x_minus_star;
        row.lambda1_minus_M = rep.lambda1 - M;
        row.x_degenerate = degenerate_step_location(M);
        row.printed_form_at_x = std::isnan(row.x_degenerate)
                                    ? std::numeric_limits<double>::quiet_NaN()
                                    : degenerate_condition_printed(M, row.x_degenerate);
        out.rows.push_back(row);
    }
    out.threshold = std::numeric_limits<double>::quiet_NaN();
    if (out.rows.empty()) return out;
    const double scale = 1e-9;
    auto sign_of = [&](const DegenerateScanRow& r) {
        const double s = scale * std::max(1.0, r.M);
        return r.lambda1_minus_M > s ? 1 : (r.lambda1_minus_M < -s ? -1 : 0);
    };
    const int last = sign_of(out.rows.back());
    if (last == 0) return out;
    std::size_t first = out.rows.size() - 1;
    while (first > 0 && sign_of(out.rows[first - 1]) == last) --first;
    out.threshold = out.rows[first].M;
    return out;
}

}  // namespace gapkit
