#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <boost/math/tools/minima.hpp>

#include "gapkit/error.hpp"
#include "gapkit/optimizer.hpp"
#include "optim_common.hpp"

namespace gapkit {

namespace {

// theta = (m, alpha_1 .. alpha_{n-1}); V1 = m x + sum alpha_k (x - x_k)_+ shifted to min 0.
struct ConvexProblem {
    double M;
    int n;
    std::vector<double> knots;  // 0, pi/n, ..., pi
    std::shared_ptr<const Potential> background;

    std::vector<double> shape(const std::vector<double>& th) const {
        std::vector<double> f(n + 1);
        for (int i = 0; i <= n; ++i) {
            double v = th[0] * knots[i];
            for (int k = 1; k < n; ++k) v += th[k] * std::max(0.0, knots[i] - knots[k]);
            f[i] = v;
        }
        const double lo = *std::min_element(f.begin(), f.end());
        for (double& v : f) v -= lo;
        return f;
    }

    Potential build(const std::vector<double>& th) const {
        std::vector<double> f = shape(th);
        for (double& v : f) v = std::clamp(v, 0.0, M);
        std::vector<Segment> segs;
        for (int i = 0; i < n; ++i) segs.push_back({f[i], f[i + 1]});
        return Potential(knots, std::move(segs), PotentialClass::None, M, background, 1);
    }

    void project(std::vector<double>& th) const {
        for (int k = 1; k < n; ++k) th[k] = std::max(th[k], 0.0);
        const std::vector<double> f = shape(th);
        const double range = *std::max_element(f.begin(), f.end());
        if (range > M) {
            const double s = range > 0.0 ? M / range : 0.0;
            for (double& v : th) v *= s;
        }
    }

    double value(const std::vector<double>& th, std::vector<double>* grad) const {
        const Potential V = build(th);
        if (!grad) return detail::gap_only(V);
        const detail::GapEval e = detail::evaluate_gap(V);
        const detail::DensityIntegrals d(e.sols[0], e.sols[1]);
        grad->assign(n, 0.0);
        (*grad)[0] = d.linear(0.0, kPi, 0.0, 1.0);
        for (int k = 1; k < n; ++k) (*grad)[k] = d.linear(knots[k], kPi, -knots[k], 1.0);
        return e.gamma;
    }
};

struct RunResult {
    std::vector<double> th;
    double gamma = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Projected Barzilai-Borwein with Armijo backtracking.
RunResult projected_bb(const ConvexProblem& pb, std::vector<double> th, double tol, int max_iter) {
    pb.project(th);
    std::vector<double> g;
    double f = pb.value(th, &g);
    double gnorm = 0.0;
    for (double v : g) gnorm = std::max(gnorm, std::abs(v));
    double t = gnorm > 0.0 ? 0.1 * std::max(1.0, pb.M) / (kPi * gnorm) : 1.0;
    RunResult out;
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        std::vector<double> trial(th.size());
        double ft = f;
        bool accepted = false;
        double moved = 0.0;
        for (int bt = 0; bt < 40; ++bt) {
            for (std::size_t i = 0; i < th.size(); ++i) trial[i] = th[i] - t * g[i];
            pb.project(trial);
            double descent = 0.0;
            moved = 0.0;
            for (std::size_t i = 0; i < th.size(); ++i) {
                descent += g[i] * (trial[i] - th[i]);
                moved = std::max(moved, std::abs(trial[i] - th[i]));
            }
            if (moved == 0.0) break;
            ft = pb.value(trial, nullptr);
            if (ft <= f + 1e-4 * descent) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            out.converged = true;
            break;
        }
        std::vector<double> g_new;
        const double f_new = pb.value(trial, &g_new);
        double ss = 0.0;
        double sy = 0.0;
        for (std::size_t i = 0; i < th.size(); ++i) {
            const double s = trial[i] - th[i];
            ss += s * s;
            sy += s * (g_new[i] - g[i]);
        }
        const double df = f - f_new;
        th = std::move(trial);
        g = std::move(g_new);
        f = f_new;
        t = sy > 0.0 ? ss / sy : 2.0 * t;
        if (moved <= tol || df <= 1e-13) {
            out.converged = true;
            break;
        }
    }
    out.th = th;
    out.gamma = f;
    return out;
}

}  // namespace

MinimizerReport minimize_convex_pl(double M, int n_cells, const std::optional<Potential>& V0, double tol,
                                   int max_iter) {
    if (n_cells < 3) fail(ErrorKind::InvalidArgument, "convex search needs at least 3 cells");
    if (!(M >= 0.0) || !std::isfinite(M)) fail(ErrorKind::InvalidArgument, "M must be finite and >= 0");

    ConvexProblem pb{M, n_cells, {}, nullptr};
    for (int i = 0; i <= n_cells; ++i) pb.knots.push_back(kPi * i / n_cells);
    pb.knots.back() = kPi;
    if (V0) pb.background = std::make_shared<const Potential>(*V0);

    MinimizerReport rep;
    rep.cls = MinimizerClass::ConvexPL;
    rep.M = M;

    const double m_max = M / kPi;
    std::vector<std::vector<double>> starts;
    for (double m : {0.0, -0.5 * m_max, 0.5 * m_max}) {
        std::vector<double> th(n_cells, 0.0);
        th[0] = m;
        starts.push_back(th);
    }
    {
        std::vector<double> vee(n_cells, 0.0);
        vee[0] = -0.5 * m_max;
        vee[n_cells / 2] = m_max;
        starts.push_back(vee);
    }

    RunResult best;
    best.gamma = std::numeric_limits<double>::infinity();
    int total_iter = 0;
    for (const auto& s : starts) {
        RunResult r = projected_bb(pb, s, tol, max_iter);
        total_iter += r.iterations;
        if (r.gamma < best.gamma) best = r;
    }

    double kink = 0.0;
    for (int k = 1; k < n_cells; ++k) kink = std::max(kink, best.th[k]);
    rep.max_kink = kink;
    rep.affine = kink < 1e-6 * std::max(1.0, M);

    if (rep.affine && M > 0.0) {
        // One-dimensional polish along the affine family.
        auto along = [&](double m) {
            std::vector<double> th(n_cells, 0.0);
            th[0] = m;
            return pb.value(th, nullptr);
        };
        std::uintmax_t it = 200;
        const auto r = boost::math::tools::brent_find_minima(along, -m_max, m_max,
                                                             std::numeric_limits<double>::digits / 2, it);
        total_iter += static_cast<int>(it);
        if (r.second <= best.gamma) {
            best.th.assign(n_cells, 0.0);
            best.th[0] = r.first;
            best.gamma = r.second;
        }
    }

    const Potential V = pb.build(best.th).with_tag(PotentialClass::Convex, M);
    const detail::GapEval e = detail::evaluate_gap(V);
    rep.gamma_star = e.gamma;
    rep.lambda1 = e.lambda1;
    rep.lambda2 = e.lambda2;
    rep.slope = best.th[0];
    rep.intercept = V.variable_part(0.0);
    rep.parameters = pb.shape(best.th);
    rep.iterations = total_iter;
    rep.converged = best.converged || rep.affine;
    rep.potential = V;
    if (M > 0.0) rep.first_order = verify_first_order(V, PotentialClass::Convex);
    return rep;
}

}  // namespace gapkit
