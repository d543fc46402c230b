#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "gapkit/error.hpp"
#include "gapkit/optimizer.hpp"
#include "optim_common.hpp"

namespace gapkit {

namespace {

struct GridProblem {
    double M;
    int n;
    std::vector<double> bps;
    std::shared_ptr<const Potential> background;
    int sign;

    Potential build(const std::vector<double>& h) const {
        std::vector<Segment> segs;
        segs.reserve(h.size());
        for (double v : h) segs.push_back({v, v});
        return Potential(bps, std::move(segs), PotentialClass::None, M, background, sign);
    }

    // Projection onto {nonincreasing on 0..j, nondecreasing on j+1..n-1} within [0, M].
    void project(std::vector<double>& h, int j) const {
        std::vector<double> left(h.begin(), h.begin() + j + 1);
        std::vector<double> right(h.begin() + j + 1, h.end());
        detail::isotonic_decreasing(left);
        detail::isotonic_increasing(right);
        std::copy(left.begin(), left.end(), h.begin());
        std::copy(right.begin(), right.end(), h.begin() + j + 1);
        for (double& v : h) v = std::clamp(v, 0.0, M);
    }

    double value(const std::vector<double>& h, std::vector<double>* grad) const {
        const Potential V = build(h);
        if (!grad) return detail::gap_only(V);
        const detail::GapEval e = detail::evaluate_gap(V);
        const detail::DensityIntegrals d(e.sols[0], e.sols[1]);
        grad->resize(h.size());
        for (int i = 0; i < n; ++i) (*grad)[i] = sign * d.plain(bps[i], bps[i + 1]);
        return e.gamma;
    }
};

struct RunResult {
    std::vector<double> h;
    double gamma = 0.0;
    int iterations = 0;
    bool converged = false;
};

RunResult projected_gradient(const GridProblem& pb, std::vector<double> h, int j, double tol,
                             int max_iter) {
    pb.project(h, j);
    std::vector<double> g;
    double f = pb.value(h, &g);
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    double t = gmax > 0.0 ? 0.25 * std::max(pb.M, 1.0) / gmax : 1.0;
    RunResult out;
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        bool accepted = false;
        std::vector<double> trial(h.size());
        double ft = f;
        double moved = 0.0;
        for (int bt = 0; bt < 40; ++bt) {
            for (std::size_t i = 0; i < h.size(); ++i) trial[i] = h[i] - t * g[i];
            pb.project(trial, j);
            double descent = 0.0;
            moved = 0.0;
            for (std::size_t i = 0; i < h.size(); ++i) {
                descent += g[i] * (trial[i] - h[i]);
                moved = std::max(moved, std::abs(trial[i] - h[i]));
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
        const double df = f - ft;
        h = trial;
        f = pb.value(h, &g);
        t *= 2.0;
        if (moved <= tol * std::max(1.0, pb.M) || df <= 1e-12) {
            out.converged = true;
            break;
        }
    }
    out.h = h;
    out.gamma = f;
    return out;
}

}  // namespace

MinimizerReport minimize_single_well_grid(double M, int n_cells, const std::optional<Potential>& V0,
                                          int sign, double tol, int max_iter) {
    if (n_cells < 4) fail(ErrorKind::InvalidArgument, "grid search needs at least 4 cells");
    if (!(M >= 0.0) || !std::isfinite(M)) fail(ErrorKind::InvalidArgument, "M must be finite and >= 0");
    if (sign != 1 && sign != -1) fail(ErrorKind::InvalidArgument, "sign must be +1 or -1");

    GridProblem pb{M, n_cells, {}, nullptr, sign};
    for (int i = 0; i <= n_cells; ++i) pb.bps.push_back(kPi * i / n_cells);
    if (V0) pb.background = std::make_shared<const Potential>(*V0);

    MinimizerReport rep;
    rep.cls = MinimizerClass::SingleWellGrid;
    rep.M = M;
    rep.exploratory = sign < 0;
    if (sign < 0) rep.notes.push_back("sign = -1: exploratory, no characterisation applies");

    struct Seed {
        std::vector<double> h;
        int j;
        double gamma;
    };
    std::vector<Seed> seeds;
    const int n = n_cells;
    for (int k = 1; k < n; ++k) {
        std::vector<double> left(n, 0.0);
        std::vector<double> right(n, 0.0);
        for (int i = 0; i < n; ++i) (i >= k ? left : right)[i] = M;
        seeds.push_back({left, 0, 0.0});
        seeds.push_back({right, n - 2, 0.0});
    }
    for (int j : {n / 4, n / 2, 3 * n / 4}) {
        std::vector<double> vee(n);
        for (int i = 0; i < n; ++i) vee[i] = std::min(M, M * std::abs(i - j - 0.5) / (0.5 * n));
        seeds.push_back({vee, j, 0.0});
    }
    seeds.push_back({std::vector<double>(n, 0.5 * M), n / 2, 0.0});
    for (Seed& s : seeds) {
        pb.project(s.h, s.j);
        s.gamma = pb.value(s.h, nullptr);
    }
    std::stable_sort(seeds.begin(), seeds.end(),
                     [](const Seed& a, const Seed& b) { return a.gamma < b.gamma; });

    // The best seeds of each kind, a handful in total.
    std::vector<const Seed*> chosen;
    for (const Seed& s : seeds) {
        if (chosen.size() >= 6) break;
        chosen.push_back(&s);
    }
    auto add_best_with = [&](int j) {
        for (const Seed& s : seeds) {
            if (s.j == j) {
                if (std::find(chosen.begin(), chosen.end(), &s) == chosen.end()) chosen.push_back(&s);
                return;
            }
        }
    };
    add_best_with(0);
    add_best_with(n - 2);
    add_best_with(n / 2);

    RunResult best;
    best.gamma = std::numeric_limits<double>::infinity();
    int best_j = 0;
    int total_iter = 0;
    bool all_converged = true;
    for (const Seed* s : chosen) {
        RunResult r = projected_gradient(pb, s->h, s->j, tol, max_iter);
        total_iter += r.iterations;
        all_converged = all_converged && r.converged;
        if (r.gamma < best.gamma) {
            best = r;
            best_j = s->j;
        }
    }

    const Potential V = pb.build(best.h).with_tag(PotentialClass::SingleWell, M);
    const detail::GapEval e = detail::evaluate_gap(V);
    rep.gamma_star = e.gamma;
    rep.lambda1 = e.lambda1;
    rep.lambda2 = e.lambda2;
    rep.parameters = best.h;
    rep.transition_index = best_j;
    rep.iterations = total_iter;
    rep.converged = best.converged;
    if (!all_converged) rep.notes.push_back("some starts hit the iteration limit");
    rep.potential = V;

    // Nearest end-supported step in L1, scanning both orientations.
    const Potential Vbare = pb.build(best.h).with_background(nullptr, 1);
    auto dist = [&](double x, StepSide side) {
        return l1_distance(Vbare, StepPotential(M, x, side).to_potential());
    };
    rep.l1_to_step = std::numeric_limits<double>::infinity();
    if (M > 0.0) {
        const int samples = 64 * n;
        for (StepSide side : {StepSide::Left, StepSide::Right}) {
            for (int i = 1; i < samples; ++i) {
                const double x = kPi * i / samples;
                const double d = dist(x, side);
                if (d < rep.l1_to_step) {
                    rep.l1_to_step = d;
                    rep.nearest_step_x = x;
                }
            }
        }
    } else {
        rep.l1_to_step = 0.0;
    }
    if (M > 0.0) rep.first_order = verify_first_order(V, PotentialClass::SingleWell);
    return rep;
}

}  // namespace gapkit
