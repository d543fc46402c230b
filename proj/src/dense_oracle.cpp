#include <algorithm>
#include <cmath>
#include <vector>

#include <lapacke.h>

#include "gapkit/error.hpp"
#include "gapkit/solver.hpp"

namespace gapkit {

namespace {

constexpr int kMinPanelsPerSegment = 16;

std::vector<double> oracle_nodes(const Potential& flat, int grid_size, int refinement) {
    const auto b = flat.breakpoints();
    std::vector<double> x{0.0};
    for (std::size_t s = 0; s + 1 < b.size(); ++s) {
        const double len = b[s + 1] - b[s];
        const int base = std::max(kMinPanelsPerSegment,
                                  static_cast<int>(std::lround(grid_size * len / kPi)));
        const int n = base * refinement;
        for (int j = 1; j <= n; ++j) x.push_back(j == n ? b[s + 1] : b[s] + len * j / n);
    }
    x.back() = kPi;
    return x;
}

}  // namespace

std::vector<EigenSolution> dense_oracle(const CoefficientP& p, const Potential& V,
                                        const BoundaryConditions& bc, int k, int grid_size,
                                        int refinement) {
    if (grid_size < 64) fail(ErrorKind::InvalidArgument, "dense oracle needs grid_size >= 64");
    if (k < 1 || refinement < 1) fail(ErrorKind::InvalidArgument, "k and refinement must be positive");
    const Potential flat = V.flattened();
    const std::vector<double> x = oracle_nodes(flat, grid_size, refinement);
    const int panels = static_cast<int>(x.size()) - 1;
    if (8 * k > panels) fail(ErrorKind::InvalidArgument, "grid too coarse for the requested k");

    std::vector<double> h(panels), pm(panels);
    for (int i = 0; i < panels; ++i) {
        h[i] = x[i + 1] - x[i];
        pm[i] = p(0.5 * (x[i] + x[i + 1]));
    }
    // One-sided limits of V at each node, taken from the adjacent panels.
    auto v_in = [&](int i, bool right_side) {
        const double a = right_side ? x[i] : x[i - 1];
        const double c = right_side ? x[i + 1] : x[i];
        const double t = right_side ? 0.25 : 0.75;
        const double probe = a + t * (c - a);
        // Linear within the panel, so extrapolate from two interior probes.
        const double v1 = flat.evaluate(probe);
        const double v2 = flat.evaluate(0.5 * (a + c));
        return 2.0 * v1 - v2;
    };

    const bool dir0 = bc.alpha == 0.0;
    const bool dirpi = bc.beta == 0.0;
    const int first = dir0 ? 1 : 0;
    const int last = dirpi ? panels - 1 : panels;
    const int n = last - first + 1;

    std::vector<double> A(n), E(std::max(n - 1, 1)), B(n);
    for (int i = first; i <= last; ++i) {
        double diag = 0.0;
        double mass = 0.0;
        double pot = 0.0;
        if (i > 0) {
            diag += pm[i - 1] / h[i - 1];
            mass += 0.5 * h[i - 1];
            pot += 0.5 * h[i - 1] * v_in(i, false);
        }
        if (i < panels) {
            diag += pm[i] / h[i];
            mass += 0.5 * h[i];
            pot += 0.5 * h[i] * v_in(i, true);
        }
        if (i == 0) diag += std::cos(bc.alpha) / std::sin(bc.alpha);
        if (i == panels) diag -= std::cos(bc.beta) / std::sin(bc.beta);
        A[i - first] = diag + pot;
        B[i - first] = mass;
        if (i < last) E[i - first] = -pm[i] / h[i];
    }
    std::vector<double> d(n), e(std::max(n - 1, 1));
    for (int i = 0; i < n; ++i) d[i] = A[i] / B[i];
    for (int i = 0; i + 1 < n; ++i) e[i] = E[i] / std::sqrt(B[i] * B[i + 1]);

    int found = 0;
    std::vector<double> w(n), z(static_cast<std::size_t>(n) * k);
    std::vector<lapack_int> ifail(n);
    const lapack_int info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0,
                                           0.0, 1, k, 2.0 * LAPACKE_dlamch('S'), &found, w.data(),
                                           z.data(), n, ifail.data());
    if (info != 0 || found != k) fail(ErrorKind::Convergence, "tridiagonal eigensolver failed");

    std::vector<EigenSolution> out(k);
    for (int j = 0; j < k; ++j) {
        EigenSolution& sol = out[j];
        sol.index = j + 1;
        sol.lambda = w[j];
        sol.x = x;
        sol.u.assign(panels + 1, 0.0);
        for (int i = 0; i < n; ++i) sol.u[i + first] = z[static_cast<std::size_t>(j) * n + i] / std::sqrt(B[i]);
        double umax = 0.0;
        for (double v : sol.u) umax = std::max(umax, std::abs(v));
        double orient = 1.0;
        for (double v : sol.u) {
            if (std::abs(v) > 1e-6 * umax) {
                orient = v > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (double& v : sol.u) v *= orient;
        sol.pu.assign(panels + 1, 0.0);
        for (int i = 0; i <= panels; ++i) {
            const int a = std::max(i - 1, 0);
            const int c = std::min(i + 1, panels);
            sol.pu[i] = p(x[i]) * (sol.u[c] - sol.u[a]) / (x[c] - x[a]);
        }
        sol.sup_norm = umax;
        sol.sign_changes = count_sign_changes(sol.u, 1e-8);
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += B[i] * sol.u[i + first] * sol.u[i + first];
        sol.norm = norm;
    }
    for (int j = 1; j < k; ++j) {
        if (std::abs(w[j] - w[j - 1]) <= 1e-12 * std::max(1.0, std::abs(w[j]))) {
            out[j - 1].degenerate = out[j].degenerate = true;
        }
    }
    return out;
}

std::vector<double> dense_oracle_extrapolated(const CoefficientP& p, const Potential& V,
                                              const BoundaryConditions& bc, int k, int grid_size) {
    const auto coarse = dense_oracle(p, V, bc, k, grid_size, 1);
    const auto fine = dense_oracle(p, V, bc, k, grid_size, 2);
    std::vector<double> out(k);
    for (int j = 0; j < k; ++j) out[j] = (4.0 * fine[j].lambda - coarse[j].lambda) / 3.0;
    return out;
}

}  // namespace gapkit
