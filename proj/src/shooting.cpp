#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include "gapkit/error.hpp"
#include "gapkit/solver.hpp"
#include "prufer.hpp"

namespace gapkit {

namespace {

constexpr double kDegenerateRel = 1e-12;

// Lifted angle split into n*pi + f with f in [0, pi).
std::pair<double, double> split_angle(double phi) {
    const double n = std::floor(phi / kPi);
    double f = phi - n * kPi;
    if (f < 0.0) f = 0.0;
    if (f >= kPi) f = std::nextafter(kPi, 0.0);
    return {n, f};
}

}  // namespace

PruferShooter::PruferShooter(const CoefficientP& p, const PotentialField& V, const SolverOptions& opts)
    : p_(p), V_(V), opts_(opts) {
    if (V_.singular() && !(p_.is_constant() && p_(0.0) == 1.0)) {
        fail(ErrorKind::InvalidArgument, "singular potentials require p = 1");
    }
    // Integration cells: field pieces, with smooth pieces subdivided. A
    // singular first piece is split geometrically from the start offset.
    for (std::size_t i = 0; i < V_.pieces().size(); ++i) {
        const auto& piece = V_.pieces()[i];
        if (i == 0 && V_.singular()) {
            double a = opts_.singular_start;
            while (a < piece.x1) {
                const double b = std::min(2.0 * a, piece.x1);
                cells_.push_back({a, b, i});
                a = b;
            }
            continue;
        }
        if (piece.kind == PotentialField::Kind::Smooth && piece.x0 > 0.0 && piece.x1 > 32.0 * piece.x0) {
            // Smooth pieces that start close to 0 vary on the scale of x itself.
            double a = piece.x0;
            while (a < piece.x1) {
                const double b = std::min(2.0 * a, piece.x1);
                cells_.push_back({a, b, i});
                a = b;
            }
            continue;
        }
        int parts = 1;
        if (piece.kind == PotentialField::Kind::Smooth) parts = 16;
        if (piece.kind == PotentialField::Kind::Affine) {
            const double dv = std::abs(piece.v1 - piece.v0);
            parts = std::clamp(static_cast<int>(std::sqrt(dv) * (piece.x1 - piece.x0) / 4.0) + 1, 1, 64);
        }
        for (int j = 0; j < parts; ++j) {
            const double a = piece.x0 + (piece.x1 - piece.x0) * j / parts;
            const double b = j + 1 == parts ? piece.x1 : piece.x0 + (piece.x1 - piece.x0) * (j + 1) / parts;
            cells_.push_back({a, b, i});
        }
    }
    start_ = V_.singular() ? opts_.singular_start : 0.0;
}

PruferState PruferShooter::initial(double alpha, double lambda) const {
    if (!V_.singular()) return {alpha, 0.0};
    if (alpha != 0.0) fail(ErrorKind::InvalidArgument, "singular potentials require Dirichlet data at 0");
    const double c = V_.singular()->c;
    const double q = V_.singular()->q;
    const double d = start_;
    const double u = d + c * std::pow(d, 3.0 - q) / ((3.0 - q) * (2.0 - q)) - lambda * d * d * d / 6.0;
    const double du = 1.0 + c * std::pow(d, 2.0 - q) / (2.0 - q) - lambda * d * d / 2.0;
    return {std::atan2(u, du), std::log(std::hypot(u, du))};
}

void PruferShooter::advance(PruferState& s, double a, double b, double lambda) const {
    if (b <= a) return;
    auto it = std::upper_bound(cells_.begin(), cells_.end(), a,
                               [](double v, const Cell& c) { return v < c.x1; });
    for (; it != cells_.end() && it->x0 < b; ++it) {
        const double lo = std::max(a, it->x0);
        const double hi = std::min(b, it->x1);
        if (hi > lo) advance_cell(s, *it, lo, hi, lambda);
    }
}

void PruferShooter::advance_cell(PruferState& s, const Cell& cell, double a, double b,
                                 double lambda) const {
    const auto& piece = V_.pieces()[cell.piece];
    if (p_.is_constant() && piece.kind == PotentialField::Kind::Constant) {
        advance_exact(s, p_(a), lambda - piece.v0, b - a);
    } else {
        advance_rk(s, piece, a, b, lambda);
    }
}

void PruferShooter::advance_exact(PruferState& s, double p0, double q, double L) {
    const auto [n0, f] = split_angle(s.phi);
    const double u0 = std::sin(f);
    const double w0 = std::cos(f);

    if (q > 0.0) {
        const double omega = std::sqrt(q / p0);
        const double a = p0 * omega;
        if (omega * L >= kPi / 2) {
            // Long oscillatory cell: the phase of (u, p u' / a) advances linearly.
            const double psi0 = n0 * kPi + std::atan2(a * u0, w0);
            const double psi1 = psi0 + omega * L;
            const auto [n1, g] = split_angle(psi1);
            const double sg = std::sin(g);
            const double cg = std::cos(g);
            const double sp = std::sin(psi0 - n0 * kPi);
            const double cp = std::cos(psi0 - n0 * kPi);
            s.phi = n1 * kPi + std::atan2(sg, a * cg);
            s.lnrho += 0.5 * std::log((sg * sg + a * a * cg * cg) / (sp * sp + a * a * cp * cp));
            return;
        }
        const double c = std::cos(omega * L);
        const double sn = std::sin(omega * L);
        finish_short(s, n0, f, u0 * c + w0 * sn / a, -u0 * a * sn + w0 * c, 0.0);
        return;
    }
    if (q < 0.0) {
        const double kappa = std::sqrt(-q / p0);
        const double a = p0 * kappa;
        const double e = std::exp(-2.0 * kappa * L);
        const double ch = 0.5 * (1.0 + e);
        const double sh = 0.5 * (1.0 - e);
        finish_short(s, n0, f, u0 * ch + w0 * sh / a, u0 * a * sh + w0 * ch, kappa * L);
        return;
    }
    finish_short(s, n0, f, u0 + w0 * L / p0, w0, 0.0);
}

// At most one zero of u inside the cell: it occurred iff u changed sign.
void PruferShooter::finish_short(PruferState& s, double n0, double f, double u1, double w1,
                                 double lnscale) {
    if (u1 > 0.0 || (u1 == 0.0 && f == 0.0)) {
        s.phi = n0 * kPi + std::atan2(u1, w1);
    } else {
        s.phi = (n0 + 1.0) * kPi + std::atan2(-u1, -w1);
    }
    s.lnrho += lnscale + std::log(std::hypot(u1, w1));
}

void PruferShooter::advance_rk(PruferState& s, const PotentialField::Piece& piece, double a,
                               double b, double lambda) const {
    using namespace boost::numeric::odeint;
    using State = std::array<double, 2>;

    const double xm = 0.5 * (a + b);
    const double S = std::sqrt(p_(xm) * std::max(std::abs(lambda - piece.at(xm)), 1.0));

    const auto [n0, f] = split_angle(s.phi);
    const double sf = std::sin(f);
    const double cf = std::cos(f);
    State y{n0 * kPi + std::atan2(S * sf, cf), s.lnrho + std::log(std::hypot(S * sf, cf))};

    auto rhs = [&](const State& st, State& dy, double x) {
        const double px = p_(x);
        const double q = lambda - piece.at(x);
        const double sn = std::sin(st[0]);
        const double cs = std::cos(st[0]);
        dy[0] = (S / px) * cs * cs + (q / S) * sn * sn;
        dy[1] = (S / px - q / S) * sn * cs;
    };
    auto stepper = make_controlled(opts_.ode_tol, opts_.ode_tol, runge_kutta_fehlberg78<State>());
    integrate_adaptive(stepper, rhs, y, a, b, (b - a) / 4.0);

    const auto [n1, g] = split_angle(y[0]);
    const double sg = std::sin(g);
    const double cg = std::cos(g);
    s.phi = n1 * kPi + std::atan2(sg, S * cg);
    s.lnrho = y[1] + std::log(std::hypot(sg / S, cg));
}

double phase_target(double beta, int n) {
    const double b = beta > 0.0 ? beta : kPi;
    return b + (n - 1) * kPi;
}

double phase_mismatch(const CoefficientP& p, const PotentialField& V, const BoundaryConditions& bc,
                      int n, double lambda, const SolverOptions& opts) {
    const PruferShooter shooter(p, V, opts);
    PruferState s = shooter.initial(bc.alpha, lambda);
    shooter.advance(s, shooter.start(), kPi, lambda);
    return s.phi - phase_target(bc.beta, n);
}

namespace {

double field_min(const PotentialField& V, double start) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& piece : V.pieces()) {
        const double a = std::max(piece.x0, start);
        for (int j = 0; j <= 32; ++j) m = std::min(m, piece.at(a + (piece.x1 - a) * j / 32.0));
    }
    return m;
}

double find_eigenvalue(const PruferShooter& shooter, const BoundaryConditions& bc, int n,
                       double vmin, double pmax, double tol) {
    const double target = phase_target(bc.beta, n);
    auto F = [&](double lambda) {
        PruferState s = shooter.initial(bc.alpha, lambda);
        shooter.advance(s, shooter.start(), kPi, lambda);
        return s.phi - target;
    };
    double step = std::max(1.0, std::abs(vmin));
    double lo = vmin - 1.0;
    double flo = F(lo);
    while (flo > 0.0) {
        lo -= step;
        step *= 2.0;
        flo = F(lo);
        if (!std::isfinite(lo)) fail(ErrorKind::Convergence, "no lower eigenvalue bracket");
    }
    step = std::max(1.0, double(n) * n * pmax);
    double hi = std::max(lo + 1.0, vmin + double(n) * n * pmax + 1.0);
    double fhi = F(hi);
    while (fhi < 0.0) {
        lo = hi;
        flo = fhi;
        hi += step;
        step *= 2.0;
        fhi = F(hi);
        if (!std::isfinite(hi)) fail(ErrorKind::Convergence, "no upper eigenvalue bracket");
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    std::uintmax_t iters = 300;
    auto done = [tol](double a, double b) {
        return std::abs(b - a) <= tol * std::max(1.0, std::min(std::abs(a), std::abs(b)));
    };
    const auto [a, b] = boost::math::tools::toms748_solve(F, lo, hi, flo, fhi, done, iters);
    if (iters >= 300) fail(ErrorKind::Convergence, "eigenvalue root finding did not converge");
    return 0.5 * (a + b);
}

double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size() - 1;
    double s = f.front() + f.back();
    for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0;
}

// Two-sided sampling of the eigenfunction at lambda, matched at the grid
// point where lambda - V is largest.
void sample_eigenfunction(const CoefficientP& p, const PotentialField& V,
                          const BoundaryConditions& bc, const SolverOptions& opts,
                          EigenSolution& sol) {
    const int N = opts.grid_panels;
    const double h = kPi / N;
    const double lambda = sol.lambda;
    sol.x.resize(N + 1);
    for (int i = 0; i <= N; ++i) sol.x[i] = i * h;
    sol.x.back() = kPi;

    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> ties;
    const int first = V.singular() ? 1 : 0;
    std::vector<double> gapv(N + 1, -std::numeric_limits<double>::infinity());
    for (int i = first; i <= N; ++i) {
        gapv[i] = lambda - V(sol.x[i]);
        best = std::max(best, gapv[i]);
    }
    const double tie_tol = 1e-12 * std::max(1.0, std::abs(best));
    for (int i = first; i <= N; ++i) {
        if (gapv[i] >= best - tie_tol) ties.push_back(i);
    }
    const int m = ties[ties.size() / 2];

    // Interior breakpoints strictly between grid nodes.
    std::vector<double> knots;
    for (double b : V.breakpoints()) {
        const double t = b / h;
        if (b > 0.0 && b < kPi && std::abs(t - std::round(t)) * h > 1e-13) knots.push_back(b);
    }
    std::vector<std::pair<double, PruferState>> left_knots, right_knots;

    std::vector<PruferState> left(m + 1);
    const PruferShooter ls(p, V, opts);
    PruferState s = ls.initial(bc.alpha, lambda);
    double pos = ls.start();
    left[0] = s;
    std::size_t kn = 0;
    for (int i = 1; i <= m; ++i) {
        for (; kn < knots.size() && knots[kn] < sol.x[i]; ++kn) {
            if (knots[kn] <= pos) continue;
            ls.advance(s, std::max(pos, sol.x[i - 1]), knots[kn], lambda);
            pos = knots[kn];
            left_knots.emplace_back(knots[kn], s);
        }
        ls.advance(s, std::max(pos, sol.x[i - 1]), sol.x[i], lambda);
        pos = sol.x[i];
        left[i] = s;
    }

    std::vector<PruferState> right(N - m + 1);
    const double alpha_r = std::fmod(kPi - bc.beta, kPi);
    const bool have_right = m < N;
    if (have_right) {
        const PotentialField rv = V.reflected();
        const CoefficientP rp = p.reflected();
        const PruferShooter rs(rp, rv, opts);
        PruferState t = rs.initial(alpha_r, lambda);
        right[0] = t;
        std::vector<double> rknots;
        for (auto it = knots.rbegin(); it != knots.rend(); ++it) {
            if (*it > sol.x[m]) rknots.push_back(kPi - *it);
        }
        std::size_t rk = 0;
        for (int j = 1; j <= N - m; ++j) {
            double from = (j - 1) * h;
            for (; rk < rknots.size() && rknots[rk] < j * h; ++rk) {
                rs.advance(t, from, rknots[rk], lambda);
                from = rknots[rk];
                right_knots.emplace_back(kPi - rknots[rk], t);
            }
            rs.advance(t, from, j * h, lambda);
            right[j] = t;
        }
    }

    // Log-domain assembly.
    std::vector<double> lu(N + 1), lw(N + 1), su(N + 1), sw(N + 1);
    auto put = [&](int i, const PruferState& st, double lnc, double sign, double wsign) {
        const double sn = std::sin(st.phi);
        const double cs = std::cos(st.phi);
        lu[i] = sn == 0.0 ? -std::numeric_limits<double>::infinity()
                          : st.lnrho + lnc + std::log(std::abs(sn));
        lw[i] = cs == 0.0 ? -std::numeric_limits<double>::infinity()
                          : st.lnrho + lnc + std::log(std::abs(cs));
        su[i] = sign * (sn < 0.0 ? -1.0 : 1.0);
        sw[i] = sign * wsign * (cs < 0.0 ? -1.0 : 1.0);
    };
    for (int i = 0; i <= m; ++i) put(i, left[i], 0.0, 1.0, 1.0);
    // Knot samples in the same log form, appended after the grid slots.
    const std::size_t nk = left_knots.size() + right_knots.size();
    lu.resize(N + 1 + nk);
    lw.resize(N + 1 + nk);
    su.resize(N + 1 + nk);
    sw.resize(N + 1 + nk);
    std::vector<double> kx;
    for (const auto& [x, st] : left_knots) {
        put(N + 1 + static_cast<int>(kx.size()), st, 0.0, 1.0, 1.0);
        kx.push_back(x);
    }
    if (have_right) {
        const PruferState& L = left[m];
        const PruferState& R = right[N - m];
        const double sl = std::sin(L.phi), cl = std::cos(L.phi);
        const double sr = std::sin(R.phi), cr = std::cos(R.phi);
        double ratio;
        if (std::abs(sl) >= std::abs(cl)) {
            ratio = sl / sr;
        } else {
            ratio = cl / (-cr);
        }
        const double lnc = L.lnrho - R.lnrho + std::log(std::abs(ratio));
        const double sgn = ratio < 0.0 ? -1.0 : 1.0;
        for (int i = m + 1; i <= N; ++i) put(i, right[N - i], lnc, sgn, -1.0);
        for (auto it = right_knots.rbegin(); it != right_knots.rend(); ++it) {
            put(N + 1 + static_cast<int>(kx.size()), it->second, lnc, sgn, -1.0);
            kx.push_back(it->first);
        }
    }
    if (V.singular()) {
        lu[0] = -std::numeric_limits<double>::infinity();
    }

    const double shift = *std::max_element(lu.begin(), lu.begin() + N + 1);
    sol.u.assign(N + 1, 0.0);
    sol.pu.assign(N + 1, 0.0);
    for (int i = 0; i <= N; ++i) {
        sol.u[i] = su[i] * std::exp(lu[i] - shift);
        sol.pu[i] = sw[i] * std::exp(lw[i] - shift);
    }
    sol.knot_x = kx;
    sol.knot_u.assign(nk, 0.0);
    sol.knot_pu.assign(nk, 0.0);
    for (std::size_t j = 0; j < nk; ++j) {
        sol.knot_u[j] = su[N + 1 + j] * std::exp(lu[N + 1 + j] - shift);
        sol.knot_pu[j] = sw[N + 1 + j] * std::exp(lw[N + 1 + j] - shift);
    }
    if (bc.alpha == 0.0 && !V.singular()) sol.u.front() = 0.0;
    if (bc.beta == 0.0) sol.u.back() = 0.0;

    std::vector<double> sq(N + 1);
    for (int i = 0; i <= N; ++i) sq[i] = sol.u[i] * sol.u[i];
    // Gauss on the Hermite interpolant, split at the knots: Simpson on the
    // grid alone loses accuracy where u'' jumps inside a panel.
    double norm = 0.0;
    {
        using Gauss = boost::math::quadrature::gauss<double, 7>;
        const EigenInterpolant iu(sol, p);
        const std::vector<double> nodes = merge_breakpoints(sol.x, sol.knot_x);
        for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
            norm += Gauss::integrate([&](double x) { const double v = iu.value(x); return v * v; }, nodes[j],
                                     nodes[j + 1]);
        }
    }
    const double scale = 1.0 / std::sqrt(norm);

    const double umax = std::abs(*std::max_element(sol.u.begin(), sol.u.end(),
                                                   [](double a, double b) { return std::abs(a) < std::abs(b); }));
    double orient = 1.0;
    for (double v : sol.u) {
        if (std::abs(v) > 1e-6 * umax) {
            orient = v > 0.0 ? 1.0 : -1.0;
            break;
        }
    }
    for (int i = 0; i <= N; ++i) {
        sol.u[i] *= orient * scale;
        sol.pu[i] *= orient * scale;
        sq[i] = sol.u[i] * sol.u[i];
    }
    for (std::size_t j = 0; j < nk; ++j) {
        sol.knot_u[j] *= orient * scale;
        sol.knot_pu[j] *= orient * scale;
    }
    sol.norm = simpson(sq, h);
    sol.sup_norm = 0.0;
    for (double v : sol.u) sol.sup_norm = std::max(sol.sup_norm, std::abs(v));
    sol.sign_changes = count_sign_changes(sol.u, 1e-8);
}

}  // namespace

std::vector<EigenSolution> shoot_eigenvalues(const CoefficientP& p, const PotentialField& V,
                                             const BoundaryConditions& bc, int k,
                                             const SolverOptions& opts) {
    if (k < 1) fail(ErrorKind::InvalidArgument, "k must be at least 1");
    if (!(opts.tol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
    if (opts.grid_panels < 2 || opts.grid_panels % 2 != 0) {
        fail(ErrorKind::InvalidArgument, "grid panel count must be even");
    }
    const PruferShooter shooter(p, V, opts);
    const double vmin = field_min(V, shooter.start());

    std::vector<EigenSolution> out(k);
    for (int n = 1; n <= k; ++n) {
        EigenSolution& sol = out[n - 1];
        sol.index = n;
        sol.lambda = find_eigenvalue(shooter, bc, n, vmin, p.p_max(), opts.tol);
        if (opts.eigenfunctions) sample_eigenfunction(p, V, bc, opts, sol);
    }
    for (int n = 1; n < k; ++n) {
        const double a = out[n - 1].lambda;
        const double b = out[n].lambda;
        if (std::abs(b - a) <= kDegenerateRel * std::max(1.0, std::abs(a))) {
            out[n - 1].degenerate = true;
            out[n].degenerate = true;
        }
    }
    return out;
}

std::vector<EigenSolution> shoot_eigenvalues(const CoefficientP& p, const Potential& V,
                                             const BoundaryConditions& bc, int k, double tol) {
    SolverOptions opts;
    opts.tol = tol;
    return shoot_eigenvalues(p, PotentialField(V), bc, k, opts);
}

int count_sign_changes(const std::vector<double>& f, double rel_tol) {
    double fmax = 0.0;
    for (double v : f) fmax = std::max(fmax, std::abs(v));
    const double floor = rel_tol * fmax;
    int last = 0;
    int changes = 0;
    for (double v : f) {
        if (std::abs(v) <= floor) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

}  // namespace gapkit
