#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gapkit/coefficient.hpp"
#include "gapkit/potential.hpp"

namespace gapkit {

/// Total potential as the integrator sees it: a partition of [0, pi] into
/// constant, affine or smooth pieces. A smooth first piece may carry a
/// c x^-q singularity at 0, in which case integration starts from a
/// Frobenius expansion at a small offset.
class PotentialField {
public:
    enum class Kind { Constant, Affine, Smooth };

    struct Piece {
        double x0 = 0.0;
        double x1 = 0.0;
        Kind kind = Kind::Constant;
        double v0 = 0.0;  // value at x0 (Constant, Affine)
        double v1 = 0.0;  // value at x1 (Affine)
        std::function<double(double)> f;  // Smooth

        double at(double x) const;
    };

    struct Singularity {
        double c = 0.0;  // V ~ c x^-q near 0
        double q = 0.0;
    };

    explicit PotentialField(const Potential& V);
    PotentialField(std::vector<Piece> pieces, std::optional<Singularity> singular = std::nullopt);

    /// V(x) = c x^-q on (0, pi]; requires c >= 0 and 0 < q < 2.
    static PotentialField power_law(double c, double q);

    double operator()(double x) const;
    const std::vector<Piece>& pieces() const { return pieces_; }
    const std::optional<Singularity>& singular() const { return singular_; }
    std::vector<double> breakpoints() const;

    /// V(pi - x). A singularity at 0 becomes an unmarked blow-up at pi, so
    /// the result is only usable on intervals that stay away from pi.
    PotentialField reflected() const;

private:
    std::vector<Piece> pieces_;
    std::optional<Singularity> singular_;
};

struct SolverOptions {
    double tol = 1e-12;          // relative eigenvalue bracket width
    double ode_tol = 1e-12;      // Runge-Kutta error tolerance
    int grid_panels = 4096;      // output grid, must be even (Simpson)
    double singular_start = 1e-6;
    bool eigenfunctions = true;
};

/// n-th eigenpair sampled on a uniform grid of [0, pi].
struct EigenSolution {
    int index = 1;
    double lambda = 0.0;
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> pu;  // p u'
    int sign_changes = 0;
    double sup_norm = 0.0;
    double norm = 1.0;       // Simpson value of the integral of u^2 after normalisation
    bool degenerate = false; // within 1e-12 relative of a neighbouring eigenvalue
    // Exact samples at potential breakpoints that fall between grid nodes, so
    // interpolation never straddles a jump in V.
    std::vector<double> knot_x;
    std::vector<double> knot_u;
    std::vector<double> knot_pu;
};

/// The k lowest eigenpairs by Pruefer-angle shooting. u_1 is positive; every
/// u_n is positive just right of 0.
std::vector<EigenSolution> shoot_eigenvalues(const CoefficientP& p, const Potential& V,
                                             const BoundaryConditions& bc, int k,
                                             double tol = 1e-12);
std::vector<EigenSolution> shoot_eigenvalues(const CoefficientP& p, const PotentialField& V,
                                             const BoundaryConditions& bc, int k,
                                             const SolverOptions& opts = {});

/// Pruefer angle at pi minus its target for the n-th eigenvalue; increasing
/// in lambda with a single root at lambda_n.
double phase_mismatch(const CoefficientP& p, const PotentialField& V,
                      const BoundaryConditions& bc, int n, double lambda,
                      const SolverOptions& opts = {});

/// Eigenpairs of the three-point flux discretisation on a grid that contains
/// every breakpoint. `refinement` multiplies the panel count of each segment,
/// so grids with refinement 1 and 2 nest exactly.
std::vector<EigenSolution> dense_oracle(const CoefficientP& p, const Potential& V,
                                        const BoundaryConditions& bc, int k, int grid_size,
                                        int refinement = 1);

/// (4 lambda(2N) - lambda(N)) / 3 for the k lowest oracle eigenvalues.
std::vector<double> dense_oracle_extrapolated(const CoefficientP& p, const Potential& V,
                                              const BoundaryConditions& bc, int k,
                                              int grid_size);

struct Crossings {
    double x_minus = 0.0;
    double x_zero = 0.0;
    double x_plus = kPi;
    int sign_changes = 0;  // sign changes of u2^2 - u1^2 on the grid
};

/// Number of sign changes of a sampled function, ignoring samples below
/// rel_tol * max|f|.
int count_sign_changes(const std::vector<double>& f, double rel_tol = 1e-10);

/// Zero of u2 and the sign changes of u2^2 - u1^2. Throws when the grid shows
/// more than two sign changes.
Crossings crossing_points(const EigenSolution& sol1, const EigenSolution& sol2,
                          const CoefficientP& p = CoefficientP::constant(1.0));

/// Integral of dV u^2 over [0, pi].
double feynman_hellmann(const EigenSolution& sol, const CoefficientP& p, const Potential& dV);
double feynman_hellmann(const EigenSolution& sol, const Potential& dV);

struct GapResult {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double gamma = 0.0;
    double x_minus = 0.0;
    double x_zero = 0.0;
    double x_plus = kPi;
    int crossing_sign_changes = 0;
    bool degenerate = false;
};

GapResult gap(const CoefficientP& p, const Potential& V, const BoundaryConditions& bc,
              double tol = 1e-12);

/// Directional derivative of the gap along blend(V, P, kappa) at kappa = 0.
/// A degenerate second eigenvalue uses the smaller eigenvalue of the 2x2
/// perturbation matrix on the eigenspace.
double gap_derivative(const CoefficientP& p, const Potential& V, const Potential& P,
                      const BoundaryConditions& bc);
double gap_derivative(const Potential& V, const Potential& P);

struct Wronskian {
    std::vector<double> x;
    std::vector<double> W;
    double identity_residual = 0.0;  // max |W' + (l2 - l1) u1 u2| at interior nodes
    double W_left = 0.0;
    double W_right = 0.0;
    double min_ratio_decrease = 0.0;  // min over (0, x0) of -(u2/u1)'
};

Wronskian wronskian_diagnostic(const EigenSolution& sol1, const EigenSolution& sol2,
                               const CoefficientP& p);

/// Cubic Hermite interpolation of u from the grid samples of u and p u'.
class EigenInterpolant {
public:
    EigenInterpolant(const EigenSolution& sol, const CoefficientP& p);
    double value(double x) const;
    double derivative(double x) const;

private:
    std::vector<double> x_;
    std::vector<double> u_;
    std::vector<double> du_;
};

}  // namespace gapkit
