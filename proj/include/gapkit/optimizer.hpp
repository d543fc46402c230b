#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapkit/potential.hpp"
#include "gapkit/solver.hpp"

namespace gapkit {

enum class MinimizerClass { StepFamily, SingleWellGrid, ConvexPL };

std::string to_string(MinimizerClass cls);

/// Gap derivative along one comparison direction.
struct FirstOrderCheck {
    std::string direction;  // e.g. "plateau", "left-fill@x_minus", "hinge@1.5708"
    double anchor = 0.0;
    double derivative = 0.0;
    double kappa = 0.0;       // admissible blend weight; 0 means the direction leaves the class
    bool admissible = false;
};

struct LocalMinimum {
    double x_minus = 0.0;
    double gamma = 0.0;
};

struct MinimizerReport {
    MinimizerClass cls = MinimizerClass::StepFamily;
    double M = 0.0;
    double gamma_star = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::optional<Potential> potential;  // the optimal variable part (with background)
    std::vector<double> parameters;      // cell heights or knot values
    std::vector<FirstOrderCheck> first_order;
    bool converged = false;
    int iterations = 0;
    bool exploratory = false;
    std::vector<std::string> notes;

    // Step family.
    double x_minus_star = 0.0;
    double reflected_x_minus = 0.0;  // the RIGHT twin, pi - x_minus_star
    double stationarity = 0.0;        // u2(x_-)^2 - u1(x_-)^2
    bool at_domain_boundary = false;
    bool x_lower_bound_ok = false;    // x_- >= pi / (2 sqrt(M))
    bool x_upper_bound_ok = false;    // x_- <= pi / sqrt(M - 2), M > 2
    bool lambda2_bounds_ok = false;   // M + 1 < lambda2 < M + 4
    bool lambda1_bounds_ok = false;   // M - 2 < lambda1 < M + 1
    bool lambda1_below_M = false;
    std::vector<LocalMinimum> local_minima;

    // Single-well grid.
    int transition_index = -1;
    double l1_to_step = 0.0;          // L1 distance to the nearest end-supported step
    double nearest_step_x = 0.0;

    // Convex piecewise linear.
    double slope = 0.0;
    double intercept = 0.0;
    double max_kink = 0.0;            // largest second-difference weight
    bool affine = false;
};

/// Minimises the gap over V = M chi_[x, pi] by a coarse scan in x followed by
/// Brent refinement of every local minimum of the scan.
MinimizerReport minimize_step_family(double M, double tol = 1e-10);

/// Projected-gradient search over piecewise-constant single-well potentials
/// on `n_cells` uniform cells with values in [0, M], added to V0 with `sign`.
MinimizerReport minimize_single_well_grid(double M, int n_cells,
                                          const std::optional<Potential>& V0 = std::nullopt,
                                          int sign = 1, double tol = 1e-8, int max_iter = 300);

/// Projected gradient over convex continuous piecewise-linear potentials with
/// `n_cells` uniform cells and range at most M, added to V0.
MinimizerReport minimize_convex_pl(double M, int n_cells,
                                   const std::optional<Potential>& V0 = std::nullopt,
                                   double tol = 1e-8, int max_iter = 400);

/// Gap derivatives along the comparison directions admissible for `cls`.
std::vector<FirstOrderCheck> verify_first_order(const Potential& V, PotentialClass cls);

/// True when every admissible direction has derivative >= -tol.
bool first_order_certified(const std::vector<FirstOrderCheck>& checks, double tol);

/// V(x) = c x^-q on (0, pi]. A divergence at pi is the mirror image and has
/// the same Dirichlet spectrum.
struct DivergentPotential {
    double c = 1.0;
    double q = 1.0;
};

enum class TruncationMode { SingleWell, Convex };

struct TruncationRow {
    double M_cap = 0.0;
    double ell = 0.0;  // the truncation point
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double shift1 = 0.0;  // lambda_k(V_M) - lambda_k(V)
    double shift2 = 0.0;
    bool within_epsilon = false;  // both shifts in [-epsilon, 0]
};

struct TruncationReport {
    double lambda1_reference = 0.0;
    double lambda2_reference = 0.0;
    std::vector<TruncationRow> rows;
    bool monotone = false;  // lambda_k(V_M) nondecreasing in M_cap
    double epsilon = 0.0;
};

/// Replaces the divergent end by min(V, M_cap) (single-well) or by the
/// tangent-line continuation reaching M_cap at the end (convex), and compares
/// the two lowest eigenvalues with those of V itself.
TruncationReport truncation_experiment(const DivergentPotential& V, std::vector<double> M_caps,
                                       double epsilon, TruncationMode mode = TruncationMode::SingleWell);

/// Truncation of an already bounded potential by min(V, M_cap).
Potential truncate(const Potential& V, double M_cap);

/// Where lambda_1 = M can happen along the step family.
struct DegenerateScanRow {
    double M = 0.0;
    double x_minus_star = 0.0;
    double lambda1_minus_M = 0.0;
    double x_degenerate = 0.0;   // step location with ground state at lambda = M (nan if none)
    double printed_form_at_x = 0.0;
};

struct DegenerateScan {
    std::vector<DegenerateScanRow> rows;
    /// Smallest grid M beyond which the minimiser never sits on lambda_1 = M
    /// (lambda_1 - M keeps one sign); nan when the sign flips at the last M.
    double threshold = 0.0;
};

DegenerateScan degenerate_branch_scan(const std::vector<double>& M_grid);

/// Ground-state step location with lambda_1 = M: root of the derived C^1
/// condition with sqrt(M) x in (pi/2, pi). Returns nan when M <= 0 or the
/// root falls outside (0, pi).
double degenerate_step_location(double M);

}  // namespace gapkit
