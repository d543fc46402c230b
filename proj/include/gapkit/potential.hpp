#pragma once

#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gapkit {

inline constexpr double kPi = std::numbers::pi;

/// One piece of a piecewise-linear function: the values reached at the
/// segment's left and right breakpoints. Constant pieces have left == right.
struct Segment {
    double left = 0.0;
    double right = 0.0;

    bool is_constant() const { return left == right; }
    double at(double t) const { return left + (right - left) * t; }  // t in [0,1]
    friend bool operator==(const Segment&, const Segment&) = default;
};

enum class PotentialClass { None, SingleWell, Convex, Step };

std::string to_string(PotentialClass cls);
PotentialClass potential_class_from_string(const std::string& name);

/// Piecewise-linear potential V = V0 + sign * V1 on [0, pi].
///
/// The breakpoints and segments describe the variable part V1; the optional
/// background is V0. Values at a jump belong to the segment on the right
/// (left-closed convention). Instances are immutable once built, so they can
/// be shared freely between threads.
class Potential {
public:
    Potential(std::vector<double> breakpoints, std::vector<Segment> segments,
              PotentialClass tag = PotentialClass::None,
              std::optional<double> bound = std::nullopt,
              std::shared_ptr<const Potential> background = nullptr, int sign = 1);

    static Potential constant(double value);
    static Potential affine(double slope, double intercept);
    /// Piecewise constant with values[i] on [breakpoints[i], breakpoints[i+1]).
    static Potential piecewise_constant(std::vector<double> breakpoints,
                                        std::span<const double> values,
                                        PotentialClass tag = PotentialClass::None);
    /// Continuous piecewise linear through (breakpoints[i], knots[i]).
    static Potential piecewise_linear(std::vector<double> breakpoints,
                                      std::span<const double> knots,
                                      PotentialClass tag = PotentialClass::None);

    /// V0(x) + sign * V1(x). Throws on x outside [0, pi].
    double evaluate(double x) const;
    /// V1(x) alone.
    double variable_part(double x) const;

    std::span<const double> breakpoints() const { return breakpoints_; }
    std::span<const Segment> segments() const { return segments_; }
    std::size_t size() const { return segments_.size(); }
    PotentialClass tag() const { return tag_; }
    std::optional<double> bound() const { return bound_; }
    int sign() const { return sign_; }
    const Potential* background() const { return background_.get(); }
    std::shared_ptr<const Potential> background_ptr() const { return background_; }

    bool is_piecewise_constant() const;
    /// Largest and smallest value of V1 (including one-sided limits).
    double sup_variable() const;
    double inf_variable() const;

    /// Collapses V0 + sign*V1 into a single piecewise representation with no
    /// background, on the union of both breakpoint sets.
    Potential flattened() const;

    Potential with_tag(PotentialClass tag, std::optional<double> bound = std::nullopt) const;
    Potential with_background(std::shared_ptr<const Potential> background, int sign) const;

private:
    std::size_t locate(double x) const;

    std::vector<double> breakpoints_;
    std::vector<Segment> segments_;
    PotentialClass tag_ = PotentialClass::None;
    std::optional<double> bound_;
    std::shared_ptr<const Potential> background_;
    int sign_ = 1;
};

enum class StepSide { Left, Right };

/// M times the indicator of an end-adjacent interval.
///
/// Left: V = 0 on [0, x_minus) and M on [x_minus, pi].
/// Right: the mirror image, V = M on [0, x_minus) and 0 on [x_minus, pi].
struct StepPotential {
    double M = 0.0;
    double x_minus = kPi / 2;
    StepSide side = StepSide::Left;

    StepPotential(double height, double location, StepSide s = StepSide::Left);

    double evaluate(double x) const;
    Potential to_potential() const;
    StepPotential reflected() const;
};

/// Separated boundary conditions u cos(a) - (p u')sin(a) = 0 at each end,
/// with angles in [0, pi).
struct BoundaryConditions {
    double alpha = 0.0;
    double beta = 0.0;

    BoundaryConditions() = default;
    BoundaryConditions(double a, double b);

    static BoundaryConditions dirichlet() { return {0.0, 0.0}; }
    static BoundaryConditions neumann() { return {kPi / 2, kPi / 2}; }

    bool is_dirichlet() const { return alpha == 0.0 && beta == 0.0; }
};

/// Result of the shape test on the variable part of a potential.
struct Classification {
    bool single_well = false;
    /// Every point of [transition_lo, transition_hi] is an admissible
    /// transition point; transition_lo is the least one.
    double transition_lo = 0.0;
    double transition_hi = 0.0;
    bool convex = false;

    std::string label() const;  // "single_well", "convex", "single_well+convex" or "neither"
};

Classification classify(const Potential& V, double tol = 0.0);

/// V(pi - x). Class tags, bound and sign carry over; the background is
/// reflected as well.
Potential reflect(const Potential& V);

/// (1 - kappa) V + kappa P on the union of breakpoints. Both operands must
/// share background and sign; only the variable parts are combined.
Potential blend(const Potential& V, const Potential& P, double kappa);

enum class PerturbationKind { Plateau, LeftFill, RightFill, Hinge };

std::string to_string(PerturbationKind kind);

/// Anchors for the comparison functions. Plateau uses [x_minus, x_plus];
/// LeftFill/RightFill use `anchor`; Hinge uses `x_n` with x_minus/x_plus
/// selecting the end hinge (x_n <= x_minus or x_n >= x_plus) or the tent.
struct PerturbationParams {
    double x_minus = 0.0;
    double x_plus = kPi;
    double anchor = 0.0;
    double x_n = 0.0;
};

/// The comparison potential R whose blend (1-k)V + kR realises the proof
/// directions. For Hinge, R = V + D with D the kink-reducing direction, so
/// blend(V, R, k) = V + k D.
Potential proof_perturbation(const Potential& V, PerturbationKind kind,
                             const PerturbationParams& params);

/// Largest kappa in [0, 1] for which blend(V, R, kappa) stays in the class of
/// V (single-well or convex) and inside the bound, if any.
double admissible_kappa(const Potential& V, const Potential& R, PotentialClass cls);

/// Total-value difference a - b as a single flattened potential.
Potential subtract(const Potential& a, const Potential& b);

/// L1 distance on [0, pi] between the variable parts of two potentials.
double l1_distance(const Potential& a, const Potential& b);

/// Merged, deduplicated breakpoints of several potentials.
std::vector<double> merge_breakpoints(std::span<const double> a, std::span<const double> b);

}  // namespace gapkit
