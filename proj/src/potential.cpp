#include "gapkit/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapkit/error.hpp"

namespace gapkit {

namespace {

constexpr double kDomainSlack = 1e-12;

double clamp_to_domain(double x) {
    if (!(x >= -kDomainSlack && x <= kPi + kDomainSlack)) {
        fail(ErrorKind::Domain, "abscissa " + std::to_string(x) + " outside [0, pi]");
    }
    return std::clamp(x, 0.0, kPi);
}

// Value of the linear piece of `V1` that covers the open cell (c0, c1),
// evaluated at the cell ends. Requires the cell to lie inside one segment.
Segment restrict_to_cell(const Potential& V, double c0, double c1) {
    const auto b = V.breakpoints();
    const double mid = 0.5 * (c0 + c1);
    auto it = std::upper_bound(b.begin(), b.end(), mid);
    std::size_t i = static_cast<std::size_t>(std::distance(b.begin(), it));
    i = std::clamp<std::size_t>(i, 1, V.size()) - 1;
    const Segment& s = V.segments()[i];
    if (s.is_constant()) return {s.left, s.left};
    const double len = b[i + 1] - b[i];
    return {s.at((c0 - b[i]) / len), s.at((c1 - b[i]) / len)};
}

bool same_background(const Potential& a, const Potential& b) {
    const Potential* x = a.background();
    const Potential* y = b.background();
    if (x == y) return true;
    if (x == nullptr || y == nullptr) return false;
    const Potential fx = x->flattened();
    const Potential fy = y->flattened();
    return std::ranges::equal(fx.breakpoints(), fy.breakpoints()) &&
           std::ranges::equal(fx.segments(), fy.segments());
}

int sign_of(double d, double tol) {
    if (d > tol) return 1;
    if (d < -tol) return -1;
    return 0;
}

double class_tolerance(const Potential& V) {
    return 1e-12 * std::max({1.0, std::abs(V.sup_variable()), std::abs(V.inf_variable())});
}

}  // namespace

std::string to_string(PotentialClass cls) {
    switch (cls) {
    case PotentialClass::None: return "none";
    case PotentialClass::SingleWell: return "single_well";
    case PotentialClass::Convex: return "convex";
    case PotentialClass::Step: return "step";
    }
    return "none";
}

PotentialClass potential_class_from_string(const std::string& name) {
    if (name == "none") return PotentialClass::None;
    if (name == "single_well" || name == "single-well") return PotentialClass::SingleWell;
    if (name == "convex") return PotentialClass::Convex;
    if (name == "step") return PotentialClass::Step;
    fail(ErrorKind::Format, "unknown potential class '" + name + "'");
}

std::string to_string(PerturbationKind kind) {
    switch (kind) {
    case PerturbationKind::Plateau: return "plateau";
    case PerturbationKind::LeftFill: return "left-fill";
    case PerturbationKind::RightFill: return "right-fill";
    case PerturbationKind::Hinge: return "hinge";
    }
    return "unknown";
}

std::vector<double> merge_breakpoints(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    std::vector<double> unique;
    unique.reserve(out.size());
    for (double x : out) {
        if (unique.empty() || x - unique.back() > 1e-13) unique.push_back(x);
    }
    unique.front() = 0.0;
    unique.back() = kPi;
    return unique;
}

Potential::Potential(std::vector<double> breakpoints, std::vector<Segment> segments,
                     PotentialClass tag, std::optional<double> bound,
                     std::shared_ptr<const Potential> background, int sign)
    : breakpoints_(std::move(breakpoints)),
      segments_(std::move(segments)),
      tag_(tag),
      bound_(bound),
      background_(std::move(background)),
      sign_(sign) {
    if (breakpoints_.size() < 2 || breakpoints_.size() != segments_.size() + 1) {
        fail(ErrorKind::InvalidArgument, "potential needs n+1 breakpoints for n segments");
    }
    if (std::abs(breakpoints_.front()) > kDomainSlack ||
        std::abs(breakpoints_.back() - kPi) > kDomainSlack) {
        fail(ErrorKind::InvalidArgument, "breakpoints must start at 0 and end at pi");
    }
    breakpoints_.front() = 0.0;
    breakpoints_.back() = kPi;
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i] > breakpoints_[i - 1])) {
            fail(ErrorKind::InvalidArgument, "breakpoints must be strictly increasing");
        }
    }
    for (const Segment& s : segments_) {
        if (!std::isfinite(s.left) || !std::isfinite(s.right)) {
            fail(ErrorKind::InvalidArgument, "segment values must be finite");
        }
    }
    if (sign_ != 1 && sign_ != -1) fail(ErrorKind::InvalidArgument, "sign must be +1 or -1");

    const double tol = class_tolerance(*this);
    if (tag_ != PotentialClass::None) {
        const Classification c = classify(*this, tol);
        if ((tag_ == PotentialClass::SingleWell || tag_ == PotentialClass::Step) && !c.single_well) {
            fail(ErrorKind::InvalidArgument, "potential tagged " + to_string(tag_) +
                                                 " is not single-well");
        }
        if (tag_ == PotentialClass::Convex && !c.convex) {
            fail(ErrorKind::InvalidArgument, "potential tagged convex is not convex");
        }
        if (tag_ == PotentialClass::Step && !is_piecewise_constant()) {
            fail(ErrorKind::InvalidArgument, "step potential must be piecewise constant");
        }
    }
    if (bound_) {
        if (*bound_ < 0.0) fail(ErrorKind::InvalidArgument, "bound M must be non-negative");
        if (inf_variable() < -tol || sup_variable() > *bound_ + tol) {
            fail(ErrorKind::InvalidArgument, "variable part leaves [0, M]");
        }
    }
}

Potential Potential::constant(double value) {
    return Potential({0.0, kPi}, {Segment{value, value}});
}

Potential Potential::affine(double slope, double intercept) {
    return Potential({0.0, kPi}, {Segment{intercept, intercept + slope * kPi}});
}

Potential Potential::piecewise_constant(std::vector<double> breakpoints,
                                        std::span<const double> values, PotentialClass tag) {
    std::vector<Segment> segs;
    segs.reserve(values.size());
    for (double v : values) segs.push_back({v, v});
    return Potential(std::move(breakpoints), std::move(segs), tag);
}

Potential Potential::piecewise_linear(std::vector<double> breakpoints,
                                      std::span<const double> knots, PotentialClass tag) {
    if (knots.size() != breakpoints.size()) {
        fail(ErrorKind::InvalidArgument, "piecewise_linear needs one knot value per breakpoint");
    }
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) segs.push_back({knots[i], knots[i + 1]});
    return Potential(std::move(breakpoints), std::move(segs), tag);
}

std::size_t Potential::locate(double x) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it));
    return std::clamp<std::size_t>(i, 1, segments_.size()) - 1;
}

double Potential::variable_part(double x) const {
    x = clamp_to_domain(x);
    const std::size_t i = locate(x);
    const Segment& s = segments_[i];
    if (s.is_constant()) return s.left;
    return s.at((x - breakpoints_[i]) / (breakpoints_[i + 1] - breakpoints_[i]));
}

double Potential::evaluate(double x) const {
    const double v1 = variable_part(x);
    const double v0 = background_ ? background_->evaluate(x) : 0.0;
    return v0 + sign_ * v1;
}

bool Potential::is_piecewise_constant() const {
    return std::ranges::all_of(segments_, [](const Segment& s) { return s.is_constant(); });
}

double Potential::sup_variable() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const Segment& s : segments_) m = std::max({m, s.left, s.right});
    return m;
}

double Potential::inf_variable() const {
    double m = std::numeric_limits<double>::infinity();
    for (const Segment& s : segments_) m = std::min({m, s.left, s.right});
    return m;
}

Potential Potential::flattened() const {
    if (!background_) {
        if (sign_ == 1) return Potential(breakpoints_, segments_, tag_, bound_);
        std::vector<Segment> neg;
        for (const Segment& s : segments_) neg.push_back({-s.left, -s.right});
        return Potential(breakpoints_, std::move(neg));
    }
    const Potential bg = background_->flattened();
    std::vector<double> cells = merge_breakpoints(breakpoints_, bg.breakpoints());
    std::vector<Segment> segs;
    segs.reserve(cells.size() - 1);
    for (std::size_t j = 0; j + 1 < cells.size(); ++j) {
        const Segment a = restrict_to_cell(bg, cells[j], cells[j + 1]);
        const Segment b = restrict_to_cell(*this, cells[j], cells[j + 1]);
        segs.push_back({a.left + sign_ * b.left, a.right + sign_ * b.right});
    }
    return Potential(std::move(cells), std::move(segs));
}

Potential Potential::with_tag(PotentialClass tag, std::optional<double> bound) const {
    return Potential(breakpoints_, segments_, tag, bound, background_, sign_);
}

Potential Potential::with_background(std::shared_ptr<const Potential> background, int sign) const {
    return Potential(breakpoints_, segments_, tag_, bound_, std::move(background), sign);
}

StepPotential::StepPotential(double height, double location, StepSide s)
    : M(height), x_minus(location), side(s) {
    if (!(M > 0.0)) fail(ErrorKind::InvalidArgument, "step height M must be positive");
    if (!(x_minus > 0.0 && x_minus < kPi)) {
        fail(ErrorKind::InvalidArgument, "step location must lie in (0, pi)");
    }
}

double StepPotential::evaluate(double x) const {
    x = clamp_to_domain(x);
    const bool below = x < x_minus;
    if (side == StepSide::Left) return below ? 0.0 : M;
    return below ? M : 0.0;
}

Potential StepPotential::to_potential() const {
    const std::vector<double> values =
        side == StepSide::Left ? std::vector<double>{0.0, M} : std::vector<double>{M, 0.0};
    return Potential::piecewise_constant({0.0, x_minus, kPi}, values, PotentialClass::Step)
        .with_tag(PotentialClass::Step, M);
}

StepPotential StepPotential::reflected() const {
    return {M, kPi - x_minus, side == StepSide::Left ? StepSide::Right : StepSide::Left};
}

BoundaryConditions::BoundaryConditions(double a, double b) : alpha(a), beta(b) {
    if (!(a >= 0.0 && a < kPi) || !(b >= 0.0 && b < kPi)) {
        fail(ErrorKind::InvalidArgument, "boundary angles must lie in [0, pi)");
    }
}

std::string Classification::label() const {
    if (single_well && convex) return "single_well+convex";
    if (single_well) return "single_well";
    if (convex) return "convex";
    return "neither";
}

Classification classify(const Potential& V, double tol) {
    const auto b = V.breakpoints();
    const auto segs = V.segments();
    Classification out;

    bool seen_up = false;
    bool shape_ok = true;
    double last_down_end = 0.0;
    double first_up_start = kPi;
    auto record = [&](int direction, double start, double end) {
        if (direction < 0) {
            if (seen_up) shape_ok = false;
            last_down_end = end;
        } else if (direction > 0 && !seen_up) {
            seen_up = true;
            first_up_start = start;
        }
    };

    bool continuous = true;
    bool slopes_ok = true;
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (i > 0) {
            const int jump = sign_of(segs[i].left - segs[i - 1].right, tol);
            if (jump != 0) continuous = false;
            record(jump, b[i], b[i]);
        }
        record(sign_of(segs[i].right - segs[i].left, tol), b[i], b[i + 1]);
        const double slope = (segs[i].right - segs[i].left) / (b[i + 1] - b[i]);
        if (slope < prev_slope - tol) slopes_ok = false;
        prev_slope = std::max(prev_slope, slope);
    }

    out.single_well = shape_ok && last_down_end <= first_up_start;
    if (out.single_well) {
        out.transition_lo = last_down_end;
        out.transition_hi = first_up_start;
    }
    out.convex = continuous && slopes_ok;
    return out;
}

Potential reflect(const Potential& V) {
    const auto b = V.breakpoints();
    const auto segs = V.segments();
    std::vector<double> nb(b.size());
    std::vector<Segment> ns(segs.size());
    for (std::size_t j = 0; j < b.size(); ++j) nb[j] = kPi - b[b.size() - 1 - j];
    for (std::size_t j = 0; j < segs.size(); ++j) {
        const Segment& s = segs[segs.size() - 1 - j];
        ns[j] = {s.right, s.left};
    }
    nb.front() = 0.0;
    nb.back() = kPi;
    std::shared_ptr<const Potential> bg;
    if (V.background()) bg = std::make_shared<const Potential>(reflect(*V.background()));
    return Potential(std::move(nb), std::move(ns), V.tag(), V.bound(), std::move(bg), V.sign());
}

Potential blend(const Potential& V, const Potential& P, double kappa) {
    if (!(kappa >= 0.0 && kappa <= 1.0)) {
        fail(ErrorKind::InvalidArgument, "blend weight must lie in [0, 1]");
    }
    if (V.sign() != P.sign() || !same_background(V, P)) {
        fail(ErrorKind::InvalidArgument, "blend operands have incompatible backgrounds");
    }
    std::vector<double> cells = merge_breakpoints(V.breakpoints(), P.breakpoints());
    std::vector<Segment> segs;
    segs.reserve(cells.size() - 1);
    auto mix = [kappa](double a, double b) { return a == b ? a : (1.0 - kappa) * a + kappa * b; };
    for (std::size_t j = 0; j + 1 < cells.size(); ++j) {
        const Segment a = restrict_to_cell(V, cells[j], cells[j + 1]);
        const Segment c = restrict_to_cell(P, cells[j], cells[j + 1]);
        segs.push_back({mix(a.left, c.left), mix(a.right, c.right)});
    }

    std::optional<double> bound;
    if (V.bound() && P.bound()) bound = std::max(*V.bound(), *P.bound());
    Potential untagged(std::move(cells), std::move(segs), PotentialClass::None, bound,
                       V.background_ptr(), V.sign());

    const Classification c = classify(untagged, class_tolerance(untagged));
    auto is_sw = [](PotentialClass t) {
        return t == PotentialClass::SingleWell || t == PotentialClass::Step;
    };
    PotentialClass tag = PotentialClass::None;
    if (V.tag() == PotentialClass::Convex && P.tag() == PotentialClass::Convex && c.convex) {
        tag = PotentialClass::Convex;
    } else if (is_sw(V.tag()) && is_sw(P.tag()) && c.single_well) {
        tag = PotentialClass::SingleWell;
    }
    return untagged.with_tag(tag, bound);
}

Potential proof_perturbation(const Potential& V, PerturbationKind kind,
                             const PerturbationParams& params) {
    const double xm = params.x_minus;
    const double xp = params.x_plus;
    if (!(xm >= 0.0 && xm <= xp && xp <= kPi)) {
        fail(ErrorKind::InvalidArgument, "perturbation anchors out of order");
    }

    auto rebuild = [&](std::vector<double> extra, auto&& value_on_cell) {
        std::sort(extra.begin(), extra.end());
        std::vector<double> inner;
        for (double e : extra) {
            if (e > 0.0 && e < kPi) inner.push_back(e);
        }
        std::vector<double> cells = merge_breakpoints(V.breakpoints(), inner);
        std::vector<Segment> segs;
        for (std::size_t j = 0; j + 1 < cells.size(); ++j) {
            const Segment base = restrict_to_cell(V, cells[j], cells[j + 1]);
            segs.push_back(value_on_cell(cells[j], cells[j + 1], base));
        }
        return Potential(std::move(cells), std::move(segs), PotentialClass::None, std::nullopt,
                         V.background_ptr(), V.sign());
    };

    switch (kind) {
    case PerturbationKind::Plateau: {
        if (!(xm < xp)) fail(ErrorKind::InvalidArgument, "plateau needs x_minus < x_plus");
        const double level = std::max(V.variable_part(xm), V.variable_part(xp));
        return rebuild({xm, xp}, [&](double c0, double c1, Segment base) {
            const double mid = 0.5 * (c0 + c1);
            return (mid > xm && mid < xp) ? Segment{level, level} : base;
        });
    }
    case PerturbationKind::LeftFill: {
        const double a = params.anchor;
        if (!(a >= 0.0 && a <= kPi)) fail(ErrorKind::InvalidArgument, "anchor outside [0, pi]");
        const double level = V.variable_part(a);
        return rebuild({a}, [&](double c0, double c1, Segment base) {
            return 0.5 * (c0 + c1) < a ? Segment{level, level} : base;
        });
    }
    case PerturbationKind::RightFill: {
        const double a = params.anchor;
        if (!(a >= 0.0 && a <= kPi)) fail(ErrorKind::InvalidArgument, "anchor outside [0, pi]");
        const double level = V.variable_part(a);
        return rebuild({a}, [&](double c0, double c1, Segment base) {
            return 0.5 * (c0 + c1) > a ? Segment{level, level} : base;
        });
    }
    case PerturbationKind::Hinge: {
        const double xn = params.x_n;
        if (!(xn > 0.0 && xn < kPi)) fail(ErrorKind::InvalidArgument, "hinge needs x_n in (0, pi)");
        std::function<double(double)> direction;
        if (xn <= xm) {
            direction = [xn](double x) { return x < xn ? x - xn : 0.0; };
        } else if (xn >= xp) {
            direction = [xn](double x) { return x > xn ? xn - x : 0.0; };
        } else {
            direction = [xm, xp, xn](double x) {
                return x < xn ? (x - xm) / (xn - xm) : (xp - x) / (xp - xn);
            };
        }
        return rebuild({xn}, [&](double c0, double c1, Segment base) {
            return Segment{base.left + direction(c0), base.right + direction(c1)};
        });
    }
    }
    fail(ErrorKind::InvalidArgument, "unknown perturbation kind");
}

double admissible_kappa(const Potential& V, const Potential& R, PotentialClass cls) {
    auto ok = [&](double kappa) {
        const Potential mixed = blend(V.with_tag(PotentialClass::None), R.with_tag(PotentialClass::None), kappa);
        const double tol = class_tolerance(mixed);
        const Classification c = classify(mixed, tol);
        bool in_class = true;
        if (cls == PotentialClass::Convex) in_class = c.convex;
        if (cls == PotentialClass::SingleWell || cls == PotentialClass::Step) in_class = c.single_well;
        if (V.bound()) {
            in_class = in_class && mixed.inf_variable() >= -tol &&
                       mixed.sup_variable() <= *V.bound() + tol;
        }
        return in_class;
    };
    if (ok(1.0)) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

Potential subtract(const Potential& a, const Potential& b) {
    const Potential fa = a.flattened();
    const Potential fb = b.flattened();
    std::vector<double> cells = merge_breakpoints(fa.breakpoints(), fb.breakpoints());
    std::vector<Segment> segs;
    segs.reserve(cells.size() - 1);
    for (std::size_t j = 0; j + 1 < cells.size(); ++j) {
        const Segment sa = restrict_to_cell(fa, cells[j], cells[j + 1]);
        const Segment sb = restrict_to_cell(fb, cells[j], cells[j + 1]);
        segs.push_back({sa.left - sb.left, sa.right - sb.right});
    }
    return Potential(std::move(cells), std::move(segs));
}

double l1_distance(const Potential& a, const Potential& b) {
    const std::vector<double> cells = merge_breakpoints(a.breakpoints(), b.breakpoints());
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < cells.size(); ++j) {
        const double h = cells[j + 1] - cells[j];
        const Segment sa = restrict_to_cell(a, cells[j], cells[j + 1]);
        const Segment sb = restrict_to_cell(b, cells[j], cells[j + 1]);
        const double d0 = sa.left - sb.left;
        const double d1 = sa.right - sb.right;
        if (d0 * d1 >= 0.0) {
            total += 0.5 * h * (std::abs(d0) + std::abs(d1));
        } else {
            // The difference changes sign inside the cell: two triangles.
            const double t = std::abs(d0) / (std::abs(d0) + std::abs(d1));
            total += 0.5 * h * (t * std::abs(d0) + (1.0 - t) * std::abs(d1));
        }
    }
    return total;
}

}  // namespace gapkit
