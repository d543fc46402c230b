#pragma once

#include <vector>

#include "gapkit/coefficient.hpp"
#include "gapkit/solver.hpp"

namespace gapkit {

/// Lifted Pruefer angle and log-amplitude: u = rho sin(phi), p u' = rho cos(phi).
struct PruferState {
    double phi = 0.0;
    double lnrho = 0.0;
};

/// Propagates the Pruefer state across [0, pi]. Constant cells with constant p
/// use the closed-form transfer; everything else goes through a scaled Pruefer
/// system and an embedded Runge-Kutta 7(8) integrator.
class PruferShooter {
public:
    PruferShooter(const CoefficientP& p, const PotentialField& V, const SolverOptions& opts);

    PruferState initial(double alpha, double lambda) const;
    void advance(PruferState& s, double a, double b, double lambda) const;
    double start() const { return start_; }

private:
    struct Cell {
        double x0;
        double x1;
        std::size_t piece;
    };

    void advance_cell(PruferState& s, const Cell& cell, double a, double b, double lambda) const;
    void advance_rk(PruferState& s, const PotentialField::Piece& piece, double a, double b,
                    double lambda) const;
    static void advance_exact(PruferState& s, double p0, double q, double L);
    static void finish_short(PruferState& s, double n0, double f, double u1, double w1,
                             double lnscale);

    const CoefficientP& p_;
    const PotentialField& V_;
    SolverOptions opts_;
    std::vector<Cell> cells_;
    double start_ = 0.0;
};

double phase_target(double beta, int n);

}  // namespace gapkit
