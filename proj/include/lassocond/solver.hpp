#pragma once

#include "lassocond/types.hpp"

#include <utility>

namespace lassocond {

// Objective ||Ax - y||_2^2 + lambda ||x||_1, no 1/2 factor, so the
// equicorrelation level in the KKT system is lambda/2.
double objective(const LassoInstance& inst, const VectorXd& x);

struct LassoSolution {
    VectorXd x;
    double gap_bound = 0.0;  // duality-gap certificate on objective suboptimality
    double kkt_inf = 0.0;
    long iterations = 0;
    bool converged = true;  // false only in fixed-effort mode (see SolveOptions)
};

struct EquicorrelationSet {
    SupportSet indices;
    double tol = 0.0;
};

// corr_j = A_j^T (Ax - y). kkt_inf combines the off-bound excess
// max(0, ||corr||_inf - lambda/2) with the on-support stationarity residual
// max_{j: x_j != 0} |corr_j + (lambda/2) sgn(x_j)|.
std::pair<double, VectorXd> kkt_residuals(const LassoInstance& inst, const VectorXd& x);

// {j : |corr_j| >= lambda/2 - tol}
EquicorrelationSet equicorrelation(const LassoInstance& inst, const VectorXd& x, double tol);

struct SolveOptions {
    double gap_tol = 1e-10;
    long max_sweeps = 100000;
    // Fixed-effort ("as-deployed") mode for experiments: stop once the largest
    // coordinate update in a pass falls below dx_tol, or once the coordinate
    // update budget runs out, and return the iterate instead of throwing.
    double dx_tol = 0.0;
    long update_budget = 0;
    bool fixed_effort = false;
};

// Cyclic coordinate descent with exact coordinate minimisation, cold start at
// zero, duality gap checked every pass. Throws BudgetError if the gap
// tolerance is not reached within max_sweeps (never returns a silent bad
// answer), except in fixed-effort mode.
LassoSolution solve_with_options(const LassoInstance& inst, const SolveOptions& opt);

LassoSolution solve(const LassoInstance& inst, double gap_tol);

}  // namespace lassocond
