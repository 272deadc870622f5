#pragma once

#include "lassocond/solver.hpp"
#include "lassocond/types.hpp"

#include <cstdint>

namespace lassocond {

// Numerical sigma-certificate for one instance. The sigmas are evaluated at a
// thresholded numerical solution and shrunk by error margins derived from the
// solver's duality gap, so stsp_lb is a sound lower bound whenever positive.
struct SigmaCertificate {
    double sigma1 = 0.0;       // lambda/2 - off-support correlation, margin-adjusted
    double sigma2 = 0.0;       // smallest eigenvalue of A_S^T A_S (inf for S empty)
    double sigma3 = 0.0;       // smallest support magnitude, margin-adjusted (inf for S empty)
    double sigma = 0.0;        // min{sigma1, sigma2^2, sigma3}, clamped at 0
    double alpha = 1.0;        // max{||A||_2, ||y||_2, 1}
    double stsp_lb = 0.0;      // lower bound on the stability support
    double cond_ub = 0.0;      // 1 / stsp_lb (inf when stsp_lb = 0)
    SupportSet support_used;
    // provenance
    double tau = 0.0;
    double gap_bound = 0.0;
    double x_margin = 0.0;  // l2 bound on solution error used for the margins
    // With non-unique minimisers the sigmas of Definition-style infima range
    // over all of them; a single-solution evaluation only upper-bounds them.
    bool single_solution_evaluation = true;
};

// lambda/2 - ||A_{S^c}^T (Ax - y)||_inf; lambda/2 when S^c is empty.
double sigma1(const LassoInstance& inst, const VectorXd& x, const SupportSet& S);

// Smallest eigenvalue of A_S^T A_S; +inf for S empty; 0 when singular.
double sigma2(const LassoInstance& inst, const SupportSet& S);

// min_{i in S} |x_i|; +inf for S empty.
double sigma3(const LassoInstance& inst, const VectorXd& x, const SupportSet& S);

// q(nu, xi) = 96 nu^5 + 12 nu^3 (1 + lambda sqrt(N)) sqrt(xi) + xi (2 nu^3 / lambda + 3 nu).
// Requires nu >= 1, xi >= 0, lambda > 0.
double q_poly(double nu, double xi, double lambda, int N);

// (mN)^{-1/2} min{ sigma^2 / q(alpha, sigma), sqrt(sigma) / (6 alpha), alpha };
// 0 when sigma <= 0.
double stsp_lower_bound(double alpha, double sigma, int m, int N, double lambda);

// Builds the numerical sigma-certificate at support_from_threshold(sol.x, tau).
// Margins: eps_x = 2 sqrt(gap_bound) / sigma_min(A_S) bounds the l2 solution
// error; sigma3 is shrunk by eps_x and the sigma1 residual inflated by
// ||A||_2 max_j ||A_j||_2 eps_x. Throws UncertainSupport when some |x_i| lies
// within eps_x of tau (the thresholding is ambiguous).
SigmaCertificate certificate(const LassoInstance& inst, const LassoSolution& sol, double tau);

struct ProbeResult {
    bool found_change = false;
    double cond_lb = 0.0;  // 1/radius when a change was found
    int changes = 0;
};

// Samples n_samples perturbations with ||ytilde - y||_inf, ||Atilde - A||_max
// <= radius (sign-corner directions mixed with uniform box draws), re-solves,
// and reports whether any solved support differs from the unperturbed one.
ProbeResult probe_condition_lb(const LassoInstance& inst, double radius, int n_samples,
                               std::uint64_t seed);

}  // namespace lassocond
