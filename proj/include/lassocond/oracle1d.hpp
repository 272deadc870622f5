#pragma once

#include "lassocond/types.hpp"

namespace lassocond {

// Exact ground truth for m = 1 instances (y scalar, A a row vector).
struct Instance1D {
    double y = 0.0;
    VectorXd a;
    double lambda = 1.0;

    Instance1D() = default;
    Instance1D(double y_, VectorXd a_, double lambda_);

    int N() const { return static_cast<int>(a.size()); }
    LassoInstance to_instance() const;
};

// Gap between the largest and second-largest entries of |a|.
struct GapStat {
    double delta = 0.0;
    int argmax_index = 0;  // 1-based
};

// Support of any minimiser: {i*} if |a_{i*} y| > lambda/2, else empty.
// Requires the largest |a_i| to be strictly unique; throws TieError otherwise.
SupportSet support_1d(const Instance1D& inst);

// Closed-form minimiser from the KKT system:
// x_{i*} = sgn(a_{i*} y) (|a_{i*} y| - lambda/2) / a_{i*}^2 when nonzero.
VectorXd solution_1d(const Instance1D& inst);

// Throws DimensionError for N = 1 (needs two entries).
GapStat delta_gap(const VectorXd& a);

// Z(eps): no eps-perturbation of (y, a) admits 0 as a solution. Closed form:
// the minimal product over the ball is max(||a||_inf - eps, 0) * max(|y| - eps, 0),
// and 0 solves a perturbed instance iff that product can reach <= lambda/2.
bool z_event(const Instance1D& inst, double eps);

// Exact stability support for m = 1:
//   singleton support: min{delta/2, eps_Z}, eps_Z the root of
//     (||a||_inf - e)(|y| - e) = lambda/2 (bisection, abs tol 1e-14);
//   empty support: the root of (||a||_inf + e)(|y| + e) = lambda/2.
// Returns 0 when the maximal |a_i| is attained twice.
double stsp_1d(const Instance1D& inst);

}  // namespace lassocond
