#include "lassocond/solver.hpp"

#include <algorithm>
#include <cmath>

namespace lassocond {

double objective(const LassoInstance& inst, const VectorXd& x) {
    if (x.size() != inst.N()) throw DimensionError("objective: x has wrong length");
    return (inst.A * x - inst.y).squaredNorm() + inst.lambda * x.lpNorm<1>();
}

std::pair<double, VectorXd> kkt_residuals(const LassoInstance& inst, const VectorXd& x) {
    if (x.size() != inst.N()) throw DimensionError("kkt_residuals: x has wrong length");
    VectorXd corr = inst.A.transpose() * (inst.A * x - inst.y);
    const double half = inst.lambda / 2;
    double off = std::max(0.0, corr.cwiseAbs().maxCoeff() - half);
    double on = 0.0;
    for (int j = 0; j < x.size(); ++j)
        if (x(j) != 0.0) on = std::max(on, std::abs(corr(j) + half * (x(j) > 0 ? 1.0 : -1.0)));
    return {std::max(off, on), std::move(corr)};
}

EquicorrelationSet equicorrelation(const LassoInstance& inst, const VectorXd& x, double tol) {
    if (tol < 0) throw DomainError("equicorrelation: tol must be >= 0");
    VectorXd corr = inst.A.transpose() * (inst.A * x - inst.y);
    std::vector<int> idx;
    for (int j = 0; j < corr.size(); ++j)
        if (std::abs(corr(j)) >= inst.lambda / 2 - tol) idx.push_back(j + 1);
    return {SupportSet(std::move(idx)), tol};
}

namespace {

// Duality gap from the dual-feasible scaling of the residual r = y - Ax:
// u = 2cr with c = min{1, lambda / (2||A^T r||_inf)} is feasible for the dual
// max_u u^T y - ||u||^2/4 s.t. ||A^T u||_inf <= lambda.
double duality_gap(const LassoInstance& inst, const VectorXd& x, const VectorXd& r) {
    double ginf = (inst.A.transpose() * r).cwiseAbs().maxCoeff();
    double c = 1.0;
    if (ginf > inst.lambda / 2) c = inst.lambda / (2 * ginf);
    double primal = r.squaredNorm() + inst.lambda * x.lpNorm<1>();
    double dual = 2 * c * r.dot(inst.y) - c * c * r.squaredNorm();
    return std::max(0.0, primal - dual);
}

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

// Exact minimisation on the current active manifold: with signs s fixed, the
// stationarity system is A_S^T A_S z = A_S^T y - (lambda/2) s. Coordinate
// descent crawls through near-collinear exchanges; this crosses them in one
// step. With an invertible Gram matrix the system is solved and sign
// violators dropped; with a (near-)singular one, a line step along the null
// eigendirection walks the iterate to the boundary of the sign orthant, which
// is what completes a leadership exchange between near-tied columns. Either
// step is accepted only when it strictly improves the objective.
bool active_manifold_jump(const LassoInstance& inst, VectorXd& x, VectorXd& r) {
    std::vector<int> S;
    for (int j = 0; j < inst.N(); ++j)
        if (x(j) != 0.0) S.push_back(j);
    if (S.empty() || S.size() > 64) return false;

    std::vector<double> sgn(S.size());
    for (size_t k = 0; k < S.size(); ++k) sgn[k] = x(S[k]) > 0 ? 1.0 : -1.0;

    const double f_old = objective(inst, x);
    VectorXd z;
    for (int round = 0; round <= static_cast<int>(S.size()); ++round) {
        const int ns = static_cast<int>(S.size());
        if (ns == 0) return false;
        MatrixXd AS(inst.m(), ns);
        for (int k = 0; k < ns; ++k) AS.col(k) = inst.A.col(S[static_cast<size_t>(k)]);
        MatrixXd G = AS.transpose() * AS;
        VectorXd svec = Eigen::Map<VectorXd>(sgn.data(), ns);
        VectorXd rhs = AS.transpose() * inst.y - (inst.lambda / 2) * svec;

        Eigen::SelfAdjointEigenSolver<MatrixXd> es(G);
        double emax = es.eigenvalues().maxCoeff();
        double emin = es.eigenvalues().minCoeff();

        if (emin <= 1e-12 * std::max(emax, 1.0)) {
            // Gram matrix is numerically singular: move along its null
            // direction until a coordinate hits zero.
            VectorXd xs(ns);
            for (int k = 0; k < ns; ++k) xs(k) = x(S[static_cast<size_t>(k)]);
            VectorXd dir = es.eigenvectors().col(0);
            VectorXd Adir = AS * dir;
            double slope = 2 * (AS * xs - inst.y).dot(Adir) + inst.lambda * svec.dot(dir);
            if (slope > 0) {
                dir = -dir;
                Adir = -Adir;
                slope = -slope;
            }
            if (!(slope < -1e-18 * std::max(1.0, f_old))) return false;
            double curve = Adir.squaredNorm();
            double t_unc = curve > 0 ? -slope / (2 * curve) : std::numeric_limits<double>::infinity();
            double t_max = std::numeric_limits<double>::infinity();
            int crossing = -1;
            for (int k = 0; k < ns; ++k)
                if (xs(k) * dir(k) < 0 && -xs(k) / dir(k) < t_max) {
                    t_max = -xs(k) / dir(k);
                    crossing = k;
                }
            double t = std::min(t_unc, t_max);
            if (!std::isfinite(t) || !(t > 0)) return false;
            VectorXd cand = x;
            for (int k = 0; k < ns; ++k) cand(S[static_cast<size_t>(k)]) = xs(k) + t * dir(k);
            if (t == t_max && crossing >= 0) cand(S[static_cast<size_t>(crossing)]) = 0.0;
            if (!(objective(inst, cand) < f_old)) return false;
            x = std::move(cand);
            r = inst.y - inst.A * x;
            return true;
        }

        z = es.eigenvectors() *
            es.eigenvalues().cwiseInverse().asDiagonal() *
            (es.eigenvectors().transpose() * rhs);
        if (!z.allFinite()) return false;

        std::vector<int> keep;
        std::vector<double> keep_sgn;
        for (int k = 0; k < ns; ++k)
            if (z(k) * sgn[static_cast<size_t>(k)] > 0) {
                keep.push_back(S[static_cast<size_t>(k)]);
                keep_sgn.push_back(sgn[static_cast<size_t>(k)]);
            }
        if (static_cast<int>(keep.size()) == ns) break;
        S = std::move(keep);
        sgn = std::move(keep_sgn);
    }
    if (S.empty()) return false;

    VectorXd cand = VectorXd::Zero(inst.N());
    for (size_t k = 0; k < S.size(); ++k) cand(S[k]) = z(static_cast<int>(k));
    if (!(objective(inst, cand) < f_old)) return false;
    x = std::move(cand);
    r = inst.y - inst.A * x;
    return true;
}

}  // namespace

LassoSolution solve_with_options(const LassoInstance& inst, const SolveOptions& opt) {
    inst.validate();
    if (!opt.fixed_effort && !(opt.gap_tol > 0)) throw DomainError("solve: gap_tol must be positive");

    const int N = inst.N();
    const double half = inst.lambda / 2;
    VectorXd colsq(N);
    for (int j = 0; j < N; ++j) colsq(j) = inst.A.col(j).squaredNorm();

    VectorXd x = VectorXd::Zero(N);
    VectorXd r = inst.y;
    long sweeps = 0;
    long updates = 0;
    long budget = opt.update_budget;
    if (opt.fixed_effort && budget <= 0) budget = opt.max_sweeps * static_cast<long>(N);
    std::vector<int> active;

    auto update_coord = [&](int j, double& maxdx) {
        if (colsq(j) == 0.0) return;  // zero column: x_j = 0 is optimal
        double z = inst.A.col(j).dot(r) + colsq(j) * x(j);
        double xn = soft_threshold(z, half) / colsq(j);
        double dx = xn - x(j);
        if (dx != 0.0) {
            r -= inst.A.col(j) * dx;
            x(j) = xn;
            maxdx = std::max(maxdx, std::abs(dx));
        }
    };

    auto budget_left = [&]() { return budget <= 0 || updates < budget; };

    LassoSolution sol;
    bool done = false;
    while (!done && sweeps < opt.max_sweeps && budget_left()) {
        // full pass
        double maxdx = 0.0;
        for (int j = 0; j < N; ++j) update_coord(j, maxdx);
        updates += N;
        ++sweeps;

        if (opt.fixed_effort) {
            if (maxdx < opt.dx_tol) break;
            // settle the active set before the next full pass
            active.clear();
            for (int j = 0; j < N; ++j)
                if (x(j) != 0.0) active.push_back(j);
            while (!active.empty() && budget_left()) {
                double mdx = 0.0;
                for (int j : active) update_coord(j, mdx);
                updates += static_cast<long>(active.size());
                if (mdx < opt.dx_tol) break;
            }
            continue;
        }

        active_manifold_jump(inst, x, r);

        r = inst.y - inst.A * x;  // shed accumulated drift before certifying
        double gap = duality_gap(inst, x, r);
        if (gap <= opt.gap_tol) {
            sol.gap_bound = gap;
            done = true;
        }
    }

    if (!done && !opt.fixed_effort)
        throw BudgetError("solve: duality gap did not reach tolerance within sweep budget");

    if (opt.fixed_effort) {
        r = inst.y - inst.A * x;
        sol.gap_bound = duality_gap(inst, x, r);
        sol.converged = false;
    }
    sol.x = std::move(x);
    sol.iterations = sweeps;
    sol.kkt_inf = kkt_residuals(inst, sol.x).first;
    return sol;
}

LassoSolution solve(const LassoInstance& inst, double gap_tol) {
    SolveOptions opt;
    opt.gap_tol = gap_tol;
    return solve_with_options(inst, opt);
}

}  // namespace lassocond
