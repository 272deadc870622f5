#include "lassocond/condition.hpp"

#include "lassocond/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lassocond {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double sigma1(const LassoInstance& inst, const VectorXd& x, const SupportSet& S) {
    SupportSet Sc = S.complement(inst.N());
    if (Sc.empty()) return inst.lambda / 2;
    VectorXd r = inst.A * x - inst.y;
    double worst = 0.0;
    for (int j : Sc.zero_based()) worst = std::max(worst, std::abs(inst.A.col(j).dot(r)));
    return inst.lambda / 2 - worst;
}

double sigma2(const LassoInstance& inst, const SupportSet& S) {
    if (S.empty()) return kInf;
    MatrixXd AS = inst.columns(S);
    Eigen::JacobiSVD<MatrixXd> svd(AS);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (AS.cols() > AS.rows()) smin = 0.0;  // rank-deficient by shape
    return smin * smin;
}

double sigma3(const LassoInstance& inst, const VectorXd& x, const SupportSet& S) {
    (void)inst;
    if (S.empty()) return kInf;
    double smallest = kInf;
    for (int j : S.zero_based()) smallest = std::min(smallest, std::abs(x(j)));
    return smallest;
}

double q_poly(double nu, double xi, double lambda, int N) {
    if (!(nu >= 1)) throw DomainError("q_poly: nu must be >= 1");
    if (!(xi >= 0)) throw DomainError("q_poly: xi must be >= 0");
    if (!(lambda > 0)) throw DomainError("q_poly: lambda must be positive");
    double nu3 = nu * nu * nu;
    return 96 * nu3 * nu * nu + 12 * nu3 * (1 + lambda * std::sqrt(double(N))) * std::sqrt(xi) +
           xi * (2 * nu3 / lambda + 3 * nu);
}

double stsp_lower_bound(double alpha, double sigma, int m, int N, double lambda) {
    if (!(alpha >= 1)) throw DomainError("stsp_lower_bound: alpha must be >= 1");
    if (sigma <= 0) return 0.0;
    double q = q_poly(alpha, sigma, lambda, N);
    double val = std::min({sigma * sigma / q, std::sqrt(sigma) / (6 * alpha), alpha});
    return val / std::sqrt(double(m) * double(N));
}

SigmaCertificate certificate(const LassoInstance& inst, const LassoSolution& sol, double tau) {
    if (tau < 0) throw DomainError("certificate: tau must be >= 0");
    SigmaCertificate cert;
    cert.tau = tau;
    cert.gap_bound = sol.gap_bound;
    cert.alpha = compute_norms(inst).trunc2;

    SupportSet S = support_from_threshold(sol.x, tau);
    cert.support_used = S;

    double s2 = sigma2(inst, S);
    cert.sigma2 = s2;

    // l2 error transfer from the duality gap; infinite when A_S is singular
    double eps_x = 0.0;
    if (!S.empty()) eps_x = s2 > 0 ? 2 * std::sqrt(sol.gap_bound) / std::sqrt(s2) : kInf;
    cert.x_margin = eps_x;

    if (std::isfinite(eps_x)) {
        for (int i = 0; i < sol.x.size(); ++i) {
            double v = std::abs(sol.x(i));
            if (v >= tau - eps_x && v <= tau + eps_x)
                throw UncertainSupport("certificate: |x_i| within the error band of tau");
        }
    }

    // Evaluate the sigmas on the thresholded vector so sub-tau residue cannot
    // leak into the residual or the support magnitudes.
    VectorXd xt = sol.x;
    for (int i = 0; i < xt.size(); ++i)
        if (std::abs(xt(i)) <= tau) xt(i) = 0.0;

    double raw_s1 = sigma1(inst, xt, S);
    double raw_s3 = sigma3(inst, xt, S);

    if (S.empty()) {
        // x = 0 is a minimiser iff ||A^T y||_inf <= lambda/2, which sigma1
        // measures directly; no solver margin is needed.
        cert.sigma1 = raw_s1;
        cert.sigma3 = raw_s3;
    } else {
        double colmax = 0.0;
        for (int j = 0; j < inst.N(); ++j) colmax = std::max(colmax, inst.A.col(j).norm());
        cert.sigma1 = raw_s1 - spectral_norm(inst.A) * colmax * eps_x;
        cert.sigma3 = raw_s3 - eps_x;
    }

    cert.sigma = std::max(0.0, std::min({cert.sigma1, s2 * s2, cert.sigma3}));
    cert.stsp_lb = stsp_lower_bound(cert.alpha, cert.sigma, inst.m(), inst.N(), inst.lambda);
    cert.cond_ub = cert.stsp_lb > 0 ? 1.0 / cert.stsp_lb : kInf;
    return cert;
}

ProbeResult probe_condition_lb(const LassoInstance& inst, double radius, int n_samples,
                               std::uint64_t seed) {
    if (!(radius > 0)) throw DomainError("probe_condition_lb: radius must be positive");
    ProbeResult res;
    if (n_samples <= 0) return res;

    const double tau = 1e-9;
    SupportSet base = support_from_threshold(solve(inst, 1e-12).x, tau);

    for (int s = 0; s < n_samples; ++s) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s));
        LassoInstance pert = inst;
        bool corner = (s % 2 == 0);  // corners find exchanges, box draws the rest
        auto bump = [&](double v) {
            double u = rng.uniform01();
            if (corner) return v + (u < 0.5 ? -radius : radius);
            return v + (2 * u - 1) * radius;
        };
        for (int i = 0; i < pert.y.size(); ++i) pert.y(i) = bump(pert.y(i));
        for (int i = 0; i < pert.A.rows(); ++i)
            for (int j = 0; j < pert.A.cols(); ++j) pert.A(i, j) = bump(pert.A(i, j));

        SupportSet sup = support_from_threshold(solve(pert, 1e-12).x, tau);
        if (sup != base) {
            res.found_change = true;
            ++res.changes;
        }
    }
    if (res.found_change) res.cond_lb = 1.0 / radius;
    return res;
}

}  // namespace lassocond
