#pragma once

#include "lassocond/types.hpp"

namespace lassocond {

// Covariance of the Gaussian row ensemble. The isotropic form c*I_N is kept
// implicit so parameter formulas stay usable at large N without an N x N
// matrix in memory.
struct Covariance {
    bool isotropic = true;
    double scale = 1.0;  // c in c*I_N
    int n = 0;
    MatrixXd dense;  // used when !isotropic

    static Covariance identity(int n) { return Covariance{true, 1.0, n, {}}; }
    static Covariance iso(double c, int n) { return Covariance{true, c, n, {}}; }
    static Covariance matrix(MatrixXd m);

    int size() const { return isotropic ? n : static_cast<int>(dense.rows()); }
    double operator()(int i, int j) const {
        return isotropic ? (i == j ? scale : 0.0) : dense(i, j);
    }
    double spectral() const;       // ||Sigma||_2
    double inv_sqrt_infnorm() const;  // ||Sigma^{-1/2}||_inf, max abs row sum
};

struct EnsembleSpec {
    Covariance Sigma;
    VectorXd v;          // true predictor; S = supp(v), s = |S| >= 1
    double eta = 0.0;    // noise std
    int m = 1;
    double lambda = 1.0;
    double c3 = 1.0;     // configurable stand-in for the unspecified universal constant

    SupportSet support() const;
    int s() const { return support().size(); }
    int N() const { return Sigma.size(); }
    void validate() const;
};

struct WainwrightParams {
    double c_min = 0.0, c_max = 0.0;
    double gamma = 0.0;
    double rho_l = 0.0, rho_u = 0.0;
    double theta_l = 0.0, theta_u = 0.0;
    bool rho_l_defined = true;  // false when |S^c| < 2 (pairwise min over empty set)
    bool rho_u_defined = true;
    double phi_N = 0.0;
    double g_lambda = 0.0;
    double sigma_hat = 0.0, alpha_hat = 0.0, k_hat = 0.0;
    bool a0_ok = false, ai_ok = false, aii_ok = false;
    double epsilon_used = 0.0;      // witness found by the (ai) scan, 0 if none
    std::string epsilon_rule;       // which lower threshold for epsilon was applied
    bool constants_assumed = true;  // verdicts depend on the configured c3
};

// Sigma restricted to rows G and columns H (both 1-based index sets).
MatrixXd submatrix(const MatrixXd& Sigma, const SupportSet& G, const SupportSet& H);

// Structural covariance parameters C_min, C_max, gamma, rho_l/u, theta_l/u.
// Throws SingularSigmaSS when Sigma_SS is numerically singular.
WainwrightParams params(const EnsembleSpec& spec);

// lambda^2 / (8 eta^2 ln(N) C_min theta_u m); +inf for eta = 0 (noiseless).
double phi_n(const EnsembleSpec& spec);

// (1+eps)/(C_min theta_u m) * (s theta_u + m / (2 ln(N) phi_N)).
double m_bar(const EnsembleSpec& spec, double eps);
double m_bar_formula(double c_min, double theta_u, int m, int s, double log_n, double phi,
                     double eps);

// c3 lambda ||Sigma^{-1/2}||_inf^2 / (2m) + 20 sqrt(eta^2 ln(s) / (C_min m)).
double g_lambda(const EnsembleSpec& spec);

// Fills the a0/ai/aii verdicts; the epsilon in (ai) is existentially
// quantified, resolved by a 512-point scan of (max{8 C_min sqrt(s/m),
// sqrt(s/m)}, 1/2).
WainwrightParams check_assumptions(const EnsembleSpec& spec);

struct KHat {
    double sigma_hat = 0.0;
    double alpha_hat = 0.0;
    double k_hat = 0.0;
};

// sigma_hat = min{C_min^2/(4(sqrt s + sqrt m)^4), lambda/2, min|v_j| - g(lambda)},
// alpha_hat = max{1, sqrt(2m)(eta + C_max ||v||_2), ||Sigma||_2^{1/2}(3 sqrt m + 6 sqrt N)},
// k_hat = sqrt(mN) max{q(alpha_hat, sigma_hat)/sigma_hat^2, 6 alpha_hat/sqrt(sigma_hat), 1}.
// Throws NonpositiveSigmaHat when sigma_hat <= 0.
KHat k_hat(const EnsembleSpec& spec);

struct SimpleVerdicts {
    bool side_ok = false;  // ln(N/2) <= s <= N/8 and m <= N/9
    bool i_ok = false;     // m > (1+eps) 12 s ln(N-s) for some eps in (0,1/2), eps > 8 sqrt(s/m)
    bool ii_ok = false;    // cbar lambda < 2m min|v_j| - 1/N^2
    bool iii_ok = false;   // lambda >= 2/N^2
    double epsilon_used = 0.0;
    double c_bar = 1.0;
    bool eta_is_zero = true;  // the statement is a noiseless one
    bool all() const { return side_ok && i_ok && ii_ok && iii_ok; }
};

SimpleVerdicts check_simple(const EnsembleSpec& spec);

}  // namespace lassocond
