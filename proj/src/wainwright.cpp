#include "lassocond/wainwright.hpp"

#include "lassocond/condition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lassocond {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// max absolute row sum
double infnorm(const MatrixXd& M) {
    if (M.rows() == 0 || M.cols() == 0) return 0.0;
    return M.cwiseAbs().rowwise().sum().maxCoeff();
}
}  // namespace

Covariance Covariance::matrix(MatrixXd m) {
    if (m.rows() != m.cols()) throw DimensionError("Covariance: matrix must be square");
    if (!m.isApprox(m.transpose())) throw DomainError("Covariance: matrix must be symmetric");
    Covariance c;
    c.isotropic = false;
    c.n = static_cast<int>(m.rows());
    c.dense = std::move(m);
    return c;
}

double Covariance::spectral() const {
    if (isotropic) return scale;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(dense, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double Covariance::inv_sqrt_infnorm() const {
    if (isotropic) {
        if (!(scale > 0)) throw SingularSigmaSS("Covariance: isotropic scale must be positive");
        return 1.0 / std::sqrt(scale);
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(dense);
    const auto& ev = es.eigenvalues();
    if (ev.minCoeff() < 1e-12 * ev.maxCoeff())
        throw SingularSigmaSS("Covariance: eigenvalue floor check failed for Sigma^{-1/2}");
    MatrixXd inv_sqrt =
        es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    return infnorm(inv_sqrt);
}

SupportSet EnsembleSpec::support() const {
    std::vector<int> idx;
    for (int i = 0; i < v.size(); ++i)
        if (v(i) != 0.0) idx.push_back(i + 1);
    return SupportSet(std::move(idx));
}

void EnsembleSpec::validate() const {
    if (Sigma.size() < 1) throw DimensionError("EnsembleSpec: empty covariance");
    if (v.size() != Sigma.size()) throw DimensionError("EnsembleSpec: v length must equal N");
    if (support().empty()) throw DomainError("EnsembleSpec: v must have nonempty support");
    if (!(lambda > 0)) throw DomainError("EnsembleSpec: lambda must be positive");
    if (eta < 0) throw DomainError("EnsembleSpec: eta must be >= 0");
    if (m < 1) throw DimensionError("EnsembleSpec: m must be >= 1");
    if (!(c3 > 0)) throw DomainError("EnsembleSpec: c3 must be positive");
}

MatrixXd submatrix(const MatrixXd& Sigma, const SupportSet& G, const SupportSet& H) {
    MatrixXd out(G.size(), H.size());
    auto g = G.zero_based();
    auto h = H.zero_based();
    for (size_t i = 0; i < g.size(); ++i) {
        if (g[i] >= Sigma.rows()) throw DimensionError("submatrix: row index out of range");
        for (size_t j = 0; j < h.size(); ++j) {
            if (h[j] >= Sigma.cols()) throw DimensionError("submatrix: column index out of range");
            out(static_cast<int>(i), static_cast<int>(j)) = Sigma(g[i], h[j]);
        }
    }
    return out;
}

WainwrightParams params(const EnsembleSpec& spec) {
    spec.validate();
    WainwrightParams p;
    const int N = spec.N();
    const SupportSet S = spec.support();
    const int s = S.size();
    const int nc = N - s;

    if (spec.Sigma.isotropic) {
        const double c = spec.Sigma.scale;
        if (!(c > 0)) throw SingularSigmaSS("params: isotropic Sigma_SS is singular");
        p.c_min = p.c_max = c;
        p.gamma = 1.0;
        p.rho_u_defined = nc >= 1;
        p.rho_l_defined = nc >= 2;
        p.rho_u = p.rho_u_defined ? c : kInf;
        p.rho_l = p.rho_l_defined ? c : kInf;
    } else {
        SupportSet Sc = S.complement(N);
        MatrixXd Sss = submatrix(spec.Sigma.dense, S, S);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(Sss);
        p.c_min = es.eigenvalues().minCoeff();
        p.c_max = es.eigenvalues().maxCoeff();
        if (p.c_min < 1e-12 * std::max(p.c_max, 1e-300))
            throw SingularSigmaSS("params: Sigma_SS is numerically singular");

        MatrixXd Scs = submatrix(spec.Sigma.dense, Sc, S);
        MatrixXd SssInv = Sss.ldlt().solve(MatrixXd::Identity(s, s));
        p.gamma = 1.0 - infnorm(Scs * SssInv);

        MatrixXd schur = submatrix(spec.Sigma.dense, Sc, Sc) - Scs * SssInv * Scs.transpose();
        p.rho_u_defined = nc >= 1;
        p.rho_u = p.rho_u_defined ? schur.diagonal().maxCoeff() : kInf;
        p.rho_l_defined = nc >= 2;
        if (p.rho_l_defined) {
            double best = kInf;
            for (int i = 0; i < nc; ++i)
                for (int j = 0; j < nc; ++j)
                    if (i != j) best = std::min(best, (schur(i, i) + schur(j, j) - 2 * schur(i, j)) / 2);
            p.rho_l = best;
        } else {
            p.rho_l = kInf;
        }
    }

    p.theta_u = p.rho_u / (p.c_min * p.gamma * p.gamma);
    p.theta_l = p.rho_l / (p.c_max * (2 - p.gamma * p.gamma));
    return p;
}

double phi_n(const EnsembleSpec& spec) {
    spec.validate();
    if (spec.N() < 2) throw DomainError("phi_n: needs N >= 2");
    if (spec.eta == 0.0) return kInf;  // noiseless
    WainwrightParams p = params(spec);
    return spec.lambda * spec.lambda /
           (8 * spec.eta * spec.eta * std::log(double(spec.N())) * p.c_min * p.theta_u * spec.m);
}

double m_bar_formula(double c_min, double theta_u, int m, int s, double log_n, double phi,
                     double eps) {
    return (1 + eps) / (c_min * theta_u * m) * (s * theta_u + m / (2 * log_n * phi));
}

double m_bar(const EnsembleSpec& spec, double eps) {
    double phi = phi_n(spec);
    if (!std::isfinite(phi) || !(phi > 0)) throw DomainError("m_bar: needs finite positive phi_N");
    WainwrightParams p = params(spec);
    return m_bar_formula(p.c_min, p.theta_u, spec.m, spec.s(), std::log(double(spec.N())), phi, eps);
}

double g_lambda(const EnsembleSpec& spec) {
    spec.validate();
    WainwrightParams p = params(spec);
    double inv_sqrt = spec.Sigma.inv_sqrt_infnorm();
    double noise = 20 * std::sqrt(spec.eta * spec.eta * std::log(double(spec.s())) / (p.c_min * spec.m));
    return spec.c3 * spec.lambda * inv_sqrt * inv_sqrt / (2 * spec.m) + noise;
}

namespace {

// Scans eps over a 512-point grid of (eps_lo, 1/2); feasible(eps) must be
// monotone-friendly but we simply keep the best margin.
template <typename F>
std::pair<bool, double> scan_epsilon(double eps_lo, F&& margin) {
    bool ok = false;
    double best_eps = 0.0, best_margin = -kInf;
    if (eps_lo >= 0.5) return {false, 0.0};  // empty window
    for (int k = 1; k <= 512; ++k) {
        double eps = eps_lo + (0.5 - eps_lo) * k / 513.0;
        double mg = margin(eps);
        if (mg > 0 && mg > best_margin) {
            ok = true;
            best_margin = mg;
            best_eps = eps;
        }
    }
    return {ok, best_eps};
}

}  // namespace

WainwrightParams check_assumptions(const EnsembleSpec& spec) {
    WainwrightParams p = params(spec);
    const int s = spec.s();
    const int N = spec.N();
    const int m = spec.m;
    p.phi_N = phi_n(spec);
    p.g_lambda = g_lambda(spec);

    p.a0_ok = p.gamma > 0;

    double sm = std::sqrt(double(s) / m);
    double eps_lo = std::max(8 * p.c_min * sm, sm);
    p.epsilon_rule = "max{8 C_min sqrt(s/m), sqrt(s/m)}";
    double rhs = 12.0 * s * std::log(double(N - s)) * p.theta_u;
    auto [ok, eps] = scan_epsilon(
        eps_lo, [&](double e) { return m * (1.0 / (1.0 + e) - 6.0 / p.phi_N) - rhs; });
    p.ai_ok = ok;
    p.epsilon_used = eps;

    double vmin = kInf;
    for (int j : spec.support().zero_based()) vmin = std::min(vmin, std::abs(spec.v(j)));
    p.aii_ok = p.g_lambda < vmin;
    return p;
}

KHat k_hat(const EnsembleSpec& spec) {
    spec.validate();
    WainwrightParams p = params(spec);
    const int s = spec.s();
    const int N = spec.N();
    const int m = spec.m;

    double vmin = kInf;
    for (int j : spec.support().zero_based()) vmin = std::min(vmin, std::abs(spec.v(j)));

    KHat out;
    double root_sum = std::sqrt(double(s)) + std::sqrt(double(m));
    out.sigma_hat = std::min({p.c_min * p.c_min / (4 * std::pow(root_sum, 4)), spec.lambda / 2,
                              vmin - g_lambda(spec)});
    if (!(out.sigma_hat > 0)) throw NonpositiveSigmaHat("k_hat: sigma_hat <= 0 (aii fails)");

    out.alpha_hat = std::max({1.0, std::sqrt(2.0 * m) * (spec.eta + p.c_max * spec.v.norm()),
                              std::sqrt(spec.Sigma.spectral()) *
                                  (3 * std::sqrt(double(m)) + 6 * std::sqrt(double(N)))});

    double q = q_poly(out.alpha_hat, out.sigma_hat, spec.lambda, N);
    out.k_hat = std::sqrt(double(m) * double(N)) *
                std::max({q / (out.sigma_hat * out.sigma_hat),
                          6 * out.alpha_hat / std::sqrt(out.sigma_hat), 1.0});
    return out;
}

SimpleVerdicts check_simple(const EnsembleSpec& spec) {
    spec.validate();
    const int s = spec.s();
    const int N = spec.N();
    const int m = spec.m;

    SimpleVerdicts v;
    v.c_bar = std::max(spec.c3, 1.0);
    v.eta_is_zero = spec.eta == 0.0;
    v.side_ok = std::log(N / 2.0) <= s && s <= N / 8.0 && m <= N / 9.0;

    double eps_lo = 8 * std::sqrt(double(s) / m);
    double rhs_of_eps = 12.0 * s * std::log(double(N - s));
    auto [ok, eps] = scan_epsilon(eps_lo, [&](double e) { return m - (1 + e) * rhs_of_eps; });
    v.i_ok = ok;
    v.epsilon_used = eps;

    double vmin = std::numeric_limits<double>::infinity();
    for (int j : spec.support().zero_based()) vmin = std::min(vmin, std::abs(spec.v(j)));
    v.ii_ok = v.c_bar * spec.lambda < 2.0 * m * vmin - 1.0 / (double(N) * N);
    v.iii_ok = spec.lambda >= 2.0 / (double(N) * N);
    return v;
}

}  // namespace lassocond
