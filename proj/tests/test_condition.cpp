#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lassocond/condition.hpp"
#include "lassocond/oracle1d.hpp"
#include "lassocond/rng.hpp"
#include "lassocond/solver.hpp"

#include <cmath>

using namespace lassocond;

namespace {

LassoInstance inst1(double y, std::vector<double> a, double lambda) {
    VectorXd yv(1);
    yv(0) = y;
    MatrixXd A(1, a.size());
    for (size_t j = 0; j < a.size(); ++j) A(0, static_cast<long>(j)) = a[j];
    return LassoInstance(yv, A, lambda);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("sigma1") {
    CHECK(sigma1(inst1(0, {1}, 1), VectorXd::Zero(1), SupportSet()) == 0.5);
    CHECK(sigma1(inst1(1, {1}, 2), VectorXd::Zero(1), SupportSet()) == 0.0);

    // S = {1}: slack of the off-support column at the closed-form minimiser
    auto inst = inst1(1, {0.9, 0.3}, 0.01);
    VectorXd x = solution_1d(Instance1D(1, inst.A.row(0).transpose(), 0.01));
    double expected = 0.005 - std::abs(0.3 * (0.9 * x(0) - 1));
    CHECK(sigma1(inst, x, SupportSet({1})) == doctest::Approx(expected).epsilon(1e-12));

    // complement empty: convention lambda/2
    CHECK(sigma1(inst1(1, {1}, 3), VectorXd::Zero(1), SupportSet({1})) == 1.5);
}

TEST_CASE("sigma2") {
    VectorXd y2 = VectorXd::Zero(2);
    MatrixXd D(2, 2);
    D << 2, 0, 0, 3;
    CHECK(sigma2(LassoInstance(y2, D, 1), SupportSet({1, 2})) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(sigma2(LassoInstance(y2, D, 1), SupportSet()) == kInf);

    MatrixXd ones(2, 2);
    ones << 1, 1, 1, 1;
    CHECK(sigma2(LassoInstance(y2, ones, 1), SupportSet({1, 2})) ==
          doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("sigma2 agrees with an independent eigensolver route") {
    Rng rng = Rng::stream(808, 0);
    for (int rep = 0; rep < 100; ++rep) {
        int m = 1 + int(rng.uniform01() * 7.999);
        int N = 1 + int(rng.uniform01() * 7.999);
        MatrixXd A(m, N);
        VectorXd y(m);
        for (int i = 0; i < m; ++i) {
            y(i) = rng.normal();
            for (int j = 0; j < N; ++j) A(i, j) = rng.normal();
        }
        LassoInstance inst(y, A, 1);
        std::vector<int> idx;
        for (int j = 1; j <= N; ++j)
            if (rng.uniform01() < 0.5) idx.push_back(j);
        if (idx.empty()) idx.push_back(1);
        SupportSet S(idx);
        if (S.size() > m) continue;  // sigma2 = 0 by shape, nothing to compare

        MatrixXd AS = inst.columns(S);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(AS.transpose() * AS);
        double ref = std::max(0.0, es.eigenvalues().minCoeff());
        double got = sigma2(inst, S);
        CHECK(std::abs(got - ref) <= 1e-10 * std::max(1.0, ref));
    }
}

TEST_CASE("sigma3") {
    VectorXd x(3);
    x << 0.5, 0, -0.2;
    auto inst = inst1(0, {1, 1, 1}, 1);
    CHECK(sigma3(inst, x, support_from_threshold(x, 0)) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(sigma3(inst, VectorXd::Zero(3), SupportSet()) == kInf);
    VectorXd tiny(1);
    tiny << 1e-9;
    CHECK(sigma3(inst1(0, {1}, 1), tiny, SupportSet({1})) == 1e-9);
}

TEST_CASE("q polynomial") {
    CHECK(q_poly(1, 0, 2, 1) == 96.0);
    CHECK(q_poly(1, 1, 2, 1) == doctest::Approx(136.0).epsilon(1e-15));
    CHECK(q_poly(2, 0, 1, 5) == 3072.0);
    CHECK_THROWS_AS(q_poly(0.5, 0, 1, 1), DomainError);
    CHECK_THROWS_AS(q_poly(1, -1, 1, 1), DomainError);
    CHECK_THROWS_AS(q_poly(1, 0, 0, 1), DomainError);
}

TEST_CASE("stsp lower bound formula") {
    CHECK(stsp_lower_bound(1, 0, 1, 1, 2) == 0.0);
    CHECK(stsp_lower_bound(1, 1, 1, 1, 2) == doctest::Approx(1.0 / 136).epsilon(1e-15));
    // at N = 4 the q polynomial itself changes: q(1,1) = 96 + 12(1+2*2) + 4 = 160
    CHECK(stsp_lower_bound(1, 1, 1, 4, 2) == doctest::Approx(0.5 / 160).epsilon(1e-15));
}

TEST_CASE("stsp lower bound is monotone in sigma and antitone in alpha") {
    for (double lambda : {0.01, 0.5, 2.0}) {
        double prev = -1;
        for (double sig = 0; sig <= 2.0; sig += 0.01) {
            double v = stsp_lower_bound(1.7, sig, 3, 5, lambda);
            CHECK(v >= prev - 1e-15);
            prev = v;
        }
        prev = kInf;
        for (double al = 1; al <= 20.0; al += 0.1) {
            double v = stsp_lower_bound(al, 0.8, 3, 5, lambda);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("certificate on a 1D instance vs the exact oracle") {
    auto inst = inst1(1, {0.9, 0.3}, 0.01);
    auto sol = solve(inst, 1e-14);
    auto cert = certificate(inst, sol, 1e-4);
    CHECK(cert.support_used == SupportSet({1}));
    CHECK(cert.stsp_lb > 0);
    CHECK(std::isfinite(cert.cond_ub));
    // the bound must sit below the exact stability support
    double exact = stsp_1d(Instance1D(1, inst.A.row(0).transpose(), 0.01));
    CHECK(cert.stsp_lb <= exact);
    CHECK(cert.cond_ub * cert.stsp_lb == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("certificate flags duplicate columns as ill-posed for the bound") {
    auto inst = inst1(1, {1, 1}, 0.01);
    auto sol = solve(inst, 1e-12);
    auto cert = certificate(inst, sol, 1e-6);
    // whichever of the tied minimisers the solver lands on, a sigma vanishes:
    // the split solution kills sigma2, a one-sided solution leaves the twin
    // column exactly on the equicorrelation boundary and kills sigma1
    CHECK(cert.sigma == 0.0);
    CHECK(cert.stsp_lb == 0.0);
    CHECK(std::isinf(cert.cond_ub));
}

TEST_CASE("certificate of the zero solution") {
    auto inst = inst1(0, {1}, 0.8);
    auto sol = solve(inst, 1e-12);
    auto cert = certificate(inst, sol, 1e-9);
    CHECK(cert.support_used.empty());
    CHECK(cert.sigma == doctest::Approx(0.4).epsilon(1e-12));  // min{lambda/2, inf, inf}
    CHECK(cert.stsp_lb > 0);
}

TEST_CASE("certificate refuses ambiguous thresholding") {
    auto inst = inst1(1, {0.9, 0.3}, 0.01);
    LassoSolution sol = solve(inst, 1e-6);
    sol.gap_bound = 1e-2;  // large uncertainty band around tau
    CHECK_THROWS_AS(certificate(inst, sol, sol.x.cwiseAbs().maxCoeff()), UncertainSupport);
}

TEST_CASE("probe_condition_lb") {
    auto inst = inst1(1, {0.9, 0.3}, 0.01);
    CHECK_FALSE(probe_condition_lb(inst, 0.1, 0, 1).found_change);

    auto sol = solve(inst, 1e-14);
    auto cert = certificate(inst, sol, 1e-4);
    REQUIRE(cert.stsp_lb > 0);
    auto probe = probe_condition_lb(inst, 0.99 * cert.stsp_lb, 100, 5);
    CHECK_FALSE(probe.found_change);

    // duplicate columns: any radius finds a change
    auto dup = probe_condition_lb(inst1(1, {1, 1}, 0.01), 1e-6, 50, 6);
    CHECK(dup.found_change);
    CHECK(dup.cond_lb == doctest::Approx(1e6).epsilon(1e-12));
}
