#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lassocond/certify.hpp"
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

}  // namespace

TEST_CASE("dyadic_truncate rounds toward zero") {
    CHECK(dyadic_truncate(1.0 / 3.0, 2) == 0.25);
    CHECK(dyadic_truncate(-1.0 / 3.0, 2) == -0.25);
    CHECK(dyadic_truncate(0.75, 2) == 0.75);

    CHECK(dyadic_truncate(Rational(1, 3), 2) == Rational(1, 4));
    CHECK(dyadic_truncate(Rational(-1, 3), 2) == Rational(-1, 4));
    CHECK(dyadic_truncate(Rational(3, 4), 2) == Rational(3, 4));
}

TEST_CASE("dyadic reader satisfies the 2^{-n} contract exactly") {
    ExactInstance e;
    e.lambda = 0.01;
    e.y = {Rational(1, 3)};
    e.A = {{Rational(9, 10), Rational(-2, 7), Rational(1, 130)}};
    auto rd = dyadic_reader(e);
    for (int n = 0; n <= 40; ++n) {
        auto [y, A] = rd.read(n);
        Rational bound(1, boost::multiprecision::cpp_int(1) << n);
        CHECK(abs(Rational(y(0)) - e.y[0]) <= bound);
        for (int j = 0; j < 3; ++j)
            CHECK(abs(Rational(A(0, j)) - e.A[0][static_cast<size_t>(j)]) <= bound);
    }
}

TEST_CASE("certified_select on a comfortable 1D instance") {
    auto inst = inst1(1, {0.9, 0.3}, 0.01);
    auto rd = dyadic_reader(ExactInstance::from_double(inst));
    auto out = certified_select(rd, 30);
    REQUIRE(out.certified);
    CHECK(out.support == SupportSet({1}));
    // the certificate radius is the conservative polynomial bound, so the
    // certification depth is governed by it, not by the exact stsp
    CHECK(out.precision_used <= 26);
    CHECK(out.cert.stsp_lb > std::pow(2.0, -out.precision_used));
}

TEST_CASE("certified_select abstains forever on duplicate columns") {
    auto inst = inst1(1, {1, 1}, 0.01);
    auto rd = dyadic_reader(ExactInstance::from_double(inst));
    auto out = certified_select(rd, 14);
    CHECK_FALSE(out.certified);
    CHECK(out.max_precision_tried == 14);
}

TEST_CASE("certification depth is floored by the condition number") {
    // stsp = 2^{-20}: no sound certificate can be issued before level
    // ceil(log2(1/stsp)) - 1 = 19, whatever bound is used
    double gap = std::pow(2.0, -19);  // delta/2 = 2^{-20}
    auto inst = inst1(1, {0.9, 0.9 - gap, 0.3}, 0.01);
    double exact = stsp_1d(Instance1D(1, inst.A.row(0).transpose(), 0.01));
    REQUIRE(exact == doctest::Approx(std::pow(2.0, -20)).epsilon(1e-12));

    auto rd = dyadic_reader(ExactInstance::from_double(inst));
    auto shallow = certified_select(rd, 18);
    CHECK_FALSE(shallow.certified);  // 2^{-n} >= stsp >= stsp_lb for n <= 19

    // with the conservative certificate the instance may stay uncertified far
    // deeper; whenever an output does appear it must carry precision >= 19
    auto out = certified_select(rd, 40);
    if (out.certified) {
        CHECK(out.support == SupportSet({1}));
        CHECK(out.precision_used >= 19);
    }
}

namespace {

// one certification attempt at exactly level n
bool certifies_at(const DigitReader& rd, int n) {
    auto [y, A] = rd.read(n);
    LassoInstance inst(std::move(y), std::move(A), rd.lambda);
    LassoSolution sol;
    try {
        sol = solve(inst, default_gap_tol(n));
    } catch (const BudgetError&) {
        return false;
    }
    try {
        auto cert = certificate(inst, sol, std::pow(2.0, -0.5 * n));
        return std::pow(2.0, -n) < cert.stsp_lb;
    } catch (const UncertainSupport&) {
        return false;
    }
}

}  // namespace

TEST_CASE("monotone certification in the precision level") {
    Rng rng = Rng::stream(606, 0);
    int tested = 0;
    for (int rep = 0; rep < 60 && tested < 20; ++rep) {
        int N = 2 + int(rng.uniform01() * 5);
        std::vector<double> a(static_cast<size_t>(N));
        for (auto& v : a) v = rng.normal();
        auto inst = inst1(1.0 + rng.uniform01(), a, 0.2);
        auto rd = dyadic_reader(ExactInstance::from_double(inst));
        auto out = certified_select(rd, 24);
        if (!out.certified) continue;
        ++tested;
        for (int extra = 1; extra <= 4; ++extra)
            CHECK(certifies_at(rd, out.precision_used + extra));
    }
    CHECK(tested >= 10);
}

TEST_CASE("shrink_offsupport") {
    auto inst = inst1(1, {0.8, 0.6}, 0.01);
    auto shrunk = shrink_offsupport(inst, SupportSet({1}), 0.5);
    CHECK(shrunk.A(0, 0) == 0.8);
    CHECK(shrunk.A(0, 1) == 0.3);

    auto same = shrink_offsupport(inst, SupportSet({1, 2}), 0.5);
    CHECK(same.A == inst.A);

    CHECK_THROWS_AS(shrink_offsupport(inst, SupportSet({1}), 0.0), DomainError);
    CHECK_THROWS_AS(shrink_offsupport(inst, SupportSet({1}), 1.0), DomainError);
}

TEST_CASE("shrinking lifts sigma1 to at least delta·lambda/2") {
    Rng rng = Rng::stream(11, 7);
    for (int rep = 0; rep < 20; ++rep) {
        int m = 2 + int(rng.uniform01() * 2.999);
        int N = 3 + int(rng.uniform01() * 3.999);
        MatrixXd A(m, N);
        VectorXd y(m);
        for (int i = 0; i < m; ++i) {
            y(i) = rng.normal();
            for (int j = 0; j < N; ++j) A(i, j) = rng.normal();
        }
        LassoInstance inst(y, A, 0.6);
        auto sol = solve(inst, 1e-13);
        SupportSet W = support_from_threshold(sol.x, 1e-7);
        if (W.size() == N) continue;  // nothing off-support to scale

        double delta = 0.25;
        auto shrunk = shrink_offsupport(inst, W, delta);
        // x stays the minimiser of the shrunk problem, and its off-support
        // slack is now at least delta*lambda/2
        CHECK(kkt_residuals(shrunk, sol.x).first <= 1e-5);
        CHECK(sigma1(shrunk, sol.x, W) >= delta * inst.lambda / 2 - 1e-6);
    }
}

namespace {

AdversaryKit demo_kit() {
    // centre with stsp = 2e-5 < 2^{-13}; r inside (2 stsp, 2^{-13})
    auto center = inst1(1.0, {0.9, 0.9 - 4e-5, 0.3}, 0.01);
    return build_adversary(center, 1e-4, 12);
}

}  // namespace

TEST_CASE("build_adversary constructs a certified witness pair") {
    auto kit = demo_kit();
    CHECK(kit.s1 == SupportSet({1}));
    CHECK(kit.s2 == SupportSet({2}));
    CHECK(kit.center_stsp == doctest::Approx(2e-5).epsilon(1e-6));

    Instance1D d1(kit.d1.y(0), kit.d1.A.row(0).transpose(), kit.d1.lambda);
    Instance1D d2(kit.d2.y(0), kit.d2.A.row(0).transpose(), kit.d2.lambda);
    CHECK(support_1d(d1) == kit.s1);
    CHECK(support_1d(d2) == kit.s2);
    CHECK(stsp_1d(d1) > 0);
    CHECK(stsp_1d(d2) > 0);
    CHECK(stsp_1d(d2) <= std::pow(2.0, -13));

    // witness entries are dyadic at k+8 fractional bits
    for (int j = 0; j < 3; ++j) {
        CHECK(dyadic_truncate(kit.d2.A(0, j), 20) == kit.d2.A(0, j));
        CHECK(dyadic_truncate(kit.d1.A(0, j), 20) == kit.d1.A(0, j));
    }
}

TEST_CASE("build_adversary rejects a hypothesis-violating k") {
    auto center = inst1(1.0, {0.9, 0.9 - 4e-5, 0.3}, 0.01);
    // stsp = 2e-5 but 2^{-k-1} <= stsp for k = 17
    CHECK_THROWS_AS(build_adversary(center, 1e-6, 17), DomainError);
    // r outside (stsp, 2^{-k-1})
    CHECK_THROWS_AS(build_adversary(center, 1e-2, 12), DomainError);
}

TEST_CASE("served digits stay within 2^{-n} for sampled ball points") {
    auto kit = demo_kit();
    Rng rng = Rng::stream(5150, 0);
    for (int s = 0; s < 100; ++s) {
        LassoInstance iota = kit.center;
        iota.y(0) += (2 * rng.uniform01() - 1) * kit.radius;
        for (int j = 0; j < 3; ++j) iota.A(0, j) += (2 * rng.uniform01() - 1) * kit.radius;
        for (int n = 1; n <= kit.k; ++n)
            CHECK_NOTHROW(kit.delta1_info(iota, n));  // inline hard check would throw
        CHECK_NOTHROW(kit.delta1_info(iota, kit.k + 5));
    }
}

TEST_CASE("digit blindness: inputs sharing k digit levels get identical outputs") {
    auto kit = demo_kit();
    LassoInstance p = kit.center, q = kit.center;
    p.A(0, 2) += 0.3 * kit.center_stsp;
    q.A(0, 2) -= 0.3 * kit.center_stsp;  // both inside the inner ball

    auto victim = truncate_solve_victim(1e-6);
    auto outp = victim(cap_reader(kit.reader_for(p), kit.k));
    auto outq = victim(cap_reader(kit.reader_for(q), kit.k));
    REQUIRE(outp.has_value());
    REQUIRE(outq.has_value());
    CHECK(*outp == *outq);
}

TEST_CASE("demo_failure: solver fooled everywhere, certified selector abstains") {
    auto kit = demo_kit();
    auto bad = demo_failure(kit, truncate_solve_victim(1e-6), 25, 77);
    CHECK(bad.samples == 25);
    CHECK(bad.wrong == 25);

    auto safe = demo_failure(kit, capped_certified_victim(), 25, 77);
    CHECK(safe.abstained == 25);
    CHECK(safe.wrong == 0);

    auto none = demo_failure(kit, truncate_solve_victim(1e-6), 0, 1);
    CHECK(none.samples == 0);
    CHECK(none.detail.empty());
}

TEST_CASE("certified selections never contradict the exact oracle") {
    Rng rng = Rng::stream(2468, 0);
    int certified = 0;
    for (int rep = 0; rep < 200; ++rep) {
        int N = 2 + int(rng.uniform01() * 6);
        std::vector<double> a(static_cast<size_t>(N));
        for (auto& v : a) v = rng.normal();
        double y = 2 * rng.normal();
        auto inst = inst1(y, a, 0.15);
        SupportSet truth;
        try {
            truth = support_1d(Instance1D(y, inst.A.row(0).transpose(), 0.15));
        } catch (const TieError&) {
            continue;
        }
        auto out = certified_select(dyadic_reader(ExactInstance::from_double(inst)), 34);
        if (out.certified) {
            ++certified;
            CHECK(out.support == truth);
        }
    }
    CHECK(certified >= 100);  // the selector must actually certify often
}
