#include "lassocond/certify.hpp"

#include "lassocond/oracle1d.hpp"
#include "lassocond/rng.hpp"
#include "lassocond/solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace lassocond {

using boost::multiprecision::cpp_int;

ExactInstance ExactInstance::from_double(const LassoInstance& inst) {
    inst.validate();
    ExactInstance e;
    e.lambda = inst.lambda;
    e.y.reserve(static_cast<size_t>(inst.m()));
    for (int i = 0; i < inst.m(); ++i) e.y.emplace_back(inst.y(i));
    e.A.resize(static_cast<size_t>(inst.m()));
    for (int i = 0; i < inst.m(); ++i) {
        e.A[static_cast<size_t>(i)].reserve(static_cast<size_t>(inst.N()));
        for (int j = 0; j < inst.N(); ++j) e.A[static_cast<size_t>(i)].emplace_back(inst.A(i, j));
    }
    return e;
}

double dyadic_truncate(double value, int n) {
    if (n < 0) throw DomainError("dyadic_truncate: n must be >= 0");
    // values with |v| 2^n beyond 2^53 are already on the dyadic grid
    return std::ldexp(std::trunc(std::ldexp(value, n)), -n);
}

Rational dyadic_truncate(const Rational& value, int n) {
    if (n < 0) throw DomainError("dyadic_truncate: n must be >= 0");
    cpp_int scale = cpp_int(1) << n;
    cpp_int t = numerator(value) * scale / denominator(value);  // truncates toward zero
    return Rational(t, scale);
}

namespace {

double rational_to_double_exact(const Rational& v) {
    double d = v.convert_to<double>();
    if (Rational(d) != v)
        throw DomainError("dyadic_reader: truncation not exactly representable in double");
    return d;
}

}  // namespace

DigitReader dyadic_reader(ExactInstance inst) {
    auto shared = std::make_shared<ExactInstance>(std::move(inst));
    DigitReader rd;
    rd.m = shared->m();
    rd.N = shared->N();
    rd.lambda = shared->lambda;
    rd.read = [shared](int n) {
        VectorXd y(shared->m());
        MatrixXd A(shared->m(), shared->N());
        for (int i = 0; i < shared->m(); ++i) {
            y(i) = rational_to_double_exact(dyadic_truncate(shared->y[static_cast<size_t>(i)], n));
            for (int j = 0; j < shared->N(); ++j)
                A(i, j) = rational_to_double_exact(
                    dyadic_truncate(shared->A[static_cast<size_t>(i)][static_cast<size_t>(j)], n));
        }
        return std::make_pair(std::move(y), std::move(A));
    };
    return rd;
}

DigitReader cap_reader(const DigitReader& reader, int cap) {
    DigitReader rd = reader;
    rd.max_level = cap;
    auto inner = reader.read;
    rd.read = [inner, cap](int n) {
        if (n > cap) throw DomainError("cap_reader: digit level above the precision cap");
        return inner(n);
    };
    return rd;
}

double default_gap_tol(int n) { return std::max(std::pow(4.0, -n), 1e-14); }

SelectionOutcome certified_select(const DigitReader& reader, int n_max,
                                  const GapTolRule& gap_tol_rule) {
    SelectionOutcome out;
    for (int n = 1; n <= n_max; ++n) {
        out.max_precision_tried = n;
        auto [y, A] = reader.read(n);
        LassoInstance inst(std::move(y), std::move(A), reader.lambda);
        LassoSolution sol;
        try {
            sol = solve(inst, gap_tol_rule(n));
        } catch (const BudgetError&) {
            continue;  // cannot certify at this level
        }
        double tau = std::pow(2.0, -0.5 * n);
        SigmaCertificate cert;
        try {
            cert = certificate(inst, sol, tau);
        } catch (const UncertainSupport&) {
            continue;
        }
        // Everything within stsp_lb of the read pair shares this support and
        // the true pair is within 2^{-n} of it.
        if (std::pow(2.0, -n) < cert.stsp_lb) {
            out.certified = true;
            out.support = cert.support_used;
            out.precision_used = n;
            out.cert = cert;
            return out;
        }
    }
    return out;
}

LassoInstance shrink_offsupport(const LassoInstance& inst, const SupportSet& W, double delta) {
    if (!(delta > 0 && delta < 1)) throw DomainError("shrink_offsupport: delta must be in (0,1)");
    LassoInstance out = inst;
    for (int j = 0; j < inst.N(); ++j)
        if (!W.contains(j + 1)) out.A.col(j) *= (1.0 - delta);
    return out;
}

namespace {

LassoInstance truncate_instance(const LassoInstance& inst, int n) {
    LassoInstance out = inst;
    for (int i = 0; i < out.y.size(); ++i) out.y(i) = dyadic_truncate(out.y(i), n);
    for (int i = 0; i < out.A.rows(); ++i)
        for (int j = 0; j < out.A.cols(); ++j) out.A(i, j) = dyadic_truncate(out.A(i, j), n);
    return out;
}

Instance1D as_1d(const LassoInstance& inst) {
    if (inst.m() != 1) throw DomainError("adversary: only m = 1 instances are supported");
    return Instance1D(inst.y(0), inst.A.row(0).transpose(), inst.lambda);
}

double max_dist(const LassoInstance& a, const LassoInstance& b) {
    return std::max((a.y - b.y).cwiseAbs().maxCoeff(), (a.A - b.A).cwiseAbs().maxCoeff());
}

}  // namespace

AdversaryKit build_adversary(const LassoInstance& center, double r, int k) {
    if (k < 1) throw DomainError("build_adversary: k must be >= 1");
    Instance1D one = as_1d(center);
    const double stsp_c = stsp_1d(one);
    const double pow_k1 = std::pow(2.0, -k - 1);
    if (!(stsp_c > 0)) throw SearchFailed("build_adversary: centre is ill-posed (stsp = 0)");
    if (!(stsp_c < pow_k1))
        throw DomainError("build_adversary: needs 1/C_UL(center) < 2^{-k-1}");
    if (!(r > stsp_c && r < pow_k1))
        throw DomainError("build_adversary: needs r in (1/C_UL, 2^{-k-1})");

    AdversaryKit kit;
    kit.center = center;
    kit.k = k;
    kit.radius = r;
    kit.center_stsp = stsp_c;
    kit.s1 = support_1d(one);
    if (kit.s1.empty())
        throw SearchFailed("build_adversary: shrink construction needs a nonempty centre support");

    const int prec = k + 8;
    const double trunc_err = std::pow(2.0, -prec);

    kit.d1 = truncate_instance(center, prec);
    {
        Instance1D d1 = as_1d(kit.d1);
        if (max_dist(kit.d1, center) > r || support_1d(d1) != kit.s1 || !(stsp_1d(d1) > 0))
            throw SearchFailed("build_adversary: truncated centre lost its certified support");
    }

    // Witness with a different support: shrink every column outside the
    // runner-up until leadership flips, staying inside the ball.
    const int istar = delta_gap(one.a).argmax_index;  // 1-based
    int runner = -1;
    double second = -1.0;
    for (int j = 0; j < one.N(); ++j)
        if (j + 1 != istar && std::abs(one.a(j)) > second) {
            second = std::abs(one.a(j));
            runner = j + 1;
        }
    const double amax = std::abs(one.a(istar - 1));
    const double gap = amax - second;
    SupportSet W({runner});

    bool found = false;
    for (double slack = 1.02; slack <= 64.0 && !found; slack *= 1.35) {
        double delta = slack * gap / amax;
        if (!(delta > 0 && delta < 1)) continue;
        if (delta * amax + trunc_err > r) break;  // out of room inside the ball
        LassoInstance cand = truncate_instance(shrink_offsupport(center, W, delta), prec);
        Instance1D c1 = as_1d(cand);
        try {
            if (support_1d(c1) != W) continue;
        } catch (const TieError&) {
            continue;
        }
        double st = stsp_1d(c1);
        // d2 must be certifiable (stsp > 0) yet invisible to precision-k
        // certification, which is what keeps the capped selector abstaining.
        if (st > 0 && st <= pow_k1 && max_dist(cand, center) <= r) {
            kit.d2 = cand;
            kit.s2 = W;
            found = true;
        }
    }
    if (!found)
        throw SearchFailed("build_adversary: no dyadic witness with a different support in the ball");
    return kit;
}

std::pair<VectorXd, MatrixXd> AdversaryKit::delta1_info(const LassoInstance& iota, int n) const {
    const LassoInstance* served = nullptr;
    LassoInstance honest;
    if (n <= k) {
        SupportSet s_iota;
        try {
            s_iota = support_1d(as_1d(iota));
        } catch (const TieError&) {
            // measure-zero boundary; serve the d1 branch
        }
        served = (s_iota == s1) ? &d2 : &d1;
    } else {
        honest = truncate_instance(iota, n);
        served = &honest;
    }

    // hard Delta_1 soundness check, exact in rational arithmetic
    Rational bound = Rational(1, cpp_int(1) << n);
    for (int i = 0; i < iota.m(); ++i) {
        Rational diff = Rational(served->y(i)) - Rational(iota.y(i));
        if (abs(diff) > bound) throw std::logic_error("delta1_info: 2^{-n} bound violated on y");
        for (int j = 0; j < iota.N(); ++j) {
            Rational da = Rational(served->A(0, j)) - Rational(iota.A(0, j));
            if (abs(da) > bound) throw std::logic_error("delta1_info: 2^{-n} bound violated on A");
        }
    }
    return {served->y, served->A};
}

DigitReader AdversaryKit::reader_for(const LassoInstance& iota) const {
    DigitReader rd;
    rd.m = iota.m();
    rd.N = iota.N();
    rd.lambda = iota.lambda;
    AdversaryKit kit = *this;
    LassoInstance input = iota;
    rd.read = [kit, input](int n) { return kit.delta1_info(input, n); };
    return rd;
}

Victim truncate_solve_victim(double tau) {
    return [tau](const DigitReader& rd) -> std::optional<SupportSet> {
        auto [y, A] = rd.read(rd.max_level);
        LassoInstance inst(std::move(y), std::move(A), rd.lambda);
        return support_from_threshold(solve(inst, 1e-12).x, tau);
    };
}

Victim capped_certified_victim() {
    return [](const DigitReader& rd) -> std::optional<SupportSet> {
        SelectionOutcome out = certified_select(rd, rd.max_level);
        if (out.certified) return out.support;
        return std::nullopt;
    };
}

FailureReport demo_failure(const AdversaryKit& kit, const Victim& victim, int n_samples,
                           std::uint64_t seed, double ball_radius) {
    FailureReport rep;
    if (n_samples <= 0) return rep;
    double radius = ball_radius > 0 ? ball_radius : kit.center_stsp;

    for (int s = 0; s < n_samples; ++s) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s));
        LassoInstance iota = kit.center;
        auto bump = [&](double v) { return v + (2 * rng.uniform01() - 1) * 0.999 * radius; };
        for (int i = 0; i < iota.y.size(); ++i) iota.y(i) = bump(iota.y(i));
        for (int j = 0; j < iota.A.cols(); ++j) iota.A(0, j) = bump(iota.A(0, j));

        FailureSample fs;
        fs.true_support = support_1d(as_1d(iota));
        fs.victim_output = victim(cap_reader(kit.reader_for(iota), kit.k));
        if (!fs.victim_output.has_value()) {
            ++rep.abstained;
        } else if (*fs.victim_output != fs.true_support) {
            fs.wrong = true;
            ++rep.wrong;
        } else {
            ++rep.correct;
        }
        ++rep.samples;
        rep.detail.push_back(std::move(fs));
    }
    return rep;
}

}  // namespace lassocond
