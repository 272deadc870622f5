#pragma once

#include "lassocond/condition.hpp"
#include "lassocond/types.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>

namespace lassocond {

using Rational = boost::multiprecision::cpp_rational;

// Exact instance behind a digit reader. All reads are derived from this with
// exact rational arithmetic, so the 2^{-n} approximation contract is exact.
struct ExactInstance {
    std::vector<Rational> y;                // m
    std::vector<std::vector<Rational>> A;   // m x N
    double lambda = 1.0;

    static ExactInstance from_double(const LassoInstance& inst);  // doubles are exact rationals
    int m() const { return static_cast<int>(y.size()); }
    int N() const { return m() ? static_cast<int>(A[0].size()) : 0; }
};

// Round toward zero to n fractional binary digits; |error| <= 2^{-n}.
double dyadic_truncate(double value, int n);
Rational dyadic_truncate(const Rational& value, int n);

// Digit access to an unknown instance: read(n) yields (y^(n), A^(n)) with
// entrywise error <= 2^{-n} at every level n. max_level below INT_MAX marks a
// finite-precision reader (reads above it throw).
struct DigitReader {
    int m = 0, N = 0;
    double lambda = 1.0;
    int max_level = std::numeric_limits<int>::max();
    std::function<std::pair<VectorXd, MatrixXd>(int n)> read;
};

// Canonical reader: exact truncation of a rational instance at each level.
// Throws DomainError if some truncation is not exactly representable in double.
DigitReader dyadic_reader(ExactInstance inst);

// Wraps a reader so that digit levels above `cap` cannot be read (the
// finite-precision access model); read(n > cap) throws DomainError.
DigitReader cap_reader(const DigitReader& reader, int cap);

struct SelectionOutcome {
    bool certified = false;
    SupportSet support;        // valid when certified
    int precision_used = 0;    // digits read when certified
    SigmaCertificate cert;     // the certificate that justified the output
    int max_precision_tried = 0;
};

using GapTolRule = std::function<double(int)>;

// 4^{-n} with a floating-point floor; must be nonincreasing in n so that
// certification is monotone in the precision level.
double default_gap_tol(int n);

// Reads ever finer approximations and outputs a support only when the
// certificate radius strictly dominates the read error: with L the
// margin-adjusted stsp lower bound of the instance read at level n,
// certify when 2^{-n} < L, since every pair within L of the read pair
// (including the true one) then shares this unique support. Abstains
// (NoCertificate) when n_max is exhausted; never outputs uncertified.
SelectionOutcome certified_select(const DigitReader& reader, int n_max,
                                  const GapTolRule& gap_tol_rule = default_gap_tol);

// Scales the columns outside W by (1 - delta); y unchanged.
LassoInstance shrink_offsupport(const LassoInstance& inst, const SupportSet& W, double delta);

// Adversarial digit information built around a well-conditioned centre whose
// condition is still too large for precision-k readers: two dyadic witnesses
// with different certified supports share their first k digit levels with
// every input near the centre, crosswise, so any precision-k algorithm that is
// correct on exact inputs answers wrongly on the whole inner ball.
struct AdversaryKit {
    LassoInstance center;
    int k = 0;
    double radius = 0.0;       // r: witnesses and serving rule live in B(center, r)
    double center_stsp = 0.0;  // exact stability support of the centre (1/C_UL)
    LassoInstance d1, d2;      // dyadic, Xi = {s1} and {s2} respectively
    SupportSet s1, s2;

    // Delta_1 serving rule: levels n <= k get d2 for inputs with support s1
    // and d1 for the rest; levels n > k get honest truncations. The 2^{-n}
    // bound is recomputed exactly on every call and violations throw.
    std::pair<VectorXd, MatrixXd> delta1_info(const LassoInstance& iota, int n) const;
    DigitReader reader_for(const LassoInstance& iota) const;  // not capped
};

// Requires stsp(center) < 2^{-k-1} (else the finite-precision hypothesis is
// violated -> DomainError) and searches for the dyadic witness pair at
// precision k+8 via off-support shrinking; throws SearchFailed when no
// witness exists inside the ball at that precision. m = 1 centres only.
AdversaryKit build_adversary(const LassoInstance& center, double r, int k);

// A victim maps digit access to either a support or an abstention.
using Victim = std::function<std::optional<SupportSet>(const DigitReader&)>;

// Reads everything at the deepest allowed level, solves, thresholds.
Victim truncate_solve_victim(double tau);
// certified_select capped at the reader's depth; abstains instead of guessing.
Victim capped_certified_victim();

struct FailureSample {
    SupportSet true_support;
    std::optional<SupportSet> victim_output;
    bool wrong = false;
};

struct FailureReport {
    int samples = 0;
    int wrong = 0;
    int abstained = 0;
    int correct = 0;
    std::vector<FailureSample> detail;
};

// Samples inputs from the open ball B_inf(center, ball_radius) (default: the
// inner ball of radius stsp(center)), feeds the victim the kit's digit
// information capped at level k, and compares with the exact support.
FailureReport demo_failure(const AdversaryKit& kit, const Victim& victim, int n_samples,
                           std::uint64_t seed, double ball_radius = 0.0);

}  // namespace lassocond
