#include "lassocond/oracle1d.hpp"

#include <cmath>
#include <limits>

namespace lassocond {

Instance1D::Instance1D(double y_, VectorXd a_, double lambda_)
    : y(y_), a(std::move(a_)), lambda(lambda_) {
    if (a.size() < 1) throw DimensionError("Instance1D: need N >= 1");
    if (!(lambda > 0)) throw DomainError("Instance1D: lambda must be positive");
}

LassoInstance Instance1D::to_instance() const {
    VectorXd yv(1);
    yv(0) = y;
    MatrixXd A(1, a.size());
    A.row(0) = a.transpose();
    return LassoInstance(yv, A, lambda);
}

namespace {

// index of the strictly largest |a_i| (0-based); -1 on tie
int unique_argmax(const VectorXd& a) {
    int best = 0;
    for (int i = 1; i < a.size(); ++i)
        if (std::abs(a(i)) > std::abs(a(best))) best = i;
    for (int i = 0; i < a.size(); ++i)
        if (i != best && std::abs(a(i)) == std::abs(a(best))) return -1;
    return best;
}

}  // namespace

SupportSet support_1d(const Instance1D& inst) {
    int i = unique_argmax(inst.a);
    if (i < 0) throw TieError("support_1d: largest |a_i| is not unique");
    if (std::abs(inst.a(i) * inst.y) > inst.lambda / 2) return SupportSet({i + 1});
    return SupportSet();
}

VectorXd solution_1d(const Instance1D& inst) {
    int i = unique_argmax(inst.a);
    if (i < 0) throw TieError("solution_1d: largest |a_i| is not unique");
    VectorXd x = VectorXd::Zero(inst.N());
    double ay = inst.a(i) * inst.y;
    if (std::abs(ay) > inst.lambda / 2)
        x(i) = (ay > 0 ? 1.0 : -1.0) * (std::abs(ay) - inst.lambda / 2) / (inst.a(i) * inst.a(i));
    return x;
}

GapStat delta_gap(const VectorXd& a) {
    if (a.size() < 2) throw DimensionError("delta_gap: needs at least two entries");
    int first = 0;
    for (int i = 1; i < a.size(); ++i)
        if (std::abs(a(i)) > std::abs(a(first))) first = i;
    double second = -1.0;
    for (int i = 0; i < a.size(); ++i)
        if (i != first) second = std::max(second, std::abs(a(i)));
    return {std::abs(a(first)) - second, first + 1};
}

bool z_event(const Instance1D& inst, double eps) {
    if (eps < 0) throw DomainError("z_event: eps must be >= 0");
    double amax = std::max(inst.a.cwiseAbs().maxCoeff() - eps, 0.0);
    double ymin = std::max(std::abs(inst.y) - eps, 0.0);
    return amax * ymin > inst.lambda / 2;
}

namespace {

// Root of the monotone scalar equation on [lo, hi]; pred(e) true below the root.
template <typename Pred>
double bisect(double lo, double hi, Pred pred) {
    while (hi - lo > 1e-14) {
        double mid = 0.5 * (lo + hi);
        if (pred(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double stsp_1d(const Instance1D& inst) {
    if (inst.N() >= 2 && unique_argmax(inst.a) < 0) return 0.0;  // ill-posed
    const double half = inst.lambda / 2;
    const double amax = inst.a.cwiseAbs().maxCoeff();
    const double ay = std::abs(inst.y);

    if (amax * ay > half) {
        // singleton support: leadership exchange at delta/2, zero-collapse at eps_Z
        double half_gap = std::numeric_limits<double>::infinity();
        if (inst.N() >= 2) half_gap = delta_gap(inst.a).delta / 2;
        double eps_z = bisect(0.0, std::min(amax, ay),
                              [&](double e) { return (amax - e) * (ay - e) > half; });
        return std::min(half_gap, eps_z);
    }
    // empty support: stays 0 until the maximal product exceeds lambda/2
    if (amax * ay >= half) return 0.0;  // on the boundary, 0 stops being unique at once
    double hi = 1.0;
    while ((amax + hi) * (ay + hi) < half) hi *= 2;
    return bisect(0.0, hi, [&](double e) { return (amax + e) * (ay + e) < half; });
}

}  // namespace lassocond
