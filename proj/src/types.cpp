#include "lassocond/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lassocond {

SupportSet::SupportSet(std::vector<int> indices) : idx_(std::move(indices)) {
    std::sort(idx_.begin(), idx_.end());
    idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
    if (!idx_.empty() && idx_.front() < 1)
        throw DimensionError("SupportSet: indices are 1-based and must be >= 1");
}

SupportSet SupportSet::full(int n) {
    std::vector<int> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = i + 1;
    return SupportSet(std::move(v));
}

bool SupportSet::contains(int i) const {
    return std::binary_search(idx_.begin(), idx_.end(), i);
}

SupportSet SupportSet::complement(int n) const {
    if (!idx_.empty() && idx_.back() > n)
        throw DimensionError("SupportSet::complement: index exceeds N");
    std::vector<int> out;
    out.reserve(static_cast<size_t>(n) - idx_.size());
    for (int i = 1; i <= n; ++i)
        if (!contains(i)) out.push_back(i);
    return SupportSet(std::move(out));
}

std::vector<int> SupportSet::zero_based() const {
    std::vector<int> out(idx_.size());
    std::transform(idx_.begin(), idx_.end(), out.begin(), [](int i) { return i - 1; });
    return out;
}

std::string SupportSet::to_string() const {
    std::ostringstream os;
    os << '{';
    for (size_t k = 0; k < idx_.size(); ++k) {
        if (k) os << ',';
        os << idx_[k];
    }
    os << '}';
    return os.str();
}

SupportSet support_from_threshold(const VectorXd& x, double tau) {
    if (tau < 0) throw DomainError("support_from_threshold: tau must be >= 0");
    std::vector<int> idx;
    for (int i = 0; i < x.size(); ++i)
        if (std::abs(x(i)) > tau) idx.push_back(i + 1);
    return SupportSet(std::move(idx));
}

LassoInstance::LassoInstance(VectorXd y_, MatrixXd A_, double lambda_)
    : y(std::move(y_)), A(std::move(A_)), lambda(lambda_) {
    validate();
}

void LassoInstance::validate() const {
    if (A.rows() < 1 || A.cols() < 1) throw DimensionError("LassoInstance: need m >= 1, N >= 1");
    if (y.size() != A.rows()) throw DimensionError("LassoInstance: y length must equal rows of A");
    if (!(lambda > 0)) throw DomainError("LassoInstance: lambda must be positive");
    if (!y.allFinite() || !A.allFinite() || !std::isfinite(lambda))
        throw DomainError("LassoInstance: entries must be finite");
}

MatrixXd LassoInstance::columns(const SupportSet& S) const {
    MatrixXd out(A.rows(), S.size());
    int k = 0;
    for (int j : S.zero_based()) {
        if (j >= N()) throw DimensionError("columns: support index exceeds N");
        out.col(k++) = A.col(j);
    }
    return out;
}

double spectral_norm(const MatrixXd& A) {
    if (A.rows() == 0 || A.cols() == 0) return 0.0;
    if (A.rows() <= 512 && A.cols() <= 512) {
        Eigen::JacobiSVD<MatrixXd> svd(A);
        return svd.singularValues()(0);
    }
    // Power iteration on A^T A for the large case.
    VectorXd v = VectorXd::Ones(A.cols());
    v.normalize();
    double s = 0.0;
    for (int it = 0; it < 10000; ++it) {
        VectorXd w = A.transpose() * (A * v);
        double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        double s_new = std::sqrt(nw);
        if (it > 0 && std::abs(s_new - s) <= 1e-10 * s_new) return s_new;
        s = s_new;
    }
    return s;
}

NormBundle compute_norms(const LassoInstance& inst) {
    NormBundle nb;
    nb.max_norm = std::max(inst.y.cwiseAbs().maxCoeff(), inst.A.cwiseAbs().maxCoeff());
    nb.trunc2 = std::max({spectral_norm(inst.A), inst.y.norm(), 1.0});
    nb.tr1star = std::max({inst.A.cwiseAbs().sum(), inst.y.cwiseAbs().sum(), 1.0});
    return nb;
}

}  // namespace lassocond
