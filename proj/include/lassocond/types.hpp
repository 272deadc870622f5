#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace lassocond {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct TieError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UncertainSupport : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularSigmaSS : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonpositiveSigmaHat : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SearchFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// SupportSet: sorted 1-based index set in {1,...,N}
// ---------------------------------------------------------------------------

class SupportSet {
  public:
    SupportSet() = default;

    // Takes any list of 1-based indices; sorts, dedups, validates > 0.
    explicit SupportSet(std::vector<int> indices);

    static SupportSet full(int n);

    const std::vector<int>& indices() const { return idx_; }
    int size() const { return static_cast<int>(idx_.size()); }
    bool empty() const { return idx_.empty(); }
    bool contains(int i) const;

    // {1,...,n} \ this. Throws DimensionError if an index exceeds n.
    SupportSet complement(int n) const;

    // 0-based copies for matrix slicing.
    std::vector<int> zero_based() const;

    bool operator==(const SupportSet& o) const { return idx_ == o.idx_; }
    bool operator!=(const SupportSet& o) const { return idx_ != o.idx_; }

    std::string to_string() const;

  private:
    std::vector<int> idx_;
};

// {i : |x_i| > tau}, strict inequality so tau = 0 recovers the exact support.
SupportSet support_from_threshold(const VectorXd& x, double tau);

// ---------------------------------------------------------------------------
// LassoInstance: (y, A, lambda) with y in R^m, A in R^{m x N}, lambda > 0
// ---------------------------------------------------------------------------

struct LassoInstance {
    VectorXd y;
    MatrixXd A;
    double lambda = 1.0;

    LassoInstance() = default;
    LassoInstance(VectorXd y_, MatrixXd A_, double lambda_);

    int m() const { return static_cast<int>(A.rows()); }
    int N() const { return static_cast<int>(A.cols()); }

    // m,N >= 1; lambda > 0; all entries finite.
    void validate() const;

    MatrixXd columns(const SupportSet& S) const;
};

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

struct NormBundle {
    double max_norm = 0.0;  // entrywise max over (y, A)
    double trunc2 = 1.0;    // max{||A||_2, ||y||_2, 1}
    double tr1star = 1.0;   // max{sum|A_ij|, sum|y_i|, 1}
};

// Spectral norm: dense SVD up to 512x512, power iteration above
// (rel tol 1e-10, at most 1e4 iterations).
double spectral_norm(const MatrixXd& A);

NormBundle compute_norms(const LassoInstance& inst);

}  // namespace lassocond
