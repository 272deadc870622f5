#pragma once

#include "lassocond/rng.hpp"
#include "lassocond/solver.hpp"
#include "lassocond/types.hpp"
#include "lassocond/wainwright.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lassocond {

struct DistSpec {
    enum Kind { Exp1, Normal, Uniform01, GaussianRows } kind = Exp1;
    double mu = 0.0;      // Normal
    double sigma2 = 1.0;  // Normal
    Covariance Sigma;     // GaussianRows

    static DistSpec exp1() { return {Exp1, 0, 1, {}}; }
    static DistSpec normal(double mu, double sigma2) { return {Normal, mu, sigma2, {}}; }
    static DistSpec uniform01() { return {Uniform01, 0, 1, {}}; }
    static DistSpec gaussian_rows(Covariance c) { return {GaussianRows, 0, 1, std::move(c)}; }

    std::string name() const;
};

// m x N draw; for GaussianRows each row is N(0, Sigma).
MatrixXd draw_matrix(const DistSpec& dist, int m, int N, Rng& rng);

struct TrialRecord {
    std::uint64_t seed = 0;
    int N = 0, m = 1;
    std::string dist;
    double cond = 0.0;  // 1/stsp, inf when stsp = 0
    SupportSet oracle_support, solver_support;
    bool success = false;
    double threshold = 0.0;
};

class EmpiricalCDF {
  public:
    EmpiricalCDF() = default;
    explicit EmpiricalCDF(std::vector<double> samples);
    double operator()(double t) const;  // fraction of samples <= t
    int size() const { return static_cast<int>(sorted_.size()); }
    const std::vector<double>& sorted() const { return sorted_; }

  private:
    std::vector<double> sorted_;
};

// Classic KS statistic, sup over sample points with both one-sided limits.
double ks_distance(const EmpiricalCDF& cdf, const std::function<double(double)>& target);

// sup |Fhat - F| over the uniform grid of `points` interior values of
// (lo, hi); used where a law only holds on an open interval.
double ks_distance_grid(const EmpiricalCDF& cdf, const std::function<double(double)>& target,
                        double lo, double hi, int points);

struct Theorem24Cell {
    int N = 0;
    std::string dist;
    double scale = 1.0;  // multiplier applied to stsp before recording
    EmpiricalCDF cdf;    // of the scaled reciprocal condition
    int ties_discarded = 0;
    int zero_stsp = 0;  // trials with stsp exactly 0 (condition inf)
};

// m = 1 ensemble study of the scaled reciprocal condition, computed exactly
// via the 1D oracle. Scalings: Exp1 -> raw, Normal -> 2 sqrt(2 ln N),
// Uniform01 -> 2N.
std::vector<Theorem24Cell> run_theorem24(const DistSpec& dist, const std::vector<int>& N_grid,
                                         int trials, double y, double lambda, std::uint64_t seed,
                                         int workers = 1);

struct Figure1Row {
    int N = 0;
    std::string dist;
    double threshold = 0.0;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    double prop_cond_above_1000 = 0.0;
    double median_cond_correct = 0.0;    // nan when empty
    double median_cond_incorrect = 0.0;  // nan when empty
};

struct Figure1Result {
    std::vector<TrialRecord> records;  // one per (trial, threshold)
    std::vector<Figure1Row> rows;
};

// Ground truth from the 1D oracle; candidate supports from the fixed-effort
// coordinate-descent solver plus thresholding. m = 1, b = 1.
Figure1Result run_figure1(const std::vector<int>& N_grid, int trials,
                          const std::vector<double>& thresholds, double lambda,
                          std::uint64_t seed, int workers = 1);

// The "deployed solver" settings played against the oracle in run_figure1.
SolveOptions figure1_solver_options();

}  // namespace lassocond
