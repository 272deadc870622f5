#include "lassocond/ensembles.hpp"

#include "lassocond/oracle1d.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace lassocond {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Deterministic parallel map over trial indices; slot t is always written by
// trial t, so the result is identical for any worker count.
void parallel_trials(int trials, int workers, const std::function<void(int)>& body) {
    if (workers <= 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<int> next{0};
    auto run = [&]() {
        for (;;) {
            int t = next.fetch_add(1);
            if (t >= trials) return;
            body(t);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string DistSpec::name() const {
    switch (kind) {
        case Exp1:
            return "exp1";
        case Normal: {
            std::ostringstream os;
            os << "normal(" << mu << "," << sigma2 << ")";
            return os.str();
        }
        case Uniform01:
            return "uniform01";
        case GaussianRows:
            return "gaussian_rows";
    }
    return "?";
}

MatrixXd draw_matrix(const DistSpec& dist, int m, int N, Rng& rng) {
    MatrixXd A(m, N);
    switch (dist.kind) {
        case DistSpec::Exp1:
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < N; ++j) A(i, j) = rng.exponential();
            return A;
        case DistSpec::Normal: {
            double sd = std::sqrt(dist.sigma2);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < N; ++j) A(i, j) = rng.normal(dist.mu, sd);
            return A;
        }
        case DistSpec::Uniform01:
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < N; ++j) A(i, j) = rng.uniform01();
            return A;
        case DistSpec::GaussianRows: {
            if (dist.Sigma.size() != N) throw DimensionError("draw_matrix: Sigma size != N");
            if (dist.Sigma.isotropic) {
                double sd = std::sqrt(dist.Sigma.scale);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < N; ++j) A(i, j) = rng.normal(0.0, sd);
                return A;
            }
            Eigen::LLT<MatrixXd> llt(dist.Sigma.dense);
            if (llt.info() != Eigen::Success)
                throw DomainError("draw_matrix: Sigma is not positive definite");
            MatrixXd L = llt.matrixL();
            VectorXd z(N);
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < N; ++j) z(j) = rng.normal();
                A.row(i) = (L * z).transpose();
            }
            return A;
        }
    }
    throw DomainError("draw_matrix: unknown distribution");
}

EmpiricalCDF::EmpiricalCDF(std::vector<double> samples) : sorted_(std::move(samples)) {
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::operator()(double t) const {
    if (sorted_.empty()) return 0.0;
    auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
    return double(it - sorted_.begin()) / double(sorted_.size());
}

double ks_distance(const EmpiricalCDF& cdf, const std::function<double(double)>& target) {
    const auto& xs = cdf.sorted();
    if (xs.empty()) throw DomainError("ks_distance: empty sample");
    const double n = double(xs.size());
    double d = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double F = target(xs[i]);
        d = std::max(d, std::abs((double(i) + 1) / n - F));
        d = std::max(d, std::abs(double(i) / n - F));
    }
    return d;
}

double ks_distance_grid(const EmpiricalCDF& cdf, const std::function<double(double)>& target,
                        double lo, double hi, int points) {
    if (cdf.size() == 0) throw DomainError("ks_distance_grid: empty sample");
    if (points < 1 || !(hi > lo)) throw DomainError("ks_distance_grid: bad grid");
    double d = 0.0;
    for (int k = 1; k <= points; ++k) {
        double t = lo + (hi - lo) * k / double(points + 1);
        d = std::max(d, std::abs(cdf(t) - target(t)));
    }
    return d;
}

std::vector<Theorem24Cell> run_theorem24(const DistSpec& dist, const std::vector<int>& N_grid,
                                         int trials, double y, double lambda, std::uint64_t seed,
                                         int workers) {
    std::vector<Theorem24Cell> out;
    std::uint64_t cell_id = 0;
    for (int N : N_grid) {
        Theorem24Cell cell;
        cell.N = N;
        cell.dist = dist.name();
        switch (dist.kind) {
            case DistSpec::Exp1:
                cell.scale = 1.0;
                break;
            case DistSpec::Normal:
                cell.scale = 2.0 * std::sqrt(2.0 * std::log(double(N)));
                break;
            case DistSpec::Uniform01:
                cell.scale = 2.0 * N;
                break;
            default:
                throw DomainError("run_theorem24: needs an iid scalar-entry distribution");
        }

        std::uint64_t cell_seed = Rng::stream(seed, cell_id++).next_u64();
        std::vector<double> vals(static_cast<size_t>(trials),
                                 std::numeric_limits<double>::quiet_NaN());
        std::atomic<int> ties{0}, zeros{0};
        parallel_trials(trials, workers, [&](int t) {
            Rng rng = Rng::stream(cell_seed, static_cast<std::uint64_t>(t));
            MatrixXd A = draw_matrix(dist, 1, N, rng);
            Instance1D inst(y, A.row(0).transpose(), lambda);
            double v = stsp_1d(inst);
            if (N >= 2) {
                GapStat g = delta_gap(inst.a);
                if (g.delta == 0.0) {  // tied maxima; discarded, not fabricated
                    ++ties;
                    return;
                }
            }
            if (v == 0.0) ++zeros;
            vals[static_cast<size_t>(t)] = cell.scale * v;
        });

        std::vector<double> kept;
        kept.reserve(vals.size());
        for (double v : vals)
            if (!std::isnan(v)) kept.push_back(v);
        cell.ties_discarded = ties.load();
        cell.zero_stsp = zeros.load();
        cell.cdf = EmpiricalCDF(std::move(kept));
        out.push_back(std::move(cell));
    }
    return out;
}

SolveOptions figure1_solver_options() {
    SolveOptions opt;
    opt.fixed_effort = true;
    opt.dx_tol = 1e-8;
    opt.update_budget = 2000000;
    opt.max_sweeps = 100000;
    return opt;
}

Figure1Result run_figure1(const std::vector<int>& N_grid, int trials,
                          const std::vector<double>& thresholds, double lambda,
                          std::uint64_t seed, int workers) {
    Figure1Result res;
    if (trials <= 0) return res;
    const double y = 1.0;
    const std::vector<DistSpec> dists = {DistSpec::exp1(), DistSpec::normal(1.0, 1e-4),
                                         DistSpec::uniform01()};
    const SolveOptions vopt = figure1_solver_options();

    std::uint64_t cell_id = 0;
    for (int N : N_grid) {
        for (const auto& dist : dists) {
            std::uint64_t cell_seed = Rng::stream(seed, cell_id++).next_u64();
            std::vector<std::vector<TrialRecord>> recs(static_cast<size_t>(trials));
            parallel_trials(trials, workers, [&](int t) {
                Rng rng = Rng::stream(cell_seed, static_cast<std::uint64_t>(t));
                MatrixXd A = draw_matrix(dist, 1, N, rng);
                Instance1D one(y, A.row(0).transpose(), lambda);
                SupportSet truth;
                try {
                    truth = support_1d(one);
                } catch (const TieError&) {
                    return;  // probability-zero tie; discarded
                }
                double stsp = stsp_1d(one);
                LassoSolution sol = solve_with_options(one.to_instance(), vopt);
                for (double tau : thresholds) {
                    TrialRecord rec;
                    rec.seed = cell_seed;
                    rec.N = N;
                    rec.m = 1;
                    rec.dist = dist.name();
                    rec.cond = stsp > 0 ? 1.0 / stsp : kInf;
                    rec.oracle_support = truth;
                    rec.solver_support = support_from_threshold(sol.x, tau);
                    rec.success = rec.oracle_support == rec.solver_support;
                    rec.threshold = tau;
                    recs[static_cast<size_t>(t)].push_back(std::move(rec));
                }
            });

            for (double tau : thresholds) {
                Figure1Row row;
                row.N = N;
                row.dist = dist.name();
                row.threshold = tau;
                std::vector<double> cond_ok, cond_bad;
                int above = 0, total = 0;
                for (const auto& per_trial : recs)
                    for (const auto& rec : per_trial) {
                        if (rec.threshold != tau) continue;
                        ++total;
                        row.successes += rec.success;
                        (rec.success ? cond_ok : cond_bad).push_back(rec.cond);
                        if (rec.cond > 1000.0) ++above;
                    }
                row.trials = total;
                row.success_rate = total ? double(row.successes) / total : 0.0;
                row.prop_cond_above_1000 = total ? double(above) / total : 0.0;
                row.median_cond_correct = median(std::move(cond_ok));
                row.median_cond_incorrect = median(std::move(cond_bad));
                res.rows.push_back(std::move(row));
            }
            for (auto& per_trial : recs)
                for (auto& rec : per_trial) res.records.push_back(std::move(rec));
        }
    }
    return res;
}

}  // namespace lassocond
