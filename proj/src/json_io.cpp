#include "lassocond/json_io.hpp"

#include <cmath>

namespace lassocond {

json extended(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

double extended_from(const json& j) {
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw DomainError("extended_from: unknown extended-real literal: " + s);
    }
    return j.get<double>();
}

json to_json(const SupportSet& s) { return json(s.indices()); }

SupportSet support_from_json(const json& j) { return SupportSet(j.get<std::vector<int>>()); }

json to_json(const LassoInstance& inst) {
    json a = json::array();
    for (int i = 0; i < inst.m(); ++i) {
        json row = json::array();
        for (int jj = 0; jj < inst.N(); ++jj) row.push_back(inst.A(i, jj));
        a.push_back(std::move(row));
    }
    std::vector<double> y(inst.y.data(), inst.y.data() + inst.y.size());
    return json{{"y", y}, {"A", a}, {"lambda", inst.lambda}};
}

LassoInstance instance_from_json(const json& j) {
    auto yv = j.at("y").get<std::vector<double>>();
    const auto& a = j.at("A");
    int m = static_cast<int>(a.size());
    if (m == 0) throw DimensionError("instance_from_json: A has no rows");
    int N = static_cast<int>(a[0].size());
    MatrixXd A(m, N);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(a[i].size()) != N)
            throw DimensionError("instance_from_json: ragged matrix A");
        for (int jj = 0; jj < N; ++jj) A(i, jj) = a[i][jj].get<double>();
    }
    VectorXd y = Eigen::Map<VectorXd>(yv.data(), static_cast<long>(yv.size()));
    return LassoInstance(std::move(y), std::move(A), j.at("lambda").get<double>());
}

json to_json(const NormBundle& nb) {
    return json{{"max_norm", nb.max_norm}, {"trunc2", nb.trunc2}, {"tr1star", nb.tr1star}};
}

json to_json(const LassoSolution& sol) {
    std::vector<double> x(sol.x.data(), sol.x.data() + sol.x.size());
    return json{{"x", x},
                {"gap_bound", sol.gap_bound},
                {"kkt_inf", sol.kkt_inf},
                {"iterations", sol.iterations},
                {"converged", sol.converged}};
}

json to_json(const SigmaCertificate& cert) {
    return json{{"sigma1", extended(cert.sigma1)},
                {"sigma2", extended(cert.sigma2)},
                {"sigma3", extended(cert.sigma3)},
                {"sigma", extended(cert.sigma)},
                {"alpha", cert.alpha},
                {"stsp_lb", cert.stsp_lb},
                {"cond_ub", extended(cert.cond_ub)},
                {"support_used", to_json(cert.support_used)},
                {"tau", cert.tau},
                {"gap_bound", cert.gap_bound},
                {"x_margin", extended(cert.x_margin)},
                {"single_solution_evaluation", cert.single_solution_evaluation}};
}

json to_json(const WainwrightParams& p) {
    return json{{"c_min", p.c_min},
                {"c_max", p.c_max},
                {"gamma", p.gamma},
                {"rho_l", extended(p.rho_l)},
                {"rho_u", extended(p.rho_u)},
                {"rho_l_defined", p.rho_l_defined},
                {"rho_u_defined", p.rho_u_defined},
                {"theta_l", extended(p.theta_l)},
                {"theta_u", extended(p.theta_u)},
                {"phi_N", extended(p.phi_N)},
                {"g_lambda", p.g_lambda},
                {"sigma_hat", p.sigma_hat},
                {"alpha_hat", p.alpha_hat},
                {"k_hat", p.k_hat},
                {"a0_ok", p.a0_ok},
                {"ai_ok", p.ai_ok},
                {"aii_ok", p.aii_ok},
                {"epsilon_used", p.epsilon_used},
                {"epsilon_rule", p.epsilon_rule},
                {"constants_assumed", p.constants_assumed}};
}

json to_json(const KHat& k) {
    return json{{"sigma_hat", k.sigma_hat}, {"alpha_hat", k.alpha_hat}, {"k_hat", k.k_hat}};
}

json to_json(const SimpleVerdicts& v) {
    return json{{"side_ok", v.side_ok},     {"i_ok", v.i_ok},
                {"ii_ok", v.ii_ok},         {"iii_ok", v.iii_ok},
                {"epsilon_used", v.epsilon_used}, {"c_bar", v.c_bar},
                {"eta_is_zero", v.eta_is_zero},   {"all_ok", v.all()}};
}

json to_json(const TrialRecord& r) {
    return json{{"seed", r.seed},
                {"N", r.N},
                {"m", r.m},
                {"dist", r.dist},
                {"cond", extended(r.cond)},
                {"oracle_support", to_json(r.oracle_support)},
                {"solver_support", to_json(r.solver_support)},
                {"success", r.success},
                {"threshold", r.threshold}};
}

json to_json(const SelectionOutcome& o) {
    if (!o.certified)
        return json{{"status", "no_certificate"}, {"max_precision_tried", o.max_precision_tried}};
    return json{{"status", "certified"},
                {"support", to_json(o.support)},
                {"precision_used", o.precision_used},
                {"certificate", to_json(o.cert)}};
}

json to_json(const FailureReport& r) {
    json detail = json::array();
    for (const auto& d : r.detail) {
        json item{{"true_support", to_json(d.true_support)}, {"wrong", d.wrong}};
        item["victim_output"] =
            d.victim_output.has_value() ? to_json(*d.victim_output) : json("abstained");
        detail.push_back(std::move(item));
    }
    return json{{"samples", r.samples}, {"wrong", r.wrong},   {"abstained", r.abstained},
                {"correct", r.correct}, {"detail", detail}};
}

json to_json(const Figure1Row& row) {
    json j{{"N", row.N},
           {"dist", row.dist},
           {"threshold", row.threshold},
           {"trials", row.trials},
           {"successes", row.successes},
           {"success_rate", row.success_rate},
           {"prop_cond_above_1000", row.prop_cond_above_1000}};
    j["median_cond_correct"] =
        std::isnan(row.median_cond_correct) ? json() : extended(row.median_cond_correct);
    j["median_cond_incorrect"] =
        std::isnan(row.median_cond_incorrect) ? json() : extended(row.median_cond_incorrect);
    return j;
}

EnsembleSpec ensemble_spec_from_json(const json& j) {
    EnsembleSpec spec;
    const auto& sig = j.at("Sigma");
    if (sig.contains("dense")) {
        const auto& d = sig.at("dense");
        int n = static_cast<int>(d.size());
        MatrixXd M(n, n);
        for (int r = 0; r < n; ++r) {
            if (static_cast<int>(d[r].size()) != n)
                throw DimensionError("ensemble_spec_from_json: Sigma.dense must be square");
            for (int c = 0; c < n; ++c) M(r, c) = d[r][c].get<double>();
        }
        spec.Sigma = Covariance::matrix(std::move(M));
    } else {
        spec.Sigma = Covariance::iso(sig.value("scale", 1.0), sig.at("n").get<int>());
    }
    auto v = j.at("v").get<std::vector<double>>();
    spec.v = Eigen::Map<VectorXd>(v.data(), static_cast<long>(v.size()));
    spec.eta = j.value("eta", 0.0);
    spec.m = j.at("m").get<int>();
    spec.lambda = j.at("lambda").get<double>();
    spec.c3 = j.value("c3", 1.0);
    spec.validate();
    return spec;
}

json to_json(const EnsembleSpec& spec) {
    json sig;
    if (spec.Sigma.isotropic) {
        sig = json{{"isotropic", true}, {"scale", spec.Sigma.scale}, {"n", spec.Sigma.n}};
    } else {
        json rows = json::array();
        for (int r = 0; r < spec.Sigma.size(); ++r) {
            json row = json::array();
            for (int c = 0; c < spec.Sigma.size(); ++c) row.push_back(spec.Sigma.dense(r, c));
            rows.push_back(std::move(row));
        }
        sig = json{{"dense", rows}};
    }
    std::vector<double> v(spec.v.data(), spec.v.data() + spec.v.size());
    return json{{"Sigma", sig},       {"v", v},
                {"eta", spec.eta},    {"m", spec.m},
                {"lambda", spec.lambda}, {"c3", spec.c3}};
}

}  // namespace lassocond
