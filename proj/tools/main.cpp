// Command-line runner: wires JSON experiment configs to the library and
// writes CSV/JSON artifacts plus a manifest echoing the resolved config.
//
// Exit codes: 0 ok or abstained, 1 runtime failure, 2 config error.

#include "lassocond/certify.hpp"
#include "lassocond/condition.hpp"
#include "lassocond/ensembles.hpp"
#include "lassocond/json_io.hpp"
#include "lassocond/oracle1d.hpp"
#include "lassocond/solver.hpp"
#include "lassocond/wainwright.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using lassocond::json;
using namespace lassocond;

namespace {

constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string f, const std::string& msg)
        : std::runtime_error(msg), field(std::move(f)) {}
};

const json& need(const json& j, const std::string& field) {
    if (!j.contains(field)) throw ConfigError(field, "missing required field");
    return j.at(field);
}

double need_num(const json& j, const std::string& field) {
    const json& v = need(j, field);
    if (!v.is_number()) throw ConfigError(field, "expected a number");
    return v.get<double>();
}

int need_int(const json& j, const std::string& field) {
    const json& v = need(j, field);
    if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
    return v.get<int>();
}

// ---------------------------------------------------------------------------
// artifact output
// ---------------------------------------------------------------------------

// 17 significant digits round-trip doubles exactly
std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// temp file + rename so partially written artifacts are never observed
void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string());
        os << content;
    }
    fs::rename(tmp, path);
}

void write_json_file(const fs::path& path, const json& j) {
    write_atomic(path, j.dump(2) + "\n");
}

struct Csv {
    std::ostringstream os;
    explicit Csv(const std::vector<std::string>& header) { row(header); }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << csv_quote(cells[i]);
        }
        os << "\r\n";
    }
    std::string str() const { return os.str(); }
};

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

struct RunContext {
    fs::path out;
    std::uint64_t seed = 0;
    int workers = 1;
};

int cmd_solve(const json& params, const RunContext& ctx) {
    LassoInstance inst = instance_from_json(need(params, "instance"));
    double gap_tol = params.value("gap_tol", 1e-10);
    auto sol = solve(inst, gap_tol);
    write_json_file(ctx.out / "solution.json", to_json(sol));
    return 0;
}

int cmd_condition(const json& params, const RunContext& ctx) {
    LassoInstance inst = instance_from_json(need(params, "instance"));
    double gap_tol = params.value("gap_tol", 1e-12);
    double tau = params.value("tau", 1e-6);
    auto sol = solve(inst, gap_tol);
    auto cert = certificate(inst, sol, tau);
    json out = to_json(cert);
    if (params.value("probe_samples", 0) > 0 && cert.stsp_lb > 0) {
        auto probe = probe_condition_lb(inst, 0.99 * cert.stsp_lb,
                                        params.value("probe_samples", 0), ctx.seed);
        out["probe"] = json{{"found_change", probe.found_change},
                            {"cond_lb", probe.cond_lb},
                            {"changes", probe.changes}};
    }
    write_json_file(ctx.out / "certificate.json", out);
    return 0;
}

int cmd_certify(const json& params, const RunContext& ctx) {
    LassoInstance inst = instance_from_json(need(params, "instance"));
    int n_max = params.value("n_max", 30);
    auto outcome = certified_select(dyadic_reader(ExactInstance::from_double(inst)), n_max);
    json out = to_json(outcome);
    if (!outcome.certified) out["status"] = "abstained";
    write_json_file(ctx.out / "outcome.json", out);
    std::cout << out.dump(2) << "\n";
    return 0;  // abstention is a successful, honest outcome
}

DistSpec dist_from_json(const json& params) {
    std::string d = need(params, "dist").get<std::string>();
    if (d == "exp1") return DistSpec::exp1();
    if (d == "normal")
        return DistSpec::normal(params.value("mu", 0.0), params.value("sigma2", 1.0));
    if (d == "uniform01") return DistSpec::uniform01();
    throw ConfigError("dist", "expected one of exp1 | normal | uniform01");
}

int cmd_ensemble_t24(const json& params, const RunContext& ctx) {
    DistSpec dist = dist_from_json(params);
    auto N_grid = need(params, "N_grid").get<std::vector<int>>();
    int trials = need_int(params, "trials");
    double y = need_num(params, "y");
    double lambda = need_num(params, "lambda");

    auto cells = run_theorem24(dist, N_grid, trials, y, lambda, ctx.seed, ctx.workers);

    Csv samples({"dist", "N", "scale", "scaled_value"});
    Csv summary({"dist", "N", "scale", "samples", "ties_discarded", "zero_stsp", "ks"});
    for (const auto& c : cells) {
        for (double v : c.cdf.sorted())
            samples.row({c.dist, std::to_string(c.N), fmt_double(c.scale), fmt_double(v)});
        double ks;
        if (dist.kind == DistSpec::Exp1) {
            // limit law 1 - e^{-2t} holds on t in (0, |y|); the remaining mass
            // accumulates at |y| itself, so the distance is taken on the
            // interior grid
            auto target = [](double t) { return t <= 0 ? 0.0 : 1.0 - std::exp(-2 * t); };
            ks = ks_distance_grid(c.cdf, target, 0.0, std::abs(y), 999);
        } else {
            double rate = dist.kind == DistSpec::Normal ? 1.0 / std::sqrt(dist.sigma2) : 1.0;
            auto target = [rate](double t) { return t <= 0 ? 0.0 : 1.0 - std::exp(-rate * t); };
            ks = ks_distance(c.cdf, target);
        }
        summary.row({c.dist, std::to_string(c.N), fmt_double(c.scale),
                     std::to_string(c.cdf.size()), std::to_string(c.ties_discarded),
                     std::to_string(c.zero_stsp), fmt_double(ks)});
    }
    write_atomic(ctx.out / "samples.csv", samples.str());
    write_atomic(ctx.out / "summary.csv", summary.str());
    return 0;
}

int cmd_figure1(const json& params, const RunContext& ctx) {
    auto N_grid = need(params, "N_grid").get<std::vector<int>>();
    int trials = need_int(params, "trials");
    auto thresholds = need(params, "thresholds").get<std::vector<double>>();
    double lambda = need_num(params, "lambda");

    auto res = run_figure1(N_grid, trials, thresholds, lambda, ctx.seed, ctx.workers);

    Csv rows({"seed", "N", "m", "dist", "cond", "oracle_support", "solver_support", "success",
              "threshold"});
    for (const auto& r : res.records) {
        char seedbuf[24];
        std::snprintf(seedbuf, sizeof(seedbuf), "%" PRIu64, r.seed);
        rows.row({seedbuf, std::to_string(r.N), std::to_string(r.m), r.dist, fmt_double(r.cond),
                  r.oracle_support.to_string(), r.solver_support.to_string(),
                  r.success ? "1" : "0", fmt_double(r.threshold)});
    }
    Csv summary({"N", "dist", "threshold", "trials", "successes", "success_rate",
                 "prop_cond_above_1000", "median_cond_correct", "median_cond_incorrect"});
    for (const auto& w : res.rows)
        summary.row({std::to_string(w.N), w.dist, fmt_double(w.threshold),
                     std::to_string(w.trials), std::to_string(w.successes),
                     fmt_double(w.success_rate), fmt_double(w.prop_cond_above_1000),
                     fmt_double(w.median_cond_correct), fmt_double(w.median_cond_incorrect)});
    write_atomic(ctx.out / "trials.csv", rows.str());
    write_atomic(ctx.out / "summary.csv", summary.str());
    return 0;
}

int cmd_wainwright(const json& params, const RunContext& ctx) {
    EnsembleSpec spec = ensemble_spec_from_json(need(params, "spec"));
    WainwrightParams p = check_assumptions(spec);
    json out = to_json(p);
    out["check_simple"] = to_json(check_simple(spec));
    if (params.contains("eps")) out["m_bar"] = m_bar(spec, need_num(params, "eps"));
    try {
        out["k_hat_detail"] = to_json(k_hat(spec));
    } catch (const NonpositiveSigmaHat&) {
        out["k_hat_detail"] = json{{"status", "sigma_hat_nonpositive"}};
    }
    write_json_file(ctx.out / "report.json", out);
    return 0;
}

int cmd_adversary(const json& params, const RunContext& ctx) {
    LassoInstance center = instance_from_json(need(params, "center"));
    double r = need_num(params, "r");
    int k = need_int(params, "k");
    int samples = params.value("samples", 100);
    double victim_tau = params.value("victim_tau", 1e-6);

    auto kit = build_adversary(center, r, k);
    json kit_json{{"k", kit.k},
                  {"radius", kit.radius},
                  {"center_stsp", kit.center_stsp},
                  {"center", to_json(kit.center)},
                  {"d1", to_json(kit.d1)},
                  {"d2", to_json(kit.d2)},
                  {"s1", to_json(kit.s1)},
                  {"s2", to_json(kit.s2)}};
    write_json_file(ctx.out / "kit.json", kit_json);

    json report;
    report["truncate_then_solve"] =
        to_json(demo_failure(kit, truncate_solve_victim(victim_tau), samples, ctx.seed));
    report["capped_certified"] =
        to_json(demo_failure(kit, capped_certified_victim(), samples, ctx.seed));
    write_json_file(ctx.out / "failure_report.json", report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified LASSO support selection and condition experiments"};
    std::string config_path;
    std::string out_override;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> workers_override;
    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--seed", seed_override, "override the config seed");
    app.add_option("--workers", workers_override, "worker threads for trials");
    app.add_option("--out", out_override, "override the config output directory");
    CLI11_PARSE(app, argc, argv);

    auto t0 = std::chrono::steady_clock::now();
    json config;
    RunContext ctx;
    std::string command;
    try {
        std::ifstream is(config_path);
        if (!is) throw ConfigError("--config", "cannot open config file");
        try {
            config = json::parse(is);
        } catch (const json::exception& e) {
            throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
        }
        command = need(config, "command").get<std::string>();
        ctx.seed = seed_override.value_or(config.value("seed", std::uint64_t{0}));
        ctx.workers = workers_override.value_or(config.value("workers", 1));
        std::string out_dir =
            !out_override.empty() ? out_override : need(config, "out_dir").get<std::string>();
        ctx.out = out_dir;
        fs::create_directories(ctx.out);
        if (ctx.workers < 1) throw ConfigError("workers", "must be >= 1");

        const json params = config.value("params", json::object());
        int rc;
        if (command == "solve")
            rc = cmd_solve(params, ctx);
        else if (command == "condition")
            rc = cmd_condition(params, ctx);
        else if (command == "certify")
            rc = cmd_certify(params, ctx);
        else if (command == "ensemble-t24")
            rc = cmd_ensemble_t24(params, ctx);
        else if (command == "figure1")
            rc = cmd_figure1(params, ctx);
        else if (command == "wainwright")
            rc = cmd_wainwright(params, ctx);
        else if (command == "adversary")
            rc = cmd_adversary(params, ctx);
        else
            throw ConfigError("command", "unknown command: " + command);

        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json manifest{{"version", kVersion},
                      {"command", command},
                      {"seed", ctx.seed},
                      {"workers", ctx.workers},
                      {"wall_time_seconds", secs},
                      {"timestamp", std::time(nullptr)},
                      {"config", config}};
        write_json_file(ctx.out / "manifest.json", manifest);
        return rc;
    } catch (const ConfigError& e) {
        json err{{"error", {{"type", "config"}, {"field", e.field}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        json err{{"error", {{"type", "runtime"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return 1;
    }
}
