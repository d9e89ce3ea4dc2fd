// cfq: run the coherent-feedback scenarios and write CSV/JSON results.
//
// Exit codes: 0 every check passed, 1 a check failed or the numerics failed,
// 2 the configuration or command line was invalid.

#include "cfq/cfq.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using cfq::io::Json;
using cfq::io::SchemaError;
using cfq::scenarios::Check;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

std::string resolve_out_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("CFQ_OUT_DIR"); env && *env) return env;
    return "results";
}

Json checks_json(const std::vector<Check>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name}, {"target", c.target}, {"got", c.got},
                       {"lo", c.lo}, {"hi", c.hi}, {"pass", c.pass()}});
    }
    return arr;
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Writes <name>.summary.json, echoes the checks and maps them to an exit code.
int finish(const fs::path& dir, const std::string& name, Json summary, const std::vector<Check>& checks) {
    summary["scenario"] = name;
    summary["checks"] = checks_json(checks);
    cfq::io::write_json((dir / (name + ".summary.json")).string(), summary);
    for (const auto& c : checks) {
        std::cout << name << " | " << c.name << ": target " << fmt4(c.target) << ", got " << fmt4(c.got)
                  << ", " << (c.pass() ? "PASS" : "FAIL") << '\n';
    }
    return cfq::scenarios::all_pass(checks) ? kExitOk : kExitNumerical;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw SchemaError(what, "'" + item + "' is not a number");
        }
    }
    if (out.empty()) throw SchemaError(what, "empty list");
    return out;
}

// ------------------------------------------------------------------ qubit-sweep

struct QubitSweepArgs {
    cfq::scenarios::QubitSweepOptions opt;
    std::string ratio_grid;
    std::string deltas = "0";
};

int cmd_qubit_sweep(const fs::path& dir, QubitSweepArgs args) {
    if (!args.ratio_grid.empty()) args.opt.kappa_over_gamma = parse_list(args.ratio_grid, "--kappa-over-gamma-grid");
    args.opt.deltas = parse_list(args.deltas, "--delta");
    const auto res = cfq::scenarios::run_qubit_sweep(args.opt);
    cfq::io::CsvTable table({"z", "kappa_over_gamma", "delta", "fidelity"});
    for (const auto& r : res.rows) table.add_row({r.z, r.kappa_over_gamma, r.delta, r.fidelity});
    table.write((dir / "qubit_sweep.csv").string());
    Json summary{{"config", {{"gamma", args.opt.gamma}, {"phi", args.opt.phi}, {"ideal", args.opt.ideal},
                             {"eps1_over_gamma", args.opt.eps1_over_gamma},
                             {"eps2_over_kappa", args.opt.eps2_over_kappa}, {"deltas", args.opt.deltas}}},
                 {"rows", res.rows.size()}};
    return finish(dir, "qubit_sweep", std::move(summary), res.checks);
}

// ------------------------------------------------------------------ qutrit

int cmd_qutrit(const fs::path& dir, const cfq::scenarios::QutritTrajectoryOptions& opt) {
    const auto res = cfq::scenarios::run_qutrit_trajectories(opt);
    Json sets = Json::array();
    for (const auto& set : res.sets) {
        const int idx = cfq::scenarios::target_index(set.target);
        std::vector<std::string> header{"t"};
        for (const auto& label : set.initial) header.push_back("rho11-rho33@" + label);
        cfq::io::CsvTable table(header);
        const auto& times = set.runs.front().times;
        for (std::size_t i = 0; i < times.size(); ++i) {
            std::vector<double> row{times[i]};
            for (const auto& run : set.runs) row.push_back(run.observable("rho11-rho33")[i]);
            table.add_row(row);
        }
        table.write((dir / ("qutrit_phi" + std::to_string(idx) + ".csv")).string());
        sets.push_back({{"target", idx}, {"u1", set.gains.u1}, {"u2", set.gains.u2},
                        {"kernel_dim", set.kernel_dim}});
    }
    const auto unc = cfq::scenarios::run_qutrit_uncontrolled(1.0, 3.0);
    std::vector<Check> checks = res.checks;
    checks.insert(checks.end(), unc.checks.begin(), unc.checks.end());
    Json summary{{"config", {{"kappa", opt.kappa}, {"gamma", opt.gamma}, {"t_end", opt.t_end},
                             {"samples", opt.samples}, {"seed", opt.seed}}},
                 {"targets", sets},
                 {"uncontrolled", {{"steady_state", cfq::io::to_json(unc.steady)},
                                   {"fidelity_23", unc.fidelity_23}, {"purity", unc.purity}}}};
    return finish(dir, "qutrit", std::move(summary), checks);
}

// ------------------------------------------------------------------ qutrit-mc

int cmd_qutrit_mc(const fs::path& dir, cfq::scenarios::QutritMonteCarloOptions opt, const std::vector<int>& targets) {
    if (!targets.empty()) {
        opt.targets.clear();
        for (int t : targets) {
            if (t < 1 || t > 3) throw SchemaError("--target", "must be 1, 2 or 3");
            opt.targets.push_back(static_cast<cfq::QutritTarget>(t));
        }
    }
    if (opt.samples == 0) throw SchemaError("--samples", "must be positive");
    const auto res = cfq::scenarios::run_qutrit_monte_carlo(opt);
    cfq::io::CsvTable table({"target", "trial", "delta1", "delta2", "mismatch", "fidelity"});
    for (const auto& t : res.trials) {
        table.add_row({static_cast<double>(cfq::scenarios::target_index(t.target)), static_cast<double>(t.index),
                       t.delta1, t.delta2, t.mismatch, t.fidelity});
    }
    table.write((dir / "qutrit_mc.csv").string());
    Json summary_rows = Json::array();
    for (const auto& s : res.summary) {
        summary_rows.push_back({{"target", cfq::scenarios::target_index(s.target)},
                                {"mean_fidelity", s.mean}, {"std_fidelity", s.stddev}});
    }
    Json summary{{"config", {{"kappa", opt.kappa}, {"gamma", opt.gamma}, {"samples", opt.samples},
                             {"seed", opt.seed}}},
                 {"summary", summary_rows}};
    return finish(dir, "qutrit_mc", std::move(summary), res.checks);
}

// ------------------------------------------------------------------ squeeze

Json mat2_json(const cfq::Mat2& m) { return Json{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}; }

int cmd_squeeze(const fs::path& dir, const cfq::scenarios::SqueezeOptions& opt) {
    const auto res = cfq::scenarios::run_squeeze(opt);
    cfq::io::covariance_table(res.times, res.evolution).write((dir / "squeeze_covariance.csv").string());
    Json summary{{"config", {{"kappa", opt.kappa}, {"gamma", opt.gamma}}},
                 {"normal", {{"A", mat2_json(res.normal.a)}, {"D", mat2_json(res.normal.d)},
                             {"V_inf", mat2_json(res.v_normal)}, {"squeezing_db", res.db},
                             {"purity", res.purity}}},
                 {"wrong_order", {{"A", mat2_json(res.wrong.a)}, {"D", mat2_json(res.wrong.d)},
                                  {"V_inf", mat2_json(res.v_wrong)},
                                  {"squeezing_db", cfq::squeezing_db(res.v_wrong)}}}};
    return finish(dir, "squeeze", std::move(summary), res.checks);
}

// ------------------------------------------------------------------ fock

int cmd_fock(const fs::path& dir, cfq::scenarios::FockOptions opt, const std::string& snaps, double eps) {
    opt.snapshots_gamma_t = parse_list(snaps, "--snap");
    if (eps > 0.0) opt.epsilon = eps;
    const auto res = cfq::scenarios::run_fock(opt);
    cfq::io::trajectory_table(res.trajectory).write((dir / "fock_trajectory.csv").string());
    Json snap_files = Json::array();
    for (const auto& [gt, q] : res.q_snapshots) {
        char name[64];
        std::snprintf(name, sizeof name, "fock_q_gt%.2f.csv", gt);
        cfq::io::q_function_table(q).write((dir / name).string());
        snap_files.push_back({{"gamma_t", gt}, {"file", name}, {"integral", q.integral()}});
    }
    Json summary{{"config", {{"kappa", opt.kappa}, {"gamma", opt.gamma}, {"g", opt.g},
                             {"levels", opt.levels}, {"epsilon", opt.epsilon.value_or(0.0)}}},
                 {"F_peak", res.peak_fidelity}, {"gamma_t_peak", res.peak_gamma_t},
                 {"F_inf", res.steady_fidelity}, {"P_inf", res.steady_purity},
                 {"q_snapshots", snap_files}};
    return finish(dir, "fock", std::move(summary), res.checks);
}

// ------------------------------------------------------------------ compose

cfq::Operator load_operator(const Json& j, const std::string& path, const fs::path& base) {
    if (j.is_string()) {
        const fs::path file = base / j.get<std::string>();
        return cfq::io::operator_from_json(cfq::io::read_json_file(file.string()), file.string());
    }
    return cfq::io::operator_from_json(j, path);
}

cfq::CVector load_vector(const Json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("re") || !j["re"].is_array())
        throw SchemaError(path, "vector must be {\"re\": [...], \"im\": [...]}");
    const auto n = j["re"].size();
    cfq::CVector v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const Json& re = j["re"][i];
        if (!re.is_number()) throw SchemaError(path + ".re[" + std::to_string(i) + "]", "not a number");
        double im = 0.0;
        if (j.contains("im")) {
            if (!j["im"].is_array() || j["im"].size() != n) throw SchemaError(path + ".im", "length differs from re");
            if (!j["im"][i].is_number()) throw SchemaError(path + ".im[" + std::to_string(i) + "]", "not a number");
            im = j["im"][i].get<double>();
        }
        v(static_cast<Eigen::Index>(i)) = cfq::Complex(re.get<double>(), im);
    }
    return v;
}

/// Pipeline file:
///   {"stages": [{"l": op, "h": op} | {"phase": phi}, ...],
///    "detuning": op?, "extra_channels": [op, ...]?, "target": vector?}
/// Operators are inline JSON operators or paths relative to the pipeline file.
int cmd_compose(const fs::path& dir, const std::string& pipeline_file) {
    const Json cfg = cfq::io::read_json_file(pipeline_file);
    const fs::path base = fs::path(pipeline_file).parent_path();
    if (!cfg.contains("stages") || !cfg["stages"].is_array() || cfg["stages"].empty())
        throw SchemaError("stages", "must be a non-empty array");

    std::optional<cfq::SLHTriple> total;
    std::vector<std::pair<std::size_t, double>> pending_phases;
    Eigen::Index dim = 0;
    // First pass: find the Hilbert dimension from any operator stage.
    for (std::size_t i = 0; i < cfg["stages"].size() && dim == 0; ++i) {
        const Json& st = cfg["stages"][i];
        if (st.contains("l")) dim = load_operator(st["l"], "stages[" + std::to_string(i) + "].l", base).dim();
    }
    if (dim == 0) throw SchemaError("stages", "at least one stage needs a coupling operator 'l'");

    for (std::size_t i = 0; i < cfg["stages"].size(); ++i) {
        const Json& st = cfg["stages"][i];
        const std::string path = "stages[" + std::to_string(i) + "]";
        if (!st.is_object()) throw SchemaError(path, "stage must be an object");
        for (const auto& [key, _] : st.items()) {
            if (key != "l" && key != "h" && key != "phase") throw SchemaError(path + "." + key, "unknown field");
        }
        std::optional<cfq::SLHTriple> stage;
        if (st.contains("l")) {
            const cfq::Operator l = load_operator(st["l"], path + ".l", base);
            const cfq::Operator h = st.contains("h") ? load_operator(st["h"], path + ".h", base) : cfq::Operator::zero(l.dim());
            double phase = 0.0;
            if (st.contains("phase")) {
                if (!st["phase"].is_number()) throw SchemaError(path + ".phase", "not a number");
                phase = st["phase"].get<double>();
            }
            stage.emplace(std::polar(1.0, phase), l, h);
        } else if (st.contains("phase")) {
            if (!st["phase"].is_number()) throw SchemaError(path + ".phase", "not a number");
            stage = cfq::phase_shifter(st["phase"].get<double>(), dim);
        } else {
            throw SchemaError(path, "stage needs 'l' or 'phase'");
        }
        total = total ? cfq::series_product(*total, *stage) : *stage;
    }

    cfq::Operator detuning = cfq::Operator::zero(dim);
    if (cfg.contains("detuning")) detuning = load_operator(cfg["detuning"], "detuning", base);
    std::vector<cfq::Operator> extra;
    if (cfg.contains("extra_channels")) {
        if (!cfg["extra_channels"].is_array()) throw SchemaError("extra_channels", "must be an array");
        for (std::size_t i = 0; i < cfg["extra_channels"].size(); ++i)
            extra.push_back(load_operator(cfg["extra_channels"][i], "extra_channels[" + std::to_string(i) + "]", base));
    }
    const auto sys = cfq::LindbladSystem::from_slh(*total, detuning, extra);
    const auto ka = cfq::analyze_kernel(sys);

    Json summary{{"s", {{"re", total->s().real()}, {"im", total->s().imag()}}},
                 {"L", cfq::io::to_json(total->l())}, {"H", cfq::io::to_json(total->h())},
                 {"kernel_dim", ka.kernel_dim}};
    std::vector<Check> checks;
    if (ka.kernel_dim <= 1) {
        const auto rho = cfq::steady_state(sys);
        summary["steady_state"] = cfq::io::to_json(rho);
        summary["steady_purity"] = cfq::purity(rho);
        if (cfg.contains("target")) {
            cfq::CVector psi = load_vector(cfg["target"], "target");
            if (psi.size() != dim) throw SchemaError("target", "dimension differs from the operators");
            psi.normalize();
            const double f = cfq::fidelity(psi, rho);
            summary["target_fidelity"] = f;
            if (extra.empty() && cfg.value("detuning", Json()).is_null()) {
                const auto chk = cfq::check_pure_steady(total->l(), total->h(), psi);
                summary["pure_steady"] = {{"steady", chk.steady}, {"l_residual", chk.l_residual},
                                          {"k_residual", chk.k_residual}};
            }
        }
    }
    std::cout << "compose: kernel dimension " << ka.kernel_dim;
    if (summary.contains("target_fidelity")) std::cout << ", target fidelity " << fmt4(summary["target_fidelity"].get<double>());
    std::cout << '\n';
    cfq::io::write_json((dir / "composed.json").string(),
                        {{"s", summary["s"]}, {"L", summary["L"]}, {"H", summary["H"]}});
    return finish(dir, "compose", std::move(summary), checks);
}

// ------------------------------------------------------------------ run (config file)

/// Reads an optional number field, rejecting non-numbers with its path.
double number_field(const Json& obj, const std::string& key, const std::string& path, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw SchemaError(path + "." + key, "must be a number");
    return obj[key].get<double>();
}

void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& path) {
    if (!obj.is_object()) throw SchemaError(path, "must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw SchemaError(path + "." + key, "unknown field");
}

int cmd_run(const fs::path& dir, const std::string& config_file, unsigned workers) {
    const Json cfg = cfq::io::read_json_file(config_file);
    reject_unknown(cfg, {"model", "params", "imperfections", "target", "time", "seed"}, "config");
    if (!cfg.contains("model") || !cfg["model"].is_string()) throw SchemaError("model", "missing or not a string");
    const std::string model = cfg["model"];
    const Json params = cfg.value("params", Json::object());
    const Json imps = cfg.value("imperfections", Json::object());
    const Json time = cfg.value("time", Json::object());
    reject_unknown(time, {"t_end", "samples"}, "time");
    reject_unknown(imps, {"delta", "delta1", "delta2", "eps1", "eps2", "eps", "gain_mismatch"}, "imperfections");
    std::uint64_t seed = 7;
    if (cfg.contains("seed")) {
        if (!cfg["seed"].is_number_unsigned()) throw SchemaError("seed", "must be a non-negative integer");
        seed = cfg["seed"].get<std::uint64_t>();
    }
    const double gamma = number_field(params, "gamma", "params", 1.0);
    const double samples_d = number_field(time, "samples", "time", 201.0);
    if (samples_d < 2.0 || samples_d != std::floor(samples_d)) throw SchemaError("time.samples", "must be an integer >= 2");
    const auto samples = static_cast<std::size_t>(samples_d);

    auto require = [&](const std::string& key) {
        if (!params.contains(key)) throw SchemaError("params." + key, "required");
        return number_field(params, key, "params", 0.0);
    };
    auto target_int = [&]() {
        if (!cfg.contains("target") || !cfg["target"].is_number_integer()) throw SchemaError("target", "must be 1, 2 or 3");
        const int t = cfg["target"].get<int>();
        if (t < 1 || t > 3) throw SchemaError("target", "must be 1, 2 or 3");
        return static_cast<cfq::QutritTarget>(t);
    };

    if (model == "squeeze") {
        reject_unknown(params, {"kappa", "gamma"}, "params");
        cfq::scenarios::SqueezeOptions o;
        o.kappa = require("kappa");
        o.gamma = gamma;
        o.t_end = number_field(time, "t_end", "time", 5.0);
        o.samples = samples;
        return cmd_squeeze(dir, o);
    }
    if (model == "qutrit-mc") {
        reject_unknown(params, {"kappa", "gamma", "samples"}, "params");
        cfq::scenarios::QutritMonteCarloOptions o;
        o.kappa = require("kappa");
        o.gamma = gamma;
        o.samples = static_cast<std::size_t>(number_field(params, "samples", "params", 200.0));
        o.seed = seed;
        o.workers = workers;
        o.targets = {target_int()};
        return cmd_qutrit_mc(dir, o, {});
    }

    if (model == "fock") {
        reject_unknown(params, {"kappa", "gamma", "g", "N"}, "params");
        reject_unknown(imps, {"eps"}, "imperfections");
        cfq::scenarios::FockOptions o;
        o.kappa = require("kappa");
        o.gamma = gamma;
        o.g = require("g");
        o.levels = static_cast<Eigen::Index>(number_field(params, "N", "params", 20.0));
        o.gamma_t_end = gamma * number_field(time, "t_end", "time", o.gamma_t_end / gamma);
        o.samples = samples;
        const double eps = number_field(imps, "eps", "imperfections", 0.0);
        std::string snaps;
        for (double s : o.snapshots_gamma_t)
            if (s <= o.gamma_t_end) snaps += (snaps.empty() ? "" : ",") + cfq::io::format_double(s);
        return cmd_fock(dir, o, snaps, eps);
    }

    std::optional<cfq::LindbladSystem> sys;
    cfq::CVector target;
    cfq::DensityMatrix rho0 = cfq::DensityMatrix::maximally_mixed(2);
    cfq::models::ImperfectionSpec imp;
    for (const char* d : {"delta", "delta1", "delta2"})
        if (imps.contains(d)) imp.detunings[d] = number_field(imps, d, "imperfections", 0.0);
    for (const char* e : {"eps1", "eps2"})
        if (imps.contains(e)) imp.extra_channels.push_back({e, number_field(imps, e, "imperfections", 0.0)});
    imp.gain_mismatch = number_field(imps, "gain_mismatch", "imperfections", 0.0);

    try {
        if (model == "qubit") {
            reject_unknown(params, {"kappa", "gamma", "phi"}, "params");
            const double kappa = require("kappa");
            const double phi = number_field(params, "phi", "params", 0.0);
            sys = cfq::models::qubit_cf(kappa, gamma, phi, imp);
            target = cfq::models::qubit_target(kappa, gamma, phi);
            rho0 = cfq::DensityMatrix::pure(cfq::basis::qubit::excited());
        } else if (model == "qubit-wrong-order") {
            reject_unknown(params, {"kappa", "gamma", "phi"}, "params");
            sys = cfq::models::qubit_wrong_order(require("kappa"), gamma, number_field(params, "phi", "params", 0.0));
            target = cfq::basis::qubit::ground();
            rho0 = cfq::DensityMatrix::pure(cfq::basis::qubit::excited());
        } else if (model == "qutrit") {
            reject_unknown(params, {"kappa", "gamma"}, "params");
            const double kappa = require("kappa");
            const auto t = target_int();
            const auto gains = cfq::solve_qutrit_gains(t, kappa, gamma);
            sys = cfq::models::qutrit_cf(kappa, gamma, gains.u1, gains.u2, imp);
            target = cfq::scenarios::qutrit_target_vector(t, kappa, gamma);
            rho0 = cfq::DensityMatrix::maximally_mixed(3);
        } else {
            throw SchemaError("model", "unknown model '" + model + "'");
        }
    } catch (const cfq::InvalidArgument& e) {
        throw SchemaError("params", e.what());
    }

    cfq::IntegrationOptions io;
    io.t_end = number_field(time, "t_end", "time", 20.0 / gamma);
    io.samples = samples;
    io.dt_max = std::min(0.05 / gamma, io.t_end / 10.0);
    auto traj = cfq::integrate(*sys, rho0, io);
    traj.add_observable("fidelity", [&](const cfq::DensityMatrix& r) { return cfq::fidelity(target, r); });
    traj.add_observable("purity", [](const cfq::DensityMatrix& r) { return cfq::purity(r); });
    cfq::io::trajectory_table(traj).write((dir / (model + "_trajectory.csv")).string());

    const auto rho_inf = cfq::steady_state(*sys);
    cfq::io::write_json((dir / (model + "_steady_state.json")).string(), cfq::io::to_json(rho_inf));
    std::cout << model << ": steady fidelity " << fmt4(cfq::fidelity(target, rho_inf)) << ", steady purity "
              << fmt4(cfq::purity(rho_inf)) << '\n';
    Json summary{{"config", cfg},
                 {"steady_fidelity", cfq::fidelity(target, rho_inf)},
                 {"steady_purity", cfq::purity(rho_inf)},
                 {"final_fidelity", traj.observable("fidelity").back()}};
    return finish(dir, model, std::move(summary), {});
}

// ------------------------------------------------------------------ report

int cmd_report(const std::string& results_dir, bool as_json) {
    if (!fs::is_directory(results_dir)) {
        std::cerr << "report: '" << results_dir << "' is not a directory\n";
        return kExitConfig;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(results_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 13 && name.ends_with(".summary.json")) files.push_back(entry.path());
    }
    if (files.empty()) {
        std::cerr << "report: no results in '" << results_dir << "'\n";
        return kExitConfig;
    }
    std::sort(files.begin(), files.end());
    bool ok = true;
    Json rows = Json::array();
    for (const auto& f : files) {
        const Json s = cfq::io::read_json_file(f.string());
        const std::string scenario = s.value("scenario", f.stem().stem().string());
        for (const auto& c : s.value("checks", Json::array())) {
            const bool pass = c.value("pass", false);
            ok = ok && pass;
            rows.push_back({{"scenario", scenario}, {"name", c["name"]}, {"target", c["target"]},
                            {"got", c["got"]}, {"pass", pass}});
            if (!as_json) {
                std::cout << scenario << " | " << c["name"].get<std::string>() << ": target "
                          << fmt4(c["target"].get<double>()) << ", got " << fmt4(c["got"].get<double>()) << ", "
                          << (pass ? "PASS" : "FAIL") << '\n';
            }
        }
    }
    if (as_json) std::cout << Json{{"rows", rows}, {"all_pass", ok}}.dump(2) << '\n';
    return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherent-feedback open quantum system scenarios"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_flag;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("-o,--out", out_flag, "Output directory (default: $CFQ_OUT_DIR or ./results)");
    app.add_option("-j,--workers", workers, "Worker threads for sweeps and Monte Carlo")->check(CLI::PositiveNumber);

    QubitSweepArgs qs;
    auto* c_qs = app.add_subcommand("qubit-sweep", "Steady-state fidelity over the Bloch z grid");
    c_qs->add_option("--kappa-over-gamma-grid", qs.ratio_grid, "Comma list of kappa/gamma (overrides the z grid)");
    c_qs->add_option("--delta", qs.deltas, "Comma list of detunings in units of gamma")->capture_default_str();
    c_qs->add_option("--z-min", qs.opt.z_min)->capture_default_str();
    c_qs->add_option("--z-max", qs.opt.z_max)->capture_default_str();
    c_qs->add_option("--points", qs.opt.points)->capture_default_str();
    c_qs->add_option("--eps1", qs.opt.eps1_over_gamma, "Extra decay rate / gamma")->capture_default_str();
    c_qs->add_option("--eps2", qs.opt.eps2_over_kappa, "Extra dephasing rate / kappa")->capture_default_str();
    c_qs->add_flag("--ideal", qs.opt.ideal, "Drop every imperfection");

    cfq::scenarios::QutritTrajectoryOptions qt;
    auto* c_qt = app.add_subcommand("qutrit", "Ideal qutrit trajectories for each target");
    c_qt->add_option("--kappa", qt.kappa)->capture_default_str();
    c_qt->add_option("--gamma", qt.gamma)->capture_default_str();
    c_qt->add_option("--t-end", qt.t_end)->capture_default_str();
    c_qt->add_option("--samples", qt.samples, "Stored states per trajectory, t = 0 included")->capture_default_str();
    c_qt->add_option("--random-initial", qt.random_initial)->capture_default_str();
    c_qt->add_option("--seed", qt.seed)->capture_default_str();

    cfq::scenarios::QutritMonteCarloOptions mc;
    std::vector<int> mc_targets;
    auto* c_mc = app.add_subcommand("qutrit-mc", "Robustness ensemble under detuning, mismatch and loss");
    c_mc->add_option("--kappa", mc.kappa)->capture_default_str();
    c_mc->add_option("--gamma", mc.gamma)->capture_default_str();
    c_mc->add_option("--samples", mc.samples)->capture_default_str();
    c_mc->add_option("--seed", mc.seed)->capture_default_str();
    c_mc->add_option("--target", mc_targets, "Targets among 1,2,3 (default all)")->delimiter(',');

    cfq::scenarios::SqueezeOptions sq;
    auto* c_sq = app.add_subcommand("squeeze", "Gaussian spin-squeezing moments and wrong-order comparison");
    c_sq->add_option("--kappa", sq.kappa)->capture_default_str();
    c_sq->add_option("--gamma", sq.gamma)->capture_default_str();
    c_sq->add_option("--t-end", sq.t_end)->capture_default_str();
    c_sq->add_option("--samples", sq.samples, "Stored time points, t = 0 included")->capture_default_str();

    cfq::scenarios::FockOptions fk;
    std::string snaps = "0,1.1,4.0";
    double eps = 0.0;
    auto* c_fk = app.add_subcommand("fock", "Single-photon generation: F(t), P(t) and Q snapshots");
    c_fk->add_option("--kappa", fk.kappa)->capture_default_str();
    c_fk->add_option("--gamma", fk.gamma)->capture_default_str();
    c_fk->add_option("--g", fk.g, "Displacement gain")->capture_default_str();
    c_fk->add_option("--levels", fk.levels, "Fock truncation N")->capture_default_str();
    c_fk->add_option("--eps", eps, "Photon leakage rate")->capture_default_str();
    c_fk->add_option("--gamma-t-end", fk.gamma_t_end)->capture_default_str();
    c_fk->add_option("--samples", fk.samples, "Stored time points, t = 0 included")->capture_default_str();
    c_fk->add_option("--snap", snaps, "Comma list of gamma*t for Q snapshots")->capture_default_str();
    c_fk->add_option("--grid-extent", fk.grid.re_max, "Q grid half-width")->capture_default_str();
    c_fk->add_option("--grid-points", fk.grid.n_re, "Q grid points per axis")->capture_default_str();

    std::string pipeline;
    auto* c_cp = app.add_subcommand("compose", "Compose an SLH pipeline from operator JSON");
    c_cp->add_option("pipeline", pipeline, "Pipeline JSON file")->required();

    std::string config;
    auto* c_run = app.add_subcommand("run", "Run a scenario config file");
    c_run->add_option("config", config, "Scenario JSON")->required();

    std::string results;
    bool report_json = false;
    auto* c_rep = app.add_subcommand("report", "Tabulate checks from a results directory");
    c_rep->add_option("results_dir", results)->required();
    c_rep->add_flag("--json", report_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (c_rep->parsed()) return cmd_report(results, report_json);

    const fs::path dir = resolve_out_dir(out_flag);
    std::string scenario = app.get_subcommands().front()->get_name();
    try {
        fs::create_directories(dir);
        if (c_qs->parsed()) return cmd_qubit_sweep(dir, qs);
        if (c_qt->parsed()) return cmd_qutrit(dir, qt);
        if (c_mc->parsed()) {
            mc.workers = workers;
            return cmd_qutrit_mc(dir, mc, mc_targets);
        }
        if (c_sq->parsed()) return cmd_squeeze(dir, sq);
        if (c_fk->parsed()) {
            fk.grid.re_min = fk.grid.im_min = -fk.grid.re_max;
            fk.grid.im_max = fk.grid.re_max;
            fk.grid.n_im = fk.grid.n_re;
            return cmd_fock(dir, fk, snaps, eps);
        }
        if (c_cp->parsed()) return cmd_compose(dir, pipeline);
        if (c_run->parsed()) return cmd_run(dir, config, workers);
    } catch (const SchemaError& e) {
        std::cerr << scenario << ": config error at " << e.what() << '\n';
        return kExitConfig;
    } catch (const cfq::InvalidArgument& e) {
        std::cerr << scenario << ": invalid parameter: " << e.what() << '\n';
        return kExitConfig;
    } catch (const cfq::NotHermitian& e) {
        std::cerr << scenario << ": invalid operator: " << e.what() << '\n';
        return kExitConfig;
    } catch (const cfq::DimensionMismatch& e) {
        std::cerr << scenario << ": invalid operator: " << e.what() << '\n';
        return kExitConfig;
    } catch (const cfq::Error& e) {
        std::cerr << scenario << ": numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const fs::filesystem_error& e) {
        std::cerr << scenario << ": " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitConfig;
}
