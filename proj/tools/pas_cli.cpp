#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "pas/adp.hpp"
#include "pas/config.hpp"
#include "pas/csv.hpp"
#include "pas/errors.hpp"
#include "pas/exact.hpp"
#include "pas/model.hpp"
#include "pas/pmf.hpp"
#include "pas/sim.hpp"

namespace fs = std::filesystem;
using namespace pas;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSizeCap = 4;

struct OutputContext {
    fs::path dir;
    uint64_t config_hash = 0;
    uint64_t seed = 0;

    CsvWriter open(const std::string& name) const {
        fs::create_directories(dir);
        CsvWriter w((dir / name).string());
        w.comment("tool_version", kToolVersion);
        w.comment("config_hash", std::to_string(config_hash));
        w.comment("seed", std::to_string(seed));
        return w;
    }
};

std::string render_state(const State& s) { return to_string(s); }

FeatureScheme scheme_for(const ModelParams& params, const std::string& requested) {
    if (requested == "full") return FeatureScheme::FullState;
    if (requested == "primary-other") return FeatureScheme::PrimaryOtherQueue;
    if (requested != "auto") throw ConfigError("unknown feature scheme: " + requested);
    return params.num_wards == params.num_types ? FeatureScheme::PrimaryOtherQueue
                                                : FeatureScheme::FullState;
}

Weights load_weights(const std::string& path, const ModelParams& params) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open weights file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("weights parse error: " + std::string(e.what()));
    }
    Weights w;
    std::string scheme = j.value("scheme", "full");
    w.scheme = scheme == "primary-other" ? FeatureScheme::PrimaryOtherQueue
                                         : FeatureScheme::FullState;
    w.theta = j.value("theta", std::vector<double>{});
    w.iteration = j.value("iterations", 0);
    if (static_cast<int>(w.theta.size()) != feature_dim(w.scheme, params))
        throw ConfigError("weights dimension " + std::to_string(w.theta.size()) +
                          " does not match the feature scheme on this instance");
    return w;
}

/// A policy spec is a1 | a2 | a3 | weights:<file>. The label aliases carry
/// transfer budgets 0, 4 and 10.
struct PolicySpec {
    std::string name;
    std::vector<DecisionLabel> labels;
    Policy policy;
};

PolicySpec parse_policy(const std::string& spec, const AppConfig& cfg) {
    if (spec == "a1") return {"a1", {DecisionLabel::no_transfer()}, fixed_policy(0)};
    if (spec == "a2") return {"a2", {DecisionLabel::bounded_transfer(4)}, fixed_policy(0)};
    if (spec == "a3") return {"a3", {DecisionLabel::bounded_transfer(10)}, fixed_policy(0)};
    if (spec.rfind("weights:", 0) == 0) {
        Weights w = load_weights(spec.substr(8), cfg.params);
        return {"greedy", cfg.decisions, weights_policy(std::move(w))};
    }
    throw ConfigError("unknown policy spec '" + spec + "' (use a1|a2|a3|weights:<file>)");
}

void write_report(const OutputContext& out, const std::string& prefix, const SimReport& report,
                  const std::vector<DecisionLabel>& labels) {
    {
        CsvWriter w = out.open(prefix + "_replications.csv");
        std::vector<std::string> head = {"replication", "mean_cost", "mean_nonprimary",
                                         "mean_redirected", "zero_extra_fraction"};
        for (const auto& label : labels) head.push_back("freq_" + label_name(label));
        w.header(head);
        auto emit = [&](const std::string& id, const ReplicationStats& st) {
            std::vector<std::string> row = {id, CsvWriter::num(st.mean_cost),
                                            CsvWriter::num(st.mean_nonprimary),
                                            CsvWriter::num(st.mean_redirected),
                                            CsvWriter::num(st.zero_extra_fraction)};
            for (double f : st.label_freq) row.push_back(CsvWriter::num(f));
            w.row(row);
        };
        for (size_t r = 0; r < report.replications.size(); ++r)
            emit(std::to_string(r), report.replications[r]);
        emit("mean", report.overall);
    }
    if (!report.first_rep_days.empty()) {
        CsvWriter w = out.open(prefix + "_days.csv");
        w.header({"replication", "day", "metric", "value"});
        for (const auto& day : report.first_rep_days) {
            auto emit = [&](const char* metric, const std::string& value) {
                w.row({"0", std::to_string(day.day), metric, value});
            };
            emit("label", label_name(labels[static_cast<size_t>(day.label_index)]));
            emit("cost", CsvWriter::num(day.cost));
            emit("nonprimary", CsvWriter::num(day.nonprimary));
            emit("redirected", CsvWriter::num(day.redirected));
            emit("admitted", CsvWriter::num([&] {
                     int total = 0;
                     for (int v : day.admitted) total += v;
                     return total;
                 }()));
            emit("extra_transfers", CsvWriter::num(day.extra_transfers));
        }
    }
    if (!report.extra_transfer_hist.empty()) {
        CsvWriter w = out.open(prefix + "_extra_transfers.csv");
        w.header({"extra_transfers_needed", "days"});
        for (const auto& [need, count] : report.extra_transfer_hist)
            w.row({CsvWriter::num(need), CsvWriter::num(count)});
    }
}

void print_report_line(const std::string& name, const SimReport& report) {
    std::cout << name << ": mean_cost=" << report.overall.mean_cost
              << " mean_nonprimary=" << report.overall.mean_nonprimary
              << " mean_redirected=" << report.overall.mean_redirected
              << " zero_extra_fraction=" << report.overall.zero_extra_fraction << "\n";
}

void dump_matrices(const OutputContext& out, const FiniteMdp& mdp) {
    for (size_t lab = 0; lab < mdp.labels.size(); ++lab) {
        std::string tag = label_name(mdp.labels[lab]);
        CsvWriter w = out.open("transition_" + tag + ".csv");
        std::vector<std::string> head = {"from"};
        for (int t = 0; t < mdp.size(); ++t) head.push_back("s" + std::to_string(t));
        w.header(head);
        for (int s = 0; s < mdp.size(); ++s) {
            std::vector<std::string> row = {std::to_string(s)};
            for (int t = 0; t < mdp.size(); ++t)
                row.push_back(CsvWriter::num(mdp.transition[lab][static_cast<size_t>(s)][static_cast<size_t>(t)]));
            w.row(row);
        }
    }
    CsvWriter w = out.open("costs.csv");
    std::vector<std::string> head = {"state"};
    for (const auto& label : mdp.labels) head.push_back(label_name(label));
    w.header(head);
    for (int s = 0; s < mdp.size(); ++s) {
        std::vector<std::string> row = {std::to_string(s)};
        for (size_t lab = 0; lab < mdp.labels.size(); ++lab)
            row.push_back(CsvWriter::num(mdp.cost[lab][static_cast<size_t>(s)]));
        w.row(row);
    }
}

int cmd_solve_exact(const AppConfig& cfg, const OutputContext& out, long state_cap,
                    bool dump) {
    long count;
    try {
        count = count_states(cfg.params, state_cap);
    } catch (const SizeCapError&) {
        std::ostringstream msg;
        msg << "instance too large for exact solution";
        double post = post_state_space_size(cfg.params);
        msg << " (post-decision space alone has about " << std::scientific << post
            << " states); use the train subcommand instead";
        throw SizeCapError(msg.str());
    }
    std::cout << "states: " << count << "\n";

    FiniteMdp mdp = build_mdp(cfg.params, cfg.decisions, state_cap);
    ExactSolution sol = policy_iteration(mdp);

    std::cout.setf(std::ios::fixed);
    std::cout.precision(4);
    std::cout << "gain: " << sol.gain << "\n";
    std::cout.unsetf(std::ios::fixed);
    std::cout.precision(17);
    std::cout << "gain_full: " << sol.gain << "\n";
    std::cout << "sweeps: " << sol.sweep_gains.size() << "\n";
    std::cout << "max_residual: " << sol.max_residual << "\n";

    if (mdp.size() <= 50) {
        for (int s = 0; s < mdp.size(); ++s)
            std::cout << "  " << render_state(mdp.states[static_cast<size_t>(s)]) << " -> "
                      << label_name(mdp.labels[static_cast<size_t>(sol.policy[static_cast<size_t>(s)])])
                      << "\n";
    }
    {
        CsvWriter w = out.open("policy.csv");
        w.header({"state_index", "state", "label"});
        for (int s = 0; s < mdp.size(); ++s)
            w.row({std::to_string(s), render_state(mdp.states[static_cast<size_t>(s)]),
                   label_name(mdp.labels[static_cast<size_t>(sol.policy[static_cast<size_t>(s)])])});
    }
    {
        CsvWriter w = out.open("bias.csv");
        w.header({"state_index", "bias"});
        for (int s = 0; s < mdp.size(); ++s)
            w.row({std::to_string(s), CsvWriter::num(sol.bias[static_cast<size_t>(s)])});
    }
    if (dump) dump_matrices(out, mdp);
    return 0;
}

int cmd_train(const AppConfig& cfg, const OutputContext& out, int iterations, long steps,
              uint64_t seed, const std::string& scheme_name) {
    FeatureScheme scheme = scheme_for(cfg.params, scheme_name);
    int dim = feature_dim(scheme, cfg.params);
    TrainReport report = train(cfg.params, scheme, cfg.decisions,
                               std::vector<double>(static_cast<size_t>(dim), 1e-4), iterations,
                               steps, seed);

    {
        CsvWriter w = out.open("theta_trace.csv");
        std::vector<std::string> head = {"iteration"};
        for (int f = 0; f < dim; ++f) head.push_back("theta_" + std::to_string(f));
        w.header(head);
        for (size_t n = 0; n < report.theta_trace.size(); ++n) {
            std::vector<std::string> row = {std::to_string(n)};
            for (double t : report.theta_trace[n]) row.push_back(CsvWriter::num(t));
            w.row(row);
        }
    }
    {
        CsvWriter w = out.open("e_trace.csv");
        w.header({"iteration", "gain_estimate", "pivot_ratio", "ridge_applied"});
        for (size_t n = 0; n < report.gain_trace.size(); ++n) {
            std::string pivot = "-", ridge = "-";
            if (n > 0) {
                pivot = CsvWriter::num(report.diagnostics[n - 1].pivot_ratio);
                ridge = report.diagnostics[n - 1].ridge_applied ? "1" : "0";
            }
            w.row({std::to_string(n), CsvWriter::num(report.gain_trace[n]), pivot, ridge});
        }
    }
    {
        fs::create_directories(out.dir);
        nlohmann::json j;
        j["scheme"] = scheme == FeatureScheme::PrimaryOtherQueue ? "primary-other" : "full";
        j["theta"] = report.final_weights.theta;
        j["iterations"] = report.final_weights.iteration;
        j["config_hash"] = out.config_hash;
        j["seed"] = seed;
        j["tool_version"] = kToolVersion;
        std::ofstream w(out.dir / "weights.json");
        w << j.dump(2) << "\n";
    }
    std::cout << "final_gain_estimate: " << report.gain_trace.back() << "\n";
    for (size_t n = 0; n < report.gain_trace.size(); ++n)
        std::cout << "E_" << n << ": " << report.gain_trace[n] << "\n";
    return 0;
}

int cmd_simulate(const AppConfig& cfg, const OutputContext& out, const std::string& policy_spec,
                 int days, int reps, uint64_t seed, int threads) {
    PolicySpec ps = parse_policy(policy_spec, cfg);
    SimOptions opt;
    opt.threads = threads;
    opt.retain_first_rep = true;
    SimReport report =
        run_replications(cfg.params, ps.labels, ps.policy, days, reps, seed, opt);
    print_report_line(ps.name, report);
    write_report(out, ps.name, report, ps.labels);
    return 0;
}

int cmd_compare(const AppConfig& cfg, const OutputContext& out,
                const std::vector<std::string>& specs, int days, int reps, uint64_t seed,
                int threads) {
    if (specs.size() < 2) throw ConfigError("compare needs at least two --policy entries");
    SimOptions opt;
    opt.threads = threads;
    std::cout << "policy  mean_cost  mean_nonprimary  mean_redirected\n";
    for (const auto& spec : specs) {
        PolicySpec ps = parse_policy(spec, cfg);
        SimReport report =
            run_replications(cfg.params, ps.labels, ps.policy, days, reps, seed, opt);
        std::cout << ps.name << "  " << report.overall.mean_cost << "  "
                  << report.overall.mean_nonprimary << "  " << report.overall.mean_redirected
                  << "\n";
        write_report(out, ps.name, report, ps.labels);
    }
    return 0;
}

int cmd_dist(const OutputContext& out, const std::string& terms_spec,
             const std::string& config_path, const std::string& state_path) {
    std::vector<BinomialTerm> terms;
    if (!terms_spec.empty()) {
        std::stringstream ss(terms_spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto colon = item.find(':');
            if (colon == std::string::npos)
                throw ConfigError("bad term '" + item + "', expected trials:prob");
            terms.push_back({std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
        }
    } else if (!config_path.empty() && !state_path.empty()) {
        AppConfig cfg = load_config(config_path);
        std::ifstream in(state_path);
        if (!in) throw ConfigError("cannot open state file: " + state_path);
        nlohmann::json j;
        in >> j;
        auto occ = j.at("occupancy").get<std::vector<std::vector<int>>>();
        for (int k = 0; k < cfg.params.num_wards; ++k)
            for (int i = 0; i < cfg.params.num_types; ++i) {
                int n = occ.at(static_cast<size_t>(k)).at(static_cast<size_t>(i));
                if (n > 0) terms.push_back({n, cfg.params.departure_prob(k, i)});
            }
    } else {
        throw ConfigError("dist needs --terms or both --config and --state");
    }
    if (terms.empty()) throw ConfigError("empty term list");

    Pmf pmf = sum_binomial_pmf(terms);
    CsvWriter w = out.open("dist.csv");
    w.header({"value", "probability"});
    for (size_t v = 0; v < pmf.probs.size(); ++v)
        w.row({std::to_string(pmf.offset + static_cast<int>(v)), CsvWriter::num(pmf.probs[v])});
    std::cout << "support: 0.." << pmf.max_value() << "\n";
    std::cout << "mean: " << pmf.mean() << "\n";
    std::cout << "variance: " << pmf.variance() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"patient assignment scheduling: exact and approximate average-cost solvers"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", policy = "a1", scheme = "auto";
    std::vector<std::string> policies;
    std::string terms, state_path;
    bool dump = false;
    uint64_t seed = 1;
    int days = 1825, reps = 1000, iterations = 10, threads = 2;
    long steps = 100000, state_cap = 5000;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", config_path, "instance description file");
        if (needs_config) opt->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "base random seed");
    };

    CLI::App* solve = app.add_subcommand("solve-exact", "enumerate states and run policy iteration");
    add_common(solve, true);
    solve->add_option("--state-cap", state_cap, "refuse instances beyond this many states");
    solve->add_flag("--dump-matrices", dump, "write transition matrices and cost vectors as CSV");

    CLI::App* train_cmd = app.add_subcommand("train", "approximate policy iteration (LSTD)");
    add_common(train_cmd, true);
    train_cmd->add_option("--iterations", iterations, "number of policy-iteration sweeps");
    train_cmd->add_option("--steps", steps, "simulated transitions per sweep");
    train_cmd->add_option("--scheme", scheme, "feature scheme: auto|full|primary-other");

    CLI::App* sim = app.add_subcommand("simulate", "seeded replications under one policy");
    add_common(sim, true);
    sim->add_option("--policy", policy, "a1|a2|a3|weights:<file>");
    sim->add_option("--days", days, "days per replication");
    sim->add_option("--reps", reps, "independent replications");
    sim->add_option("--threads", threads, "replication worker threads");

    CLI::App* cmp = app.add_subcommand("compare", "common-random-number policy comparison");
    add_common(cmp, true);
    cmp->add_option("--policy", policies, "policy specs (repeatable)");
    cmp->add_option("--days", days, "days per replication");
    cmp->add_option("--reps", reps, "independent replications");
    cmp->add_option("--threads", threads, "replication worker threads");

    CLI::App* dist = app.add_subcommand("dist", "exact sum-of-binomials distribution");
    add_common(dist, false);
    dist->add_option("--terms", terms, "comma list of trials:prob terms");
    dist->add_option("--state", state_path, "state file (occupancy matrix), with --config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        OutputContext out;
        out.dir = out_dir;
        out.seed = seed;

        if (dist->parsed()) return cmd_dist(out, terms, config_path, state_path);

        AppConfig cfg = load_config(config_path);
        out.config_hash = cfg.hash;
        if (solve->parsed()) return cmd_solve_exact(cfg, out, state_cap, dump);
        if (train_cmd->parsed()) return cmd_train(cfg, out, iterations, steps, seed, scheme);
        if (sim->parsed()) {
            if (reps < 1 || days < 1) throw ConfigError("days and reps must be positive");
            return cmd_simulate(cfg, out, policy, days, reps, seed, threads);
        }
        if (cmp->parsed()) {
            if (reps < 1 || days < 1) throw ConfigError("days and reps must be positive");
            if (policies.empty()) policies = {"a1", "a2", "a3"};
            return cmd_compare(cfg, out, policies, days, reps, seed, threads);
        }
    } catch (const SizeCapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSizeCap;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
