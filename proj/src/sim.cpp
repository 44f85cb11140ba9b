#include "pas/sim.hpp"

#include <thread>

#include "pas/errors.hpp"
#include "pas/kernels.hpp"
#include "pas/model.hpp"
#include "pas/policies.hpp"

namespace pas {

Policy fixed_policy(int label_index) {
    return [label_index](const State&, const ModelParams&, std::span<const DecisionLabel> labels) {
        if (label_index < 0 || label_index >= static_cast<int>(labels.size()))
            throw std::invalid_argument("fixed_policy: label index out of range");
        return label_index;
    };
}

Policy weights_policy(Weights w) {
    return [w = std::move(w)](const State& s, const ModelParams& params,
                              std::span<const DecisionLabel> labels) {
        return greedy_decision(s, w, params, labels).label_index;
    };
}

std::pair<State, DayRecord> simulate_day(const State& s, const Policy& policy,
                                         const ModelParams& params,
                                         std::span<const DecisionLabel> labels, int day,
                                         RandomStream& rng, bool shadow_transfers) {
    DayRecord rec;
    rec.day = day;
    rec.state = s;
    rec.label_index = policy(s, params, labels);
    if (rec.label_index < 0 || rec.label_index >= static_cast<int>(labels.size()))
        throw std::invalid_argument("simulate_day: policy chose an unknown label");

    Action action;
    try {
        action = realize_decision(s, labels[static_cast<size_t>(rec.label_index)], params);
    } catch (const InfeasibleError& e) {
        throw InfeasibleError(std::string(e.what()) + " (day " + std::to_string(day) +
                              ", label " +
                              label_name(labels[static_cast<size_t>(rec.label_index)]) + ")");
    }
    PostDecisionState post = apply_action(s, action);
    rec.cost = action_cost(s, action, params);
    rec.transfers = action.total_transfers();
    rec.nonprimary = nonprimary_census(post, params);
    rec.post_occupancy = post.occupancy;

    if (shadow_transfers) {
        Action unbounded = assign_with_transfers(s, params, params.total_capacity);
        int need = unbounded.total_transfers() - rec.transfers;
        rec.extra_transfers = need > 0 ? need : 0;
    }

    ArrivalSample arrivals;
    State next = step_dynamics(post, params, rng, &rec.departures, &arrivals);
    rec.admitted = arrivals.admitted;
    rec.redirected = arrivals.redirected;
    rec.raw_arrivals = arrivals.raw_total;
    return {std::move(next), std::move(rec)};
}

namespace {

struct RepOutcome {
    ReplicationStats stats;
    std::map<int, long> extra_hist;
    std::vector<DayRecord> days;  // retained only for rep 0 when requested
};

RepOutcome run_one_replication(const ModelParams& params, std::span<const DecisionLabel> labels,
                               const Policy& policy, int days, int rep, uint64_t base_seed,
                               const SimOptions& opt, bool retain) {
    RepOutcome out;
    const int warmup = days > opt.warmup_days ? opt.warmup_days : 0;
    out.stats.label_freq.assign(labels.size(), 0.0);

    State s = State::empty(params);
    double cost_sum = 0.0;
    long nonprimary_sum = 0, redirected_sum = 0, zero_extra = 0;
    int counted = 0;
    for (int d = 0; d < days; ++d) {
        RandomStream day_rng = RandomStream::derive(base_seed, static_cast<uint64_t>(rep),
                                                    static_cast<uint64_t>(d));
        auto [next, rec] = simulate_day(s, policy, params, labels, d, day_rng,
                                        opt.shadow_transfers);
        s = std::move(next);
        if (retain) out.days.push_back(rec);
        if (d < warmup) continue;
        ++counted;
        cost_sum += rec.cost;
        nonprimary_sum += rec.nonprimary;
        redirected_sum += rec.redirected;
        out.stats.label_freq[static_cast<size_t>(rec.label_index)] += 1.0;
        if (opt.shadow_transfers) {
            out.extra_hist[rec.extra_transfers] += 1;
            if (rec.extra_transfers == 0) ++zero_extra;
        }
    }
    out.stats.days_counted = counted;
    if (counted > 0) {
        out.stats.mean_cost = cost_sum / counted;
        out.stats.mean_nonprimary = static_cast<double>(nonprimary_sum) / counted;
        out.stats.mean_redirected = static_cast<double>(redirected_sum) / counted;
        for (auto& f : out.stats.label_freq) f /= counted;
        out.stats.zero_extra_fraction = static_cast<double>(zero_extra) / counted;
    }
    return out;
}

} // namespace

SimReport run_replications(const ModelParams& params, std::span<const DecisionLabel> labels,
                           const Policy& policy, int days, int reps, uint64_t base_seed,
                           const SimOptions& options) {
    if (days < 1 || reps < 1)
        throw std::invalid_argument("run_replications: need at least one day and one replication");

    SimReport report;
    report.days = days;
    report.warmup_used = days > options.warmup_days ? options.warmup_days : 0;
    report.base_seed = base_seed;
    report.replications.resize(static_cast<size_t>(reps));

    std::vector<RepOutcome> outcomes(static_cast<size_t>(reps));
    int threads = options.threads > 0 ? options.threads : 1;
    if (threads > reps) threads = reps;
    auto worker = [&](int first, int step) {
        for (int r = first; r < reps; r += step) {
            bool retain = options.retain_first_rep && r == 0;
            outcomes[static_cast<size_t>(r)] = run_one_replication(
                params, labels, policy, days, r, base_seed, options, retain);
        }
    };
    if (threads <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
        pool.reserve(static_cast<size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    worker(t, threads);
                } catch (...) {
                    errors[static_cast<size_t>(t)] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    ReplicationStats& overall = report.overall;
    overall.label_freq.assign(labels.size(), 0.0);
    for (int r = 0; r < reps; ++r) {
        RepOutcome& o = outcomes[static_cast<size_t>(r)];
        report.replications[static_cast<size_t>(r)] = o.stats;
        overall.mean_cost += o.stats.mean_cost;
        overall.mean_nonprimary += o.stats.mean_nonprimary;
        overall.mean_redirected += o.stats.mean_redirected;
        overall.zero_extra_fraction += o.stats.zero_extra_fraction;
        overall.days_counted += o.stats.days_counted;
        for (size_t a = 0; a < labels.size(); ++a)
            overall.label_freq[a] += o.stats.label_freq[a];
        for (const auto& [need, count] : o.extra_hist) report.extra_transfer_hist[need] += count;
        if (options.retain_first_rep && r == 0) report.first_rep_days = std::move(o.days);
    }
    overall.mean_cost /= reps;
    overall.mean_nonprimary /= reps;
    overall.mean_redirected /= reps;
    overall.zero_extra_fraction /= reps;
    for (auto& f : overall.label_freq) f /= reps;
    return report;
}

std::vector<SimReport> compare_policies(const ModelParams& params,
                                        std::span<const DecisionLabel> labels,
                                        const std::vector<NamedPolicy>& policies, int days,
                                        int reps, uint64_t base_seed, const SimOptions& options) {
    if (policies.size() < 2)
        throw std::invalid_argument("compare_policies: need at least two policies");
    std::vector<SimReport> reports;
    reports.reserve(policies.size());
    for (const auto& np : policies)
        reports.push_back(
            run_replications(params, labels, np.policy, days, reps, base_seed, options));
    return reports;
}

} // namespace pas
