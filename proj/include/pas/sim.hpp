#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pas/adp.hpp"
#include "pas/params.hpp"
#include "pas/rng.hpp"
#include "pas/state.hpp"

namespace pas {

/// A policy chooses a label index for the observed state.
using Policy =
    std::function<int(const State&, const ModelParams&, std::span<const DecisionLabel>)>;

Policy fixed_policy(int label_index);
Policy weights_policy(Weights w);

/// Everything observable about one simulated day.
struct DayRecord {
    int day = 0;
    State state;  // as observed before the decision
    int label_index = 0;
    double cost = 0.0;
    Grid<int> post_occupancy;
    Grid<int> departures;
    std::vector<int> admitted;   // per type
    int redirected = 0;
    int raw_arrivals = 0;
    int nonprimary = 0;          // census outside rank-1 wards, post decision
    int transfers = 0;           // transfers the action performed
    int extra_transfers = 0;     // transfers an unbounded budget would have added
};

struct SimOptions {
    int warmup_days = 100;     // excluded from means when the horizon allows it
    int threads = 1;
    bool shadow_transfers = true;   // track the unbounded-budget transfer need
    bool retain_first_rep = false;  // keep rep 0's day records for export
};

/// One day under `policy`: decide, apply, then sample departures and arrivals
/// from `rng`. Bit-identical results for identical inputs and seed.
std::pair<State, DayRecord> simulate_day(const State& s, const Policy& policy,
                                         const ModelParams& params,
                                         std::span<const DecisionLabel> labels, int day,
                                         RandomStream& rng, bool shadow_transfers = true);

struct ReplicationStats {
    double mean_cost = 0.0;
    double mean_nonprimary = 0.0;
    double mean_redirected = 0.0;
    std::vector<double> label_freq;
    double zero_extra_fraction = 0.0;
    int days_counted = 0;
};

struct SimReport {
    std::vector<ReplicationStats> replications;
    ReplicationStats overall;                  // equal-weight average over replications
    std::map<int, long> extra_transfer_hist;   // counted days by extra-transfer need
    std::vector<DayRecord> first_rep_days;     // filled when retain_first_rep is set
    int days = 0;
    int warmup_used = 0;
    uint64_t base_seed = 0;
};

/// `reps` independent trajectories of `days` days each; the stream of
/// replication r, day d derives deterministically from (base_seed, r, d), so
/// separate policies simulated with the same base seed share their random
/// numbers day by day.
SimReport run_replications(const ModelParams& params, std::span<const DecisionLabel> labels,
                           const Policy& policy, int days, int reps, uint64_t base_seed,
                           const SimOptions& options = {});

struct NamedPolicy {
    std::string name;
    Policy policy;
};

/// Runs every policy on common random numbers and returns the reports in the
/// same order.
std::vector<SimReport> compare_policies(const ModelParams& params,
                                        std::span<const DecisionLabel> labels,
                                        const std::vector<NamedPolicy>& policies, int days,
                                        int reps, uint64_t base_seed,
                                        const SimOptions& options = {});

} // namespace pas
