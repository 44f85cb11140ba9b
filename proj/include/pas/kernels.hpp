#pragma once

#include <map>

#include "pas/params.hpp"
#include "pas/pmf.hpp"
#include "pas/rng.hpp"
#include "pas/state.hpp"

namespace pas {

/// Departure counts drawn cell by cell: z[k][i] ~ Bin(n_a[k][i], p[k][i]).
Grid<int> sample_departures(const PostDecisionState& post, const ModelParams& params,
                            RandomStream& rng);

struct ArrivalSample {
    std::vector<int> admitted;  // q'[i]
    int redirected = 0;         // raw arrivals turned away (capacity-limited only)
    int raw_total = 0;          // total Poisson draw before any cap
};

/// Day's arrivals given the occupancy left after departures. Unrestricted:
/// independent Poisson draws per type. Capacity-limited: one Poisson total,
/// admitted up to the free beds (and the waiting capacity, when finite), split
/// multinomially with weights lambda_i / lambda; the rest is redirected.
ArrivalSample sample_arrivals(const Grid<int>& occupancy_after_departures,
                              const ModelParams& params, RandomStream& rng);

/// One stochastic day after the decision: departures then arrivals. Returns
/// the next observed state; optionally reports the pieces.
State step_dynamics(const PostDecisionState& post, const ModelParams& params, RandomStream& rng,
                    Grid<int>* departures_out = nullptr, ArrivalSample* arrivals_out = nullptr);

/// Exact expected number of admitted arrivals E(Q) for a post-decision state
/// under the capacity-limited regime:
///   E(Q) = sum_z P(Z = z) * E(min(Poisson(lambda), beds free given z)),
/// with Z the total-departure count, a sum of independent binomials over the
/// occupied cells. Returns lambda unchanged under the unrestricted regime.
double expected_admitted(const PostDecisionState& post, const ModelParams& params);

/// Exact one-day transition law from (state, decision label): all departure
/// matrices crossed with all admissible arrival vectors. Requires the
/// capacity-limited regime with a finite arrival support.
std::map<State, double> transition_pmf(const State& s, const DecisionLabel& label,
                                       const ModelParams& params);

} // namespace pas
