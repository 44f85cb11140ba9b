#pragma once

#include <span>
#include <vector>

#include "pas/params.hpp"
#include "pas/state.hpp"

namespace pas {

enum class FeatureScheme {
    /// The flattened state itself: every occupancy cell, then the queue.
    FullState,
    /// Per ward: own-type count and other-type count; then the queue. Requires
    /// as many wards as types.
    PrimaryOtherQueue,
};

int feature_dim(FeatureScheme scheme, const ModelParams& params);

std::vector<double> feature_map(const State& s, FeatureScheme scheme, const ModelParams& params);

/// Exact conditional expectation of phi(next state) . theta given a
/// post-decision state, using the binomial departure means and the expected
/// admissions split proportionally to the arrival rates. Under the
/// capacity-limited regime the expected admission count is the exact truncated
/// value; under the unrestricted regime it is the total arrival rate.
double expected_next_value(const PostDecisionState& post, std::span<const double> theta,
                           const ModelParams& params, FeatureScheme scheme);

} // namespace pas
