#pragma once

#include <string>
#include <vector>

#include "pas/params.hpp"
#include "pas/state.hpp"

namespace pas {

/// One violated decision constraint with the offending indices (-1 = n/a).
struct ConstraintViolation {
    std::string constraint;  // assign-complete | ward-capacity | transfer-availability | one-direction
    int ward = -1;
    int other_ward = -1;
    int type = -1;

    std::string describe() const;
};

struct ValidationResult {
    std::vector<ConstraintViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks a raw action against the decision constraints: every queued patient
/// assigned, ward capacities respected post decision, transfers limited to
/// patients actually present, and per (ward pair, type) transfers flowing in
/// one direction only. Throws DimensionError on shape mismatches.
ValidationResult validate_action(const State& s, const Action& a, const ModelParams& params);

/// Post-decision occupancy
///   n_a[k][i] = n[k][i] + x[k][i] + sum_{l != k} (y[l][k][i] - y[k][l][i]).
/// Precondition: validate_action(s, a, params) passed.
PostDecisionState apply_action(const State& s, const Action& a);

/// Immediate cost of a decision: assignment + transfer + post-decision penalty.
/// The penalty term accrues per distinct rate (each rate multiplied by its
/// total patient count), so uniform-rate configurations reduce to a single
/// product of the rate and the census.
double action_cost(const State& s, const Action& a, const ModelParams& params);

/// Number of patients sitting outside their rank-1 ward, post decision.
int nonprimary_census(const PostDecisionState& post, const ModelParams& params);

/// All states satisfying the occupancy, queue-capacity and (when configured)
/// joint-admission constraints, in lexicographic order over the flattened
/// (occupancy, queue) vector. Throws SizeCapError beyond `cap` states.
std::vector<State> enumerate_states(const ModelParams& params, long cap = 1000000);

/// State count without materializing the list; stops early at `cap`+1.
long count_states(const ModelParams& params, long cap = 1000000);

/// Closed-form size of the post-decision occupancy space,
/// prod_k C(m_k + I, I); returned as a double because realistic instances
/// overflow 64-bit integers.
double post_state_space_size(const ModelParams& params);

} // namespace pas
