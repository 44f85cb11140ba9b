#pragma once

#include <array>
#include <vector>

#include "pas/params.hpp"
#include "pas/state.hpp"

namespace pas {

/// Finite average-cost MDP over an enumerated state list: one row-stochastic
/// transition matrix and one cost vector per decision label.
struct FiniteMdp {
    std::vector<State> states;
    std::vector<DecisionLabel> labels;
    std::vector<std::vector<std::vector<double>>> transition;  // [label][from][to]
    std::vector<std::vector<double>> cost;                     // [label][state]

    int size() const { return static_cast<int>(states.size()); }
};

/// Builds the MDP by enumerating the state space and expanding the exact
/// transition law of each (state, label) pair; the cost is the immediate cost
/// of the label's realized action.
FiniteMdp build_mdp(const ModelParams& params, const std::vector<DecisionLabel>& labels,
                    long state_cap = 1000000);

/// The 22 states of the small two-ward instance in the order the closed-form
/// matrices index them.
std::array<State, 22> small_instance_states();

/// Closed-form transition matrices and cost vectors for the two-ward,
/// one-bed-each instance with a two-place waiting area (the shape solved in
/// closed form): labels a=1 (no transfers) and a=2 (transfers allowed). States
/// are returned in canonical enumeration order so the result is directly
/// comparable with build_mdp. Throws ConfigError for any other shape.
FiniteMdp closed_form_small_mdp(const ModelParams& params);

struct ExactSolution {
    std::vector<int> policy;          // label index per state
    double gain = 0.0;                // long-run average cost per day
    std::vector<double> bias;         // relative values, bias.back() == 0
    std::vector<double> sweep_gains;  // gain after each evaluation sweep
    double max_residual = 0.0;        // optimality-equation residual
};

/// Howard policy iteration for the average-cost criterion: alternates exact
/// policy evaluation (linear solve with the last state's bias pinned to zero)
/// and greedy improvement until the policy is stable. Assumes a unichain
/// model; a singular evaluation system is reported with the offending policy.
ExactSolution policy_iteration(const FiniteMdp& mdp);

} // namespace pas
