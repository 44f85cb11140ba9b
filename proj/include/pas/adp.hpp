#pragma once

#include <span>
#include <vector>

#include "pas/features.hpp"
#include "pas/linalg.hpp"
#include "pas/params.hpp"
#include "pas/rng.hpp"
#include "pas/state.hpp"

namespace pas {

struct Weights {
    FeatureScheme scheme = FeatureScheme::FullState;
    std::vector<double> theta;
    int iteration = 0;
};

/// Greedy decision given a weight vector: argmin over labels of the realized
/// action's cost plus the expected next value; ties go to the lowest label
/// index.
struct GreedyChoice {
    int label_index = 0;
    Action action;
    PostDecisionState post;
    double score = 0.0;
    double cost = 0.0;
};

GreedyChoice greedy_decision(const State& s, const Weights& w, const ModelParams& params,
                             std::span<const DecisionLabel> labels);

/// LSTD accumulation for one observed transition; A and b carry running sums
/// of the per-step outer products scaled by 1/M.
void lstd_accumulate(std::span<const double> phi_now, std::span<const double> phi_next,
                     double cost, double gain_estimate, double inv_steps, DenseMatrix& A,
                     std::vector<double>& b);

struct SweepDiagnostics {
    double pivot_ratio = 0.0;  // min/max pivot of the LSTD solve
    bool ridge_applied = false;
    double ridge = 0.0;
};

/// Solves A theta = b, falling back to a Tikhonov-regularized system (ridge
/// 1e-8 trace(A)/F) when the plain solve is singular or badly pivoted.
std::vector<double> lstd_solve(const DenseMatrix& A, const std::vector<double>& b,
                               SweepDiagnostics& diag);

/// One approximate-policy-iteration sweep: simulates `steps` transitions under
/// the theta-greedy policy from a burned-in random start, accumulates the LSTD
/// normal equations against the current gain estimate, and solves for the next
/// weights.
Weights lstd_sweep(const Weights& w, double gain_estimate, long steps, const ModelParams& params,
                   std::span<const DecisionLabel> labels, RandomStream& rng,
                   SweepDiagnostics* diag_out = nullptr);

/// Average cost of `steps` theta-greedy transitions from a burned-in random
/// start.
double estimate_gain(const Weights& w, long steps, const ModelParams& params,
                     std::span<const DecisionLabel> labels, RandomStream& rng);

struct TrainReport {
    std::vector<std::vector<double>> theta_trace;  // N+1 weight vectors
    std::vector<double> gain_trace;                // N+1 gain estimates
    std::vector<SweepDiagnostics> diagnostics;     // one per sweep
    Weights final_weights;
};

/// Full approximate policy iteration: initial gain estimate, then `iterations`
/// sweeps each followed by a fresh gain estimate.
TrainReport train(const ModelParams& params, FeatureScheme scheme,
                  std::span<const DecisionLabel> labels, std::vector<double> theta0,
                  int iterations, long steps_per_sweep, uint64_t seed);

/// Number of burn-in days used to draw the random starting state of each
/// sweep and gain estimate.
inline constexpr int kBurnInDays = 100;

} // namespace pas
