#include "pas/adp.hpp"

#include <cmath>
#include <stdexcept>

#include "pas/errors.hpp"
#include "pas/kernels.hpp"
#include "pas/model.hpp"
#include "pas/policies.hpp"

namespace pas {

GreedyChoice greedy_decision(const State& s, const Weights& w, const ModelParams& params,
                             std::span<const DecisionLabel> labels) {
    if (labels.empty()) throw std::invalid_argument("greedy_decision: empty label set");

    GreedyChoice best;
    const double kTieTol = 1e-12;
    for (size_t a = 0; a < labels.size(); ++a) {
        Action action = realize_decision(s, labels[a], params);
        PostDecisionState post = apply_action(s, action);
        double cost = action_cost(s, action, params);
        double score = cost + expected_next_value(post, w.theta, params, w.scheme);
        if (a == 0 || score < best.score - kTieTol) {
            best.label_index = static_cast<int>(a);
            best.action = std::move(action);
            best.post = std::move(post);
            best.score = score;
            best.cost = cost;
        }
    }
    return best;
}

void lstd_accumulate(std::span<const double> phi_now, std::span<const double> phi_next,
                     double cost, double gain_estimate, double inv_steps, DenseMatrix& A,
                     std::vector<double>& b) {
    const int F = static_cast<int>(phi_now.size());
    for (int r = 0; r < F; ++r) {
        double scaled = inv_steps * phi_now[static_cast<size_t>(r)];
        if (scaled == 0.0) continue;
        for (int c = 0; c < F; ++c)
            A(r, c) += scaled * (phi_now[static_cast<size_t>(c)] - phi_next[static_cast<size_t>(c)]);
        b[static_cast<size_t>(r)] += scaled * (cost - gain_estimate);
    }
}

std::vector<double> lstd_solve(const DenseMatrix& A, const std::vector<double>& b,
                               SweepDiagnostics& diag) {
    const int F = A.n;
    SolveInfo info;
    try {
        std::vector<double> theta = solve_dense(A, b, &info);
        diag.pivot_ratio = info.pivot_ratio();
        if (diag.pivot_ratio > 1e-12) {
            bool finite = true;
            for (double t : theta)
                if (!std::isfinite(t)) finite = false;
            if (finite) return theta;
        }
    } catch (const std::runtime_error&) {
        diag.pivot_ratio = 0.0;
    }
    // Singular or nearly so: ridge the diagonal and re-solve.
    diag.ridge_applied = true;
    diag.ridge = 1e-8 * std::fabs(A.trace()) / F;
    if (diag.ridge == 0.0) diag.ridge = 1e-12;
    DenseMatrix reg = A;
    for (int i = 0; i < F; ++i) reg(i, i) += diag.ridge;
    return solve_dense(std::move(reg), b, &info);
}

namespace {

/// Burn in from the empty hospital under the current greedy policy; the
/// resulting state stands in for a "random" start concentrated on the
/// reachable region.
State burned_in_start(const Weights& w, const ModelParams& params,
                      std::span<const DecisionLabel> labels, RandomStream& rng) {
    State s = State::empty(params);
    for (int d = 0; d < kBurnInDays; ++d) {
        GreedyChoice choice = greedy_decision(s, w, params, labels);
        s = step_dynamics(choice.post, params, rng);
    }
    return s;
}

} // namespace

Weights lstd_sweep(const Weights& w, double gain_estimate, long steps, const ModelParams& params,
                   std::span<const DecisionLabel> labels, RandomStream& rng,
                   SweepDiagnostics* diag_out) {
    const int F = feature_dim(w.scheme, params);
    if (steps < F)
        throw std::invalid_argument("lstd_sweep: need at least as many steps as features");

    DenseMatrix A(F);
    std::vector<double> b(static_cast<size_t>(F), 0.0);
    const double inv_steps = 1.0 / static_cast<double>(steps);

    State s = burned_in_start(w, params, labels, rng);
    std::vector<double> phi = feature_map(s, w.scheme, params);
    for (long m = 0; m < steps; ++m) {
        GreedyChoice choice = greedy_decision(s, w, params, labels);
        State next = step_dynamics(choice.post, params, rng);
        std::vector<double> phi_next = feature_map(next, w.scheme, params);
        lstd_accumulate(phi, phi_next, choice.cost, gain_estimate, inv_steps, A, b);
        s = std::move(next);
        phi = std::move(phi_next);
    }

    SweepDiagnostics diag;
    Weights out;
    out.scheme = w.scheme;
    out.theta = lstd_solve(A, b, diag);
    out.iteration = w.iteration + 1;
    if (diag_out) *diag_out = diag;
    return out;
}

double estimate_gain(const Weights& w, long steps, const ModelParams& params,
                     std::span<const DecisionLabel> labels, RandomStream& rng) {
    if (steps < 1) throw std::invalid_argument("estimate_gain: need at least one step");
    State s = burned_in_start(w, params, labels, rng);
    double total = 0.0;
    for (long m = 0; m < steps; ++m) {
        GreedyChoice choice = greedy_decision(s, w, params, labels);
        total += choice.cost;
        s = step_dynamics(choice.post, params, rng);
    }
    return total / static_cast<double>(steps);
}

TrainReport train(const ModelParams& params, FeatureScheme scheme,
                  std::span<const DecisionLabel> labels, std::vector<double> theta0,
                  int iterations, long steps_per_sweep, uint64_t seed) {
    if (iterations < 0) throw std::invalid_argument("train: negative iteration count");

    Weights w;
    w.scheme = scheme;
    w.theta = std::move(theta0);
    if (static_cast<int>(w.theta.size()) != feature_dim(scheme, params))
        throw std::invalid_argument("train: theta0 does not match the feature dimension");

    TrainReport report;
    report.theta_trace.push_back(w.theta);
    {
        RandomStream rng = RandomStream::derive(seed, 0, 0);
        report.gain_trace.push_back(estimate_gain(w, steps_per_sweep, params, labels, rng));
    }
    for (int n = 0; n < iterations; ++n) {
        SweepDiagnostics diag;
        RandomStream sweep_rng = RandomStream::derive(seed, static_cast<uint64_t>(n) + 1, 1);
        w = lstd_sweep(w, report.gain_trace.back(), steps_per_sweep, params, labels, sweep_rng,
                       &diag);
        report.diagnostics.push_back(diag);
        report.theta_trace.push_back(w.theta);
        RandomStream gain_rng = RandomStream::derive(seed, static_cast<uint64_t>(n) + 1, 2);
        report.gain_trace.push_back(estimate_gain(w, steps_per_sweep, params, labels, gain_rng));
    }
    report.final_weights = std::move(w);
    return report;
}

} // namespace pas
