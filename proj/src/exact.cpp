#include "pas/exact.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "pas/errors.hpp"
#include "pas/kernels.hpp"
#include "pas/linalg.hpp"
#include "pas/model.hpp"
#include "pas/policies.hpp"

namespace pas {

FiniteMdp build_mdp(const ModelParams& params, const std::vector<DecisionLabel>& labels,
                    long state_cap) {
    FiniteMdp mdp;
    mdp.states = enumerate_states(params, state_cap);
    mdp.labels = labels;
    const int m = mdp.size();

    std::map<State, int> index;
    for (int s = 0; s < m; ++s) index[mdp.states[static_cast<size_t>(s)]] = s;

    mdp.transition.assign(labels.size(), {});
    mdp.cost.assign(labels.size(), std::vector<double>(static_cast<size_t>(m), 0.0));
    for (size_t a = 0; a < labels.size(); ++a) {
        auto& P = mdp.transition[a];
        P.assign(static_cast<size_t>(m), std::vector<double>(static_cast<size_t>(m), 0.0));
        for (int s = 0; s < m; ++s) {
            const State& state = mdp.states[static_cast<size_t>(s)];
            Action action = realize_decision(state, labels[a], params);
            mdp.cost[a][static_cast<size_t>(s)] = action_cost(state, action, params);
            for (const auto& [next, prob] : transition_pmf(state, labels[a], params)) {
                auto it = index.find(next);
                if (it == index.end())
                    throw Error("build_mdp: transition leaves the enumerated state space");
                P[static_cast<size_t>(s)][static_cast<size_t>(it->second)] += prob;
            }
        }
    }
    return mdp;
}

std::array<State, 22> small_instance_states() {
    auto make = [](int n11, int n12, int n21, int n22, int q1, int q2) {
        Grid<int> n(2, 2);
        n(0, 0) = n11;
        n(0, 1) = n12;
        n(1, 0) = n21;
        n(1, 1) = n22;
        return State{n, {q1, q2}};
    };
    return {
        make(0, 0, 0, 0, 0, 0), make(0, 0, 0, 0, 1, 0), make(0, 0, 0, 0, 0, 1),
        make(0, 0, 0, 0, 2, 0), make(0, 0, 0, 0, 1, 1), make(0, 0, 0, 0, 0, 2),
        make(1, 0, 0, 0, 0, 0), make(1, 0, 0, 0, 1, 0), make(1, 0, 0, 0, 0, 1),
        make(0, 1, 0, 0, 0, 0), make(0, 1, 0, 0, 1, 0), make(0, 1, 0, 0, 0, 1),
        make(0, 0, 1, 0, 0, 0), make(0, 0, 1, 0, 1, 0), make(0, 0, 1, 0, 0, 1),
        make(0, 0, 0, 1, 0, 0), make(0, 0, 0, 1, 1, 0), make(0, 0, 0, 1, 0, 1),
        make(1, 0, 1, 0, 0, 0), make(0, 1, 1, 0, 0, 0), make(1, 0, 0, 1, 0, 0),
        make(0, 1, 0, 1, 0, 0),
    };
}

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw ConfigError("closed_form_small_mdp: " + what);
}

} // namespace

FiniteMdp closed_form_small_mdp(const ModelParams& pa) {
    require(pa.num_wards == 2 && pa.num_types == 2, "needs two wards and two types");
    require(pa.capacity == std::vector<int>{1, 1}, "needs one bed per ward");
    require(pa.waiting_capacity && *pa.waiting_capacity == 2, "needs a two-place waiting area");
    require(pa.joint_admission_cap, "needs the joint admission cap");
    require(pa.regime == ArrivalRegime::CapacityLimited, "needs capacity-limited arrivals");
    require(pa.primary_ward == std::vector<int>{0, 1}, "needs ward i primary for type i");

    const double cs = pa.include_assignment_cost ? pa.assign_cost(0, 0) : 0.0;
    const double ct = pa.transfer_cost(0, 1, 0);
    const double cp = pa.penalty_cost(0, 1);
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i) {
            require(pa.assign_cost(k, i) == pa.assign_cost(0, 0), "needs a uniform assignment cost");
            if (k != i)
                require(pa.transfer_cost(k, 1 - k, i) == ct, "needs a uniform transfer cost");
            require(pa.penalty_cost(k, i) == (pa.is_primary(k, i) ? 0.0 : cp),
                    "needs the penalty charged exactly on nonprimary cells");
        }

    const double l1 = pa.arrival_rate[0], l2 = pa.arrival_rate[1], lam = l1 + l2;
    const double e = std::exp(-lam);
    const double tail1 = 1.0 - e;                // at least one arrival
    const double tail2 = 1.0 - e * (1.0 + lam);  // at least two arrivals
    const double s1 = lam > 0.0 ? l1 / lam : 0.0, s2 = lam > 0.0 ? l2 / lam : 0.0;

    // Arrival rows: both beds free (six states reachable) or one bed free.
    const std::array<double, 6> pvec = {e,          e * l1,         e * l2,
                                        tail2 * s1 * s1, tail2 * 2.0 * s1 * s2, tail2 * s2 * s2};
    const std::array<double, 3> wvec = {e, tail1 * s1, tail1 * s2};

    const double p11 = pa.departure_prob(0, 0), p12 = pa.departure_prob(0, 1);
    const double p21 = pa.departure_prob(1, 0), p22 = pa.departure_prob(1, 1);
    const double q11 = 1.0 - p11, q12 = 1.0 - p12, q21 = 1.0 - p21, q22 = 1.0 - p22;

    // One row pattern per post-decision occupancy, indexed against the
    // reference ordering of the 22 states (1-based blocks).
    struct Pattern {
        double to_empty;               // scaled pvec into columns 1..6
        std::array<double, 3> stay;    // scaled wvec blocks
        std::array<int, 3> stay_col;   // first column (1-based) of each block
        double hold = 0.0;             // probability of keeping both occupants
        int hold_col = 0;
    };
    auto row_for = [&](int post) -> Pattern {
        switch (post) {
            case 1:  return {1.0, {0, 0, 0}, {0, 0, 0}, 0.0, 0};
            case 7:  return {p11, {q11, 0, 0}, {7, 0, 0}, 0.0, 0};
            case 10: return {p12, {q12, 0, 0}, {10, 0, 0}, 0.0, 0};
            case 13: return {p21, {q21, 0, 0}, {13, 0, 0}, 0.0, 0};
            case 16: return {p22, {q22, 0, 0}, {16, 0, 0}, 0.0, 0};
            case 19: return {p11 * p21, {q11 * p21, p11 * q21, 0}, {7, 13, 0}, q11 * q21, 19};
            case 20: return {p12 * p21, {q12 * p21, p12 * q21, 0}, {10, 13, 0}, q12 * q21, 20};
            case 21: return {p11 * p22, {q11 * p22, p11 * q22, 0}, {7, 16, 0}, q11 * q22, 21};
            case 22: return {p12 * p22, {q12 * p22, p12 * q22, 0}, {10, 16, 0}, q12 * q22, 22};
            default: throw Error("unreachable post-decision label");
        }
    };

    // Post-decision state of every (state, label) pair, reference indexing.
    const std::array<int, 22> post1 = {1,  7,  16, 19, 21, 22, 7,  19, 21, 10, 20,
                                       22, 13, 19, 20, 16, 21, 22, 19, 20, 21, 22};
    std::array<int, 22> post2 = post1;
    post2[10] = 21;  // states 11 and 15: transfers give both patients their
    post2[14] = 21;  // primary bed

    auto build_reference_matrix = [&](const std::array<int, 22>& post) {
        std::vector<std::vector<double>> P(22, std::vector<double>(22, 0.0));
        for (int s = 0; s < 22; ++s) {
            Pattern pat = row_for(post[static_cast<size_t>(s)]);
            for (int c = 0; c < 6; ++c) P[s][c] += pat.to_empty * pvec[static_cast<size_t>(c)];
            for (int b = 0; b < 3; ++b) {
                if (pat.stay_col[static_cast<size_t>(b)] == 0) continue;
                for (int c = 0; c < 3; ++c)
                    P[s][pat.stay_col[static_cast<size_t>(b)] - 1 + c] +=
                        pat.stay[static_cast<size_t>(b)] * wvec[static_cast<size_t>(c)];
            }
            if (pat.hold_col != 0) P[s][pat.hold_col - 1] += pat.hold;
        }
        return P;
    };

    auto indicator = [](std::initializer_list<int> states1based, int s) {
        return std::find(states1based.begin(), states1based.end(), s + 1) != states1based.end()
                   ? 1.0
                   : 0.0;
    };
    std::vector<double> c1(22, 0.0), c2(22, 0.0);
    for (int s = 0; s < 22; ++s) {
        double common = 2.0 * cs * indicator({4, 5, 6}, s) +
                        cs * indicator({2, 3, 8, 9, 11, 12, 14, 15, 17, 18}, s) +
                        cp * indicator({4, 6, 8, 10, 12, 13, 14, 18, 19, 22}, s);
        c1[static_cast<size_t>(s)] = common + 2.0 * cp * indicator({11, 15, 20}, s);
        c2[static_cast<size_t>(s)] =
            common + 2.0 * cp * indicator({20}, s) + ct * indicator({11, 15}, s);
    }

    // Re-index everything into canonical enumeration order.
    FiniteMdp mdp;
    mdp.states = enumerate_states(pa);
    require(mdp.states.size() == 22, "expected exactly 22 states");
    mdp.labels = {DecisionLabel::no_transfer(), DecisionLabel::bounded_transfer(2)};

    std::array<int, 22> canon{};  // reference index -> canonical index
    auto fixture = small_instance_states();
    for (int s = 0; s < 22; ++s) {
        auto it = std::find(mdp.states.begin(), mdp.states.end(), fixture[static_cast<size_t>(s)]);
        require(it != mdp.states.end(), "fixture state missing from enumeration");
        canon[static_cast<size_t>(s)] = static_cast<int>(it - mdp.states.begin());
    }

    auto p1 = build_reference_matrix(post1);
    auto p2 = build_reference_matrix(post2);
    mdp.transition.assign(2, std::vector<std::vector<double>>(22, std::vector<double>(22, 0.0)));
    mdp.cost.assign(2, std::vector<double>(22, 0.0));
    for (int s = 0; s < 22; ++s) {
        for (int t = 0; t < 22; ++t) {
            mdp.transition[0][canon[s]][canon[t]] = p1[s][t];
            mdp.transition[1][canon[s]][canon[t]] = p2[s][t];
        }
        mdp.cost[0][canon[s]] = c1[static_cast<size_t>(s)];
        mdp.cost[1][canon[s]] = c2[static_cast<size_t>(s)];
    }
    return mdp;
}

ExactSolution policy_iteration(const FiniteMdp& mdp) {
    const int m = mdp.size();
    const int num_labels = static_cast<int>(mdp.labels.size());
    if (m == 0 || num_labels == 0) throw Error("policy_iteration: empty model");

    ExactSolution sol;
    sol.policy.assign(static_cast<size_t>(m), 0);
    sol.bias.assign(static_cast<size_t>(m), 0.0);

    auto evaluate = [&](const std::vector<int>& policy) {
        // Unknowns: gain, then bias of every state but the last (pinned to 0).
        DenseMatrix A(m);
        std::vector<double> rhs(static_cast<size_t>(m), 0.0);
        for (int s = 0; s < m; ++s) {
            const auto& row = mdp.transition[static_cast<size_t>(policy[static_cast<size_t>(s)])]
                                            [static_cast<size_t>(s)];
            A(s, 0) = 1.0;
            for (int j = 0; j + 1 < m; ++j) {
                double v = (s == j ? 1.0 : 0.0) - row[static_cast<size_t>(j)];
                A(s, j + 1) = v;
            }
            rhs[static_cast<size_t>(s)] =
                mdp.cost[static_cast<size_t>(policy[static_cast<size_t>(s)])][static_cast<size_t>(s)];
        }
        try {
            return solve_dense(std::move(A), std::move(rhs));
        } catch (const std::runtime_error&) {
            std::string desc;
            for (int lab : policy) desc += std::to_string(lab);
            throw Error("policy evaluation system is singular (non-unichain policy " + desc + ")");
        }
    };

    const double kTieTol = 1e-12;
    for (int sweep = 0; sweep < 1000; ++sweep) {
        std::vector<double> sol_vec = evaluate(sol.policy);
        sol.gain = sol_vec[0];
        for (int j = 0; j + 1 < m; ++j) sol.bias[static_cast<size_t>(j)] = sol_vec[static_cast<size_t>(j + 1)];
        sol.bias[static_cast<size_t>(m - 1)] = 0.0;
        sol.sweep_gains.push_back(sol.gain);

        bool changed = false;
        for (int s = 0; s < m; ++s) {
            int best = 0;
            double best_score = 0.0;
            for (int a = 0; a < num_labels; ++a) {
                double score = mdp.cost[static_cast<size_t>(a)][static_cast<size_t>(s)];
                const auto& row = mdp.transition[static_cast<size_t>(a)][static_cast<size_t>(s)];
                for (int j = 0; j < m; ++j) score += row[static_cast<size_t>(j)] * sol.bias[static_cast<size_t>(j)];
                if (a == 0 || score < best_score - kTieTol) {
                    best = a;
                    best_score = score;
                }
            }
            if (best != sol.policy[static_cast<size_t>(s)]) {
                sol.policy[static_cast<size_t>(s)] = best;
                changed = true;
            }
        }
        if (!changed) break;
        if (sweep == 999) throw Error("policy_iteration: no convergence after 1000 sweeps");
    }

    // Bellman residual at the returned solution.
    double max_residual = 0.0;
    for (int s = 0; s < m; ++s) {
        double best = 0.0;
        for (int a = 0; a < num_labels; ++a) {
            double score = mdp.cost[static_cast<size_t>(a)][static_cast<size_t>(s)];
            const auto& row = mdp.transition[static_cast<size_t>(a)][static_cast<size_t>(s)];
            for (int j = 0; j < m; ++j) score += row[static_cast<size_t>(j)] * sol.bias[static_cast<size_t>(j)];
            if (a == 0 || score < best) best = score;
        }
        max_residual = std::max(max_residual,
                                std::fabs(sol.gain + sol.bias[static_cast<size_t>(s)] - best));
    }
    sol.max_residual = max_residual;
    return sol;
}

} // namespace pas
