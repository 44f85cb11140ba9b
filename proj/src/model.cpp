#include "pas/model.hpp"

#include <cmath>
#include <functional>

#include "pas/errors.hpp"

namespace pas {

std::string ConstraintViolation::describe() const {
    std::string s = constraint;
    if (type >= 0) s += " type=" + std::to_string(type);
    if (ward >= 0) s += " ward=" + std::to_string(ward);
    if (other_ward >= 0) s += " to_ward=" + std::to_string(other_ward);
    return s;
}

static void check_shapes(const State& s, const Action& a, const ModelParams& p) {
    if (s.occupancy.rows() != p.num_wards || s.occupancy.cols() != p.num_types ||
        static_cast<int>(s.queue.size()) != p.num_types)
        throw DimensionError("state shape does not match the instance");
    if (a.assign.rows() != p.num_wards || a.assign.cols() != p.num_types ||
        a.transfer.wards() != p.num_wards || a.transfer.types() != p.num_types)
        throw DimensionError("action shape does not match the instance");
}

ValidationResult validate_action(const State& s, const Action& a, const ModelParams& p) {
    check_shapes(s, a, p);
    ValidationResult res;

    // Every queued patient must be assigned somewhere.
    for (int i = 0; i < p.num_types; ++i) {
        int assigned = 0;
        for (int k = 0; k < p.num_wards; ++k) assigned += a.assign(k, i);
        if (assigned != s.queue[i])
            res.violations.push_back({"assign-complete", -1, -1, i});
    }

    // Transfers may only move patients that are present.
    for (int k = 0; k < p.num_wards; ++k) {
        for (int i = 0; i < p.num_types; ++i) {
            int out = 0;
            for (int l = 0; l < p.num_wards; ++l)
                if (l != k) out += a.transfer(k, l, i);
            if (out > s.occupancy(k, i))
                res.violations.push_back({"transfer-availability", k, -1, i});
        }
    }

    // Per (ward pair, type) flow in one direction only.
    for (int k = 0; k < p.num_wards; ++k)
        for (int l = k + 1; l < p.num_wards; ++l)
            for (int i = 0; i < p.num_types; ++i)
                if (a.transfer(k, l, i) != 0 && a.transfer(l, k, i) != 0)
                    res.violations.push_back({"one-direction", k, l, i});

    // Ward capacity, post decision.
    PostDecisionState post = apply_action(s, a);
    for (int k = 0; k < p.num_wards; ++k) {
        int total = 0;
        bool negative = false;
        for (int i = 0; i < p.num_types; ++i) {
            total += post.occupancy(k, i);
            if (post.occupancy(k, i) < 0) negative = true;
        }
        if (total > p.capacity[k] || negative)
            res.violations.push_back({"ward-capacity", k, -1, -1});
    }
    return res;
}

PostDecisionState apply_action(const State& s, const Action& a) {
    const int K = s.occupancy.rows(), I = s.occupancy.cols();
    PostDecisionState post{s.occupancy};
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < I; ++i) {
            int delta = a.assign(k, i);
            for (int l = 0; l < K; ++l) {
                if (l == k) continue;
                delta += a.transfer(l, k, i) - a.transfer(k, l, i);
            }
            post.occupancy(k, i) += delta;
        }
    }
    return post;
}

double action_cost(const State& s, const Action& a, const ModelParams& p) {
    check_shapes(s, a, p);
    double cost = 0.0;

    if (p.include_assignment_cost) {
        for (int k = 0; k < p.num_wards; ++k)
            for (int i = 0; i < p.num_types; ++i)
                cost += a.assign(k, i) * p.assign_cost(k, i);
    }
    for (int k = 0; k < p.num_wards; ++k)
        for (int l = 0; l < p.num_wards; ++l) {
            if (l == k) continue;
            for (int i = 0; i < p.num_types; ++i)
                cost += a.transfer(k, l, i) * p.transfer_cost(k, l, i);
        }

    // Penalty: bucket the census by distinct rate before multiplying.
    PostDecisionState post = apply_action(s, a);
    std::vector<std::pair<double, long>> buckets;
    for (int k = 0; k < p.num_wards; ++k) {
        for (int i = 0; i < p.num_types; ++i) {
            double rate = p.penalty_cost(k, i);
            int n = post.occupancy(k, i);
            if (rate == 0.0 || n == 0) continue;
            bool found = false;
            for (auto& [r, c] : buckets) {
                if (r == rate) {
                    c += n;
                    found = true;
                    break;
                }
            }
            if (!found) buckets.emplace_back(rate, n);
        }
    }
    for (const auto& [rate, count] : buckets) cost += rate * static_cast<double>(count);
    return cost;
}

int nonprimary_census(const PostDecisionState& post, const ModelParams& p) {
    int census = 0;
    for (int k = 0; k < p.num_wards; ++k)
        for (int i = 0; i < p.num_types; ++i)
            if (!p.is_primary(k, i)) census += post.occupancy(k, i);
    return census;
}

namespace {

// Shared recursion over the flattened (occupancy, queue) vector in
// lexicographic order. `emit` may be null (counting only).
class StateWalker {
public:
    StateWalker(const ModelParams& p, long cap, std::function<void(const State&)> emit)
        : p_(p), cap_(cap), emit_(std::move(emit)),
          scratch_(Grid<int>(p.num_wards, p.num_types), std::vector<int>(p.num_types, 0)) {}

    long walk() {
        if (!p_.waiting_capacity && !p_.joint_admission_cap)
            throw SizeCapError("state space is unbounded: no waiting capacity or joint cap");
        count_ = 0;
        occupancy_cell(0, 0, 0, 0);
        return count_;
    }

private:
    void occupancy_cell(int k, int i, int ward_used, int total_used) {
        if (k == p_.num_wards) {
            queue_cell(0, 0, total_used);
            return;
        }
        int nk = k, ni = i + 1;
        if (ni == p_.num_types) {
            nk = k + 1;
            ni = 0;
        }
        int room = p_.capacity[k] - ward_used;
        if (p_.joint_admission_cap && p_.total_capacity - total_used < room)
            room = p_.total_capacity - total_used;
        for (int v = 0; v <= room; ++v) {
            scratch_.occupancy(k, i) = v;
            if (ni == 0)
                occupancy_cell(nk, ni, 0, total_used + v);
            else
                occupancy_cell(nk, ni, ward_used + v, total_used + v);
        }
        scratch_.occupancy(k, i) = 0;
    }

    void queue_cell(int i, int queue_used, int total_occupancy) {
        if (i == p_.num_types) {
            ++count_;
            if (count_ > cap_)
                throw SizeCapError("instance too large for exact enumeration (cap " +
                                   std::to_string(cap_) + " states)");
            if (emit_) emit_(scratch_);
            return;
        }
        int room = p_.waiting_capacity ? *p_.waiting_capacity - queue_used
                                       : p_.total_capacity;  // joint cap bounds it below
        if (p_.joint_admission_cap) {
            int joint_room = p_.total_capacity - total_occupancy - queue_used;
            if (joint_room < room) room = joint_room;
        }
        for (int v = 0; v <= room; ++v) {
            scratch_.queue[i] = v;
            queue_cell(i + 1, queue_used + v, total_occupancy);
        }
        scratch_.queue[i] = 0;
    }

    const ModelParams& p_;
    long cap_;
    std::function<void(const State&)> emit_;
    State scratch_;
    long count_ = 0;
};

} // namespace

std::vector<State> enumerate_states(const ModelParams& params, long cap) {
    std::vector<State> out;
    StateWalker walker(params, cap, [&out](const State& s) { out.push_back(s); });
    walker.walk();
    return out;
}

long count_states(const ModelParams& params, long cap) {
    StateWalker walker(params, cap, nullptr);
    return walker.walk();
}

double post_state_space_size(const ModelParams& params) {
    double total = 1.0;
    for (int k = 0; k < params.num_wards; ++k) {
        // C(m_k + I, I) via lgamma to survive realistic sizes.
        double lg = std::lgamma(params.capacity[k] + params.num_types + 1.0) -
                    std::lgamma(params.num_types + 1.0) - std::lgamma(params.capacity[k] + 1.0);
        total *= std::exp(lg);
    }
    return total;
}

} // namespace pas
