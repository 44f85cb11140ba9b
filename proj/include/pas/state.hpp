#pragma once

#include <compare>
#include <string>
#include <vector>

#include "pas/grid.hpp"
#include "pas/params.hpp"

namespace pas {

/// System state at the start of a day: ward occupancies plus the queue of
/// newly arrived, not yet assigned patients. Ordering is lexicographic over
/// the flattened (occupancy, queue) vector.
struct State {
    Grid<int> occupancy;     // n[k][i]
    std::vector<int> queue;  // q[i]

    State() = default;
    State(Grid<int> n, std::vector<int> q) : occupancy(std::move(n)), queue(std::move(q)) {}
    static State empty(const ModelParams& p) {
        return State{Grid<int>(p.num_wards, p.num_types), std::vector<int>(p.num_types, 0)};
    }

    int total_patients() const { return occupancy.sum() + queue_total(); }
    int queue_total() const {
        int s = 0;
        for (int q : queue) s += q;
        return s;
    }

    bool operator==(const State&) const = default;
    auto operator<=>(const State&) const = default;
};

/// A concrete decision: assignment counts x[k][i] for the queued patients and
/// transfer counts y[k][l][i] moving current occupants between wards.
struct Action {
    Grid<int> assign;     // x[k][i]
    Cube<int> transfer;   // y[k][l][i], l != k

    Action() = default;
    explicit Action(const ModelParams& p)
        : assign(p.num_wards, p.num_types), transfer(p.num_wards, p.num_types) {}

    int total_transfers() const { return transfer.sum(); }
    bool operator==(const Action&) const = default;
};

/// Occupancy right after assignments and transfers, before the day's
/// stochastic departures and arrivals. The queue is empty by construction.
struct PostDecisionState {
    Grid<int> occupancy;  // n_a[k][i]

    int total_patients() const { return occupancy.sum(); }
    bool operator==(const PostDecisionState&) const = default;
};

std::string to_string(const State& s);
std::string to_string(const Action& a);

} // namespace pas
