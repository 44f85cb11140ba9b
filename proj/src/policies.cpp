#include "pas/policies.hpp"

#include <limits>
#include <string>

#include "pas/errors.hpp"

namespace pas {

namespace {

std::vector<int> ward_totals(const Grid<int>& n) {
    std::vector<int> totals(n.rows(), 0);
    for (int k = 0; k < n.rows(); ++k) totals[k] = n.row_sum(k);
    return totals;
}

[[noreturn]] void no_bed(int type) {
    throw InfeasibleError("no bed available for a queued patient of type " + std::to_string(type));
}

} // namespace

Action assign_no_transfer(const State& s, const ModelParams& p) {
    Action out(p);
    Grid<int> n = s.occupancy;
    std::vector<int> total = ward_totals(n);

    for (int i = 0; i < p.num_types; ++i) {
        for (int left = s.queue[i]; left > 0; --left) {
            int target = -1;
            for (int r = 0; r < p.num_wards; ++r) {
                int k = p.ward_of_rank(i, r);
                if (total[k] < p.capacity[k]) {
                    target = k;
                    break;
                }
            }
            if (target < 0) no_bed(i);
            out.assign(target, i) += 1;
            n(target, i) += 1;
            total[target] += 1;
        }
    }
    return out;
}

Action assign_with_transfers(const State& s, const ModelParams& p, int y_max) {
    if (y_max < 0) throw std::invalid_argument("assign_with_transfers: negative budget");
    Action out(p);
    Grid<int> n = s.occupancy;
    std::vector<int> total = ward_totals(n);
    std::vector<int> queue = s.queue;

    // Occupants of (k, i) still allowed to move out: the original count minus
    // those already unseated. Keeps total outflow within the original census.
    Grid<int> movable = s.occupancy;
    Grid<int> pending(p.num_wards, p.num_types);  // unseated, awaiting relocation
    std::vector<int> pending_by_type(p.num_types, 0);
    int budget = y_max;

    // An occupant of type j may be moved out of the way of an arriving type i:
    // freely when the arrival outranks them (j > i). An occupant who outranks
    // the arrival is only ever sent home, and only when their first-choice
    // ward is sitting empty, so the move upgrades both patients.
    auto displaceable = [&](int ward, int j, int arriving) {
        if (j == arriving || movable(ward, j) <= 0) return false;
        if (j > arriving) return true;
        int home = p.primary_ward[static_cast<size_t>(j)];
        return total[home] == 0;
    };

    auto relocation_target = [&](int src, int type) {
        int best = -1;
        double best_cost = std::numeric_limits<double>::infinity();
        int best_rank = std::numeric_limits<int>::max();
        for (int l = 0; l < p.num_wards; ++l) {
            if (l == src || total[l] >= p.capacity[l]) continue;
            double c = p.transfer_cost(src, l, type);
            int rank = p.preference_rank(type, l);
            if (c < best_cost || (c == best_cost && rank < best_rank)) {
                best = l;
                best_cost = c;
                best_rank = rank;
            }
        }
        return best;
    };

    while (true) {
        int i = -1;
        for (int t = 0; t < p.num_types; ++t) {
            if (queue[t] > 0 || pending_by_type[t] > 0) {
                i = t;
                break;
            }
        }
        if (i < 0) break;

        // Relocate pending type-i movers, worst-ranked source ward first.
        while (pending_by_type[i] > 0) {
            int src = -1;
            for (int r = p.num_wards - 1; r >= 0; --r) {
                int k = p.ward_of_rank(i, r);
                if (pending(k, i) > 0) {
                    src = k;
                    break;
                }
            }
            int dest = relocation_target(src, i);
            if (dest < 0)
                throw InfeasibleError("no ward with space to receive a transferred patient of type " +
                                      std::to_string(i));
            out.transfer(src, dest, i) += 1;
            n(dest, i) += 1;
            total[dest] += 1;
            pending(src, i) -= 1;
            pending_by_type[i] -= 1;
        }

        // Allocate the type-i queue.
        while (queue[i] > 0) {
            int target = -1;
            bool needs_unseat = false;
            for (int r = 0; r < p.num_wards; ++r) {
                int k = p.ward_of_rank(i, r);
                if (total[k] < p.capacity[k]) {
                    target = k;
                    needs_unseat = false;
                    break;
                }
                if (budget > 0) {
                    bool has_candidate = false;
                    for (int j = 0; j < p.num_types; ++j)
                        if (displaceable(k, j, i)) {
                            has_candidate = true;
                            break;
                        }
                    if (has_candidate) {
                        target = k;
                        needs_unseat = true;
                        break;
                    }
                }
            }
            if (target < 0) no_bed(i);

            out.assign(target, i) += 1;
            n(target, i) += 1;
            total[target] += 1;
            if (needs_unseat) {
                int unseat = -1;
                for (int j = p.num_types - 1; j >= 0; --j) {
                    if (displaceable(target, j, i)) {
                        unseat = j;
                        break;
                    }
                }
                movable(target, unseat) -= 1;
                n(target, unseat) -= 1;
                total[target] -= 1;
                pending(target, unseat) += 1;
                pending_by_type[unseat] += 1;
                budget -= 1;
            }
            queue[i] -= 1;
        }
    }
    return out;
}

Action realize_decision(const State& s, const DecisionLabel& label, const ModelParams& p) {
    if (label.max_transfers == 0) return assign_no_transfer(s, p);
    return assign_with_transfers(s, p, label.max_transfers);
}

} // namespace pas
