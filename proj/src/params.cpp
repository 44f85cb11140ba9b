#include "pas/params.hpp"

#include <algorithm>
#include <cmath>

#include "pas/errors.hpp"
#include "pas/pmf.hpp"

namespace pas {

std::string label_name(const DecisionLabel& label) {
    if (label.max_transfers == 0) return "no-transfer";
    return "transfers<=" + std::to_string(label.max_transfers);
}

void ModelParams::finalize() {
    if (num_wards < 1) throw ConfigError("num_wards must be at least 1");
    if (num_types < 1) throw ConfigError("num_types must be at least 1");
    if (static_cast<int>(capacity.size()) != num_wards)
        throw ConfigError("capacities: expected " + std::to_string(num_wards) + " entries");
    for (int k = 0; k < num_wards; ++k)
        if (capacity[k] < 1)
            throw ConfigError("capacities[" + std::to_string(k) + "] must be >= 1");
    if (waiting_capacity && *waiting_capacity < 0)
        throw ConfigError("waiting_capacity must be nonnegative");
    if (static_cast<int>(arrival_rate.size()) != num_types)
        throw ConfigError("arrival_rates: expected " + std::to_string(num_types) + " entries");
    for (int i = 0; i < num_types; ++i)
        if (!(arrival_rate[i] >= 0.0) || !std::isfinite(arrival_rate[i]))
            throw ConfigError("arrival_rates[" + std::to_string(i) + "] must be finite and >= 0");
    if (departure_prob.rows() != num_wards || departure_prob.cols() != num_types)
        throw ConfigError("departure_probs: expected a num_wards x num_types matrix");
    for (int k = 0; k < num_wards; ++k)
        for (int i = 0; i < num_types; ++i)
            if (!(departure_prob(k, i) > 0.0 && departure_prob(k, i) <= 1.0))
                throw ConfigError("departure_probs[" + std::to_string(k) + "][" +
                                  std::to_string(i) + "] must lie in (0,1]");
    if (preference_rank.rows() != num_types || preference_rank.cols() != num_wards)
        throw ConfigError("preference_order: expected a num_types x num_wards matrix");
    if (assign_cost.rows() != num_wards || assign_cost.cols() != num_types)
        throw ConfigError("assign_cost: expected a num_wards x num_types matrix");
    if (transfer_cost.wards() != num_wards || transfer_cost.types() != num_types)
        throw ConfigError("transfer_cost: expected a num_wards x num_wards x num_types tensor");
    if (penalty_cost.rows() != num_wards || penalty_cost.cols() != num_types)
        throw ConfigError("penalty_cost: expected a num_wards x num_types matrix");
    if (regime == ArrivalRegime::Unrestricted && waiting_capacity)
        throw ConfigError("unrestricted arrivals require an unbounded waiting area");

    // Every preference row must be a permutation of ranks 1..K.
    ward_by_rank = Grid<int>(num_types, num_wards, -1);
    for (int i = 0; i < num_types; ++i) {
        for (int k = 0; k < num_wards; ++k) {
            int r = preference_rank(i, k);
            if (r < 1 || r > num_wards || ward_by_rank(i, r - 1) != -1)
                throw ConfigError("preference_order row " + std::to_string(i) +
                                  " is not a permutation of 1.." + std::to_string(num_wards));
            ward_by_rank(i, r - 1) = k;
        }
    }
    primary_ward.resize(num_types);
    for (int i = 0; i < num_types; ++i) primary_ward[i] = ward_by_rank(i, 0);

    total_rate = 0.0;
    for (double r : arrival_rate) total_rate += r;
    total_capacity = 0;
    for (int m : capacity) total_capacity += m;

    poisson_table(total_rate, total_capacity, poisson_pmf, poisson_cdf);
}

ModelParams make_params(int num_wards, int num_types, std::vector<int> capacity,
                        std::optional<int> waiting_capacity, std::vector<double> arrival_rate,
                        Grid<double> departure_prob, Grid<int> preference_rank,
                        double assign_cost, double transfer_cost, double penalty_cost,
                        ArrivalRegime regime, bool joint_admission_cap,
                        bool include_assignment_cost, bool penalty_on_nonprimary_only) {
    ModelParams p;
    p.num_wards = num_wards;
    p.num_types = num_types;
    p.capacity = std::move(capacity);
    p.waiting_capacity = waiting_capacity;
    p.arrival_rate = std::move(arrival_rate);
    p.departure_prob = std::move(departure_prob);
    p.preference_rank = std::move(preference_rank);
    p.assign_cost = Grid<double>(num_wards, num_types, assign_cost);
    p.transfer_cost = Cube<double>(num_wards, num_types, transfer_cost);
    for (int k = 0; k < num_wards; ++k)
        for (int i = 0; i < num_types; ++i) p.transfer_cost(k, k, i) = 0.0;
    p.regime = regime;
    p.joint_admission_cap = joint_admission_cap;
    p.include_assignment_cost = include_assignment_cost;

    p.penalty_cost = Grid<double>(num_wards, num_types, penalty_cost);
    if (penalty_on_nonprimary_only) {
        for (int i = 0; i < num_types; ++i) {
            for (int k = 0; k < num_wards; ++k)
                if (p.preference_rank(i, k) == 1) p.penalty_cost(k, i) = 0.0;
        }
    }
    p.finalize();
    return p;
}

} // namespace pas
