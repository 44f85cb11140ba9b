#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pas/grid.hpp"

namespace pas {

enum class ArrivalRegime {
    /// Daily arrivals per type are independent Poisson draws; nobody is turned away.
    Unrestricted,
    /// The daily total admitted is capped by the number of free beds after
    /// departures; the excess is redirected to other facilities.
    CapacityLimited,
};

/// A meta-decision: assign the queue by priority, moving at most
/// `max_transfers` current occupants out of the way. `max_transfers == 0`
/// disallows transfers entirely.
struct DecisionLabel {
    int max_transfers = 0;

    static DecisionLabel no_transfer() { return {0}; }
    static DecisionLabel bounded_transfer(int y_max) { return {y_max}; }

    bool operator==(const DecisionLabel&) const = default;
};

std::string label_name(const DecisionLabel& label);

/// Full instance description. All matrices are ward-major: entry (k, i) refers
/// to ward k and patient type i, both 0-based. Call finalize() after filling
/// the fields; it validates the instance and populates the derived members.
struct ModelParams {
    int num_types = 0;  // I
    int num_wards = 0;  // K
    std::vector<int> capacity;               // beds per ward, m[k] >= 1
    std::optional<int> waiting_capacity;     // nullopt = unbounded waiting area
    std::vector<double> arrival_rate;        // lambda[i] >= 0, per day
    Grid<double> departure_prob;             // p[k][i] in (0, 1]
    Grid<int> preference_rank;               // O[i][k]: rank of ward k for type i, 1..K
    Grid<double> assign_cost;                // c_sigma[k][i]
    Cube<double> transfer_cost;              // c_t[k][l][i], l != k (diagonal never read)
    Grid<double> penalty_cost;               // c_p[k][i], charged per patient-day post decision
    bool include_assignment_cost = true;
    bool joint_admission_cap = false;        // total patients (wards + queue) <= total beds
    ArrivalRegime regime = ArrivalRegime::CapacityLimited;
    std::vector<std::string> ward_names;     // optional annotations
    std::vector<std::string> type_names;

    // Derived by finalize().
    double total_rate = 0.0;                 // sum of arrival rates
    int total_capacity = 0;                  // sum of ward capacities
    std::vector<int> primary_ward;           // rank-1 ward per type
    Grid<int> ward_by_rank;                  // (i, r) -> ward with rank r+1 for type i
    std::vector<double> poisson_pmf;         // Poisson(total_rate) pmf on 0..total_capacity
    std::vector<double> poisson_cdf;         // running sums of the above (compensated)

    /// Validates every invariant (permutation rows, probability ranges, ...)
    /// and fills the derived members. Throws ConfigError with the offending
    /// field named.
    void finalize();

    bool finalized() const { return !ward_by_rank.empty() || num_wards == 0; }

    int ward_of_rank(int type, int rank0) const { return ward_by_rank(type, rank0); }
    bool is_primary(int ward, int type) const { return primary_ward[type] == ward; }

    /// Effective cap on one day's admissions given `free_beds` free beds.
    int admission_cap(int free_beds) const {
        if (!waiting_capacity) return free_beds;
        return free_beds < *waiting_capacity ? free_beds : *waiting_capacity;
    }
};

/// Convenience builder used by tests and fixtures: fills uniform scalar costs
/// and applies `penalty_on_nonprimary_only` the way the shipped configs do.
ModelParams make_params(int num_wards, int num_types, std::vector<int> capacity,
                        std::optional<int> waiting_capacity, std::vector<double> arrival_rate,
                        Grid<double> departure_prob, Grid<int> preference_rank,
                        double assign_cost, double transfer_cost, double penalty_cost,
                        ArrivalRegime regime, bool joint_admission_cap,
                        bool include_assignment_cost = true,
                        bool penalty_on_nonprimary_only = true);

} // namespace pas
