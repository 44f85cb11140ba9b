#include "pas/kernels.hpp"

#include <cmath>
#include <functional>

#include "pas/errors.hpp"
#include "pas/model.hpp"
#include "pas/policies.hpp"

namespace pas {

Grid<int> sample_departures(const PostDecisionState& post, const ModelParams& p,
                            RandomStream& rng) {
    Grid<int> z(p.num_wards, p.num_types);
    for (int k = 0; k < p.num_wards; ++k)
        for (int i = 0; i < p.num_types; ++i)
            if (post.occupancy(k, i) > 0)
                z(k, i) = rng.binomial(post.occupancy(k, i), p.departure_prob(k, i));
    return z;
}

ArrivalSample sample_arrivals(const Grid<int>& occupancy, const ModelParams& p,
                              RandomStream& rng) {
    ArrivalSample out;
    out.admitted.assign(p.num_types, 0);
    if (p.regime == ArrivalRegime::Unrestricted) {
        for (int i = 0; i < p.num_types; ++i) {
            out.admitted[i] = rng.poisson(p.arrival_rate[i]);
            out.raw_total += out.admitted[i];
        }
        return out;
    }
    out.raw_total = rng.poisson(p.total_rate);
    int free_beds = p.total_capacity - occupancy.sum();
    int cap = p.admission_cap(free_beds);
    int admitted = out.raw_total < cap ? out.raw_total : cap;
    out.redirected = out.raw_total - admitted;
    if (admitted > 0) out.admitted = rng.multinomial(admitted, p.arrival_rate);
    return out;
}

State step_dynamics(const PostDecisionState& post, const ModelParams& p, RandomStream& rng,
                    Grid<int>* departures_out, ArrivalSample* arrivals_out) {
    Grid<int> z = sample_departures(post, p, rng);
    Grid<int> occupancy = post.occupancy;
    for (int k = 0; k < p.num_wards; ++k)
        for (int i = 0; i < p.num_types; ++i) occupancy(k, i) -= z(k, i);
    ArrivalSample arrivals = sample_arrivals(occupancy, p, rng);
    State next{std::move(occupancy), arrivals.admitted};
    if (departures_out) *departures_out = std::move(z);
    if (arrivals_out) *arrivals_out = std::move(arrivals);
    return next;
}

double expected_admitted(const PostDecisionState& post, const ModelParams& p) {
    if (p.regime == ArrivalRegime::Unrestricted) return p.total_rate;

    const double lambda = p.total_rate;
    const int m = p.total_capacity;
    int z_max = post.occupancy.sum();

    std::vector<BinomialTerm> terms;
    terms.reserve(static_cast<size_t>(p.num_wards) * p.num_types);
    for (int k = 0; k < p.num_wards; ++k)
        for (int i = 0; i < p.num_types; ++i)
            if (post.occupancy(k, i) > 0)
                terms.push_back({post.occupancy(k, i), p.departure_prob(k, i)});

    // E(min(T, n)) with T ~ Poisson(lambda): lambda F(n-1) + n (1 - F(n)).
    auto expected_capped = [&](int n) {
        if (n <= 0) return 0.0;
        if (n > m) n = m;
        double F_nm1 = p.poisson_cdf[static_cast<size_t>(n - 1)];
        double F_n = p.poisson_cdf[static_cast<size_t>(n)];
        return lambda * F_nm1 + n * (1.0 - F_n);
    };

    if (terms.empty()) return expected_capped(p.admission_cap(m));

    Pmf z_pmf = sum_binomial_pmf(terms);
    double eq = 0.0;
    for (int z = 0; z <= z_max; ++z) {
        double pz = z_pmf.at(z);
        if (pz == 0.0) continue;
        int free_beds = m - z_max + z;
        eq += pz * expected_capped(p.admission_cap(free_beds));
    }
    return eq;
}

std::map<State, double> transition_pmf(const State& s, const DecisionLabel& label,
                                       const ModelParams& p) {
    if (p.regime == ArrivalRegime::Unrestricted)
        throw SizeCapError("transition_pmf: unrestricted arrivals have unbounded support");

    Action action = realize_decision(s, label, p);
    PostDecisionState post = apply_action(s, action);

    // Departure laws per occupied cell.
    struct CellPmf {
        int k, i;
        Pmf pmf;
    };
    std::vector<CellPmf> cells;
    for (int k = 0; k < p.num_wards; ++k)
        for (int i = 0; i < p.num_types; ++i)
            if (post.occupancy(k, i) > 0)
                cells.push_back({k, i, departure_pmf(post.occupancy(k, i), p.departure_prob(k, i))});

    std::map<State, double> out;

    // Arrival vectors for a given cap. A composition (q_1..q_I) with total t
    // has probability P(T = t) * Multinomial(t; q, lambda_i / lambda), where T
    // is the truncated total (tail mass lumped on the cap). The multinomial
    // weight is carried incrementally so nothing overflows.
    auto add_arrivals = [&](const Grid<int>& occupancy, double prob) {
        int free_beds = p.total_capacity - occupancy.sum();
        int cap = p.admission_cap(free_beds);
        const double lambda = p.total_rate;

        std::vector<int> q(p.num_types, 0);
        double tail = cap > 0 ? 1.0 - p.poisson_cdf[static_cast<size_t>(cap - 1)] : 1.0;

        std::function<void(int, int, double)> rec = [&](int i, int used, double weight) {
            if (i == p.num_types) {
                double total_prob =
                    used < cap ? p.poisson_pmf[static_cast<size_t>(used)] : tail;
                double mass = prob * total_prob * weight;
                if (mass != 0.0) out[State{occupancy, q}] += mass;
                return;
            }
            double share = lambda > 0.0 ? p.arrival_rate[static_cast<size_t>(i)] / lambda : 0.0;
            double w = weight;
            for (int v = 0; v + used <= cap; ++v) {
                q[static_cast<size_t>(i)] = v;
                rec(i + 1, used + v, w);
                w *= share * (used + v + 1) / (v + 1.0);
            }
            q[static_cast<size_t>(i)] = 0;
        };
        rec(0, 0, 1.0);
    };

    // Odometer over all departure matrices.
    std::vector<int> z(cells.size(), 0);
    Grid<int> occupancy = post.occupancy;
    std::function<void(size_t, double)> departures = [&](size_t idx, double prob) {
        if (idx == cells.size()) {
            add_arrivals(occupancy, prob);
            return;
        }
        const auto& cell = cells[idx];
        for (int d = 0; d <= post.occupancy(cell.k, cell.i); ++d) {
            double mass = prob * cell.pmf.probs[static_cast<size_t>(d)];
            if (mass == 0.0) continue;
            occupancy(cell.k, cell.i) = post.occupancy(cell.k, cell.i) - d;
            departures(idx + 1, mass);
        }
        occupancy(cell.k, cell.i) = post.occupancy(cell.k, cell.i);
    };
    departures(0, 1.0);
    return out;
}

} // namespace pas
