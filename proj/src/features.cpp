#include "pas/features.hpp"

#include <stdexcept>

#include "pas/kernels.hpp"

namespace pas {

int feature_dim(FeatureScheme scheme, const ModelParams& p) {
    switch (scheme) {
        case FeatureScheme::FullState:
            return p.num_wards * p.num_types + p.num_types;
        case FeatureScheme::PrimaryOtherQueue:
            if (p.num_wards != p.num_types)
                throw std::invalid_argument(
                    "primary/other features need as many wards as types");
            return 2 * p.num_wards + p.num_types;
    }
    throw std::invalid_argument("unknown feature scheme");
}

std::vector<double> feature_map(const State& s, FeatureScheme scheme, const ModelParams& p) {
    std::vector<double> phi(static_cast<size_t>(feature_dim(scheme, p)), 0.0);
    switch (scheme) {
        case FeatureScheme::FullState: {
            size_t f = 0;
            for (int k = 0; k < p.num_wards; ++k)
                for (int i = 0; i < p.num_types; ++i) phi[f++] = s.occupancy(k, i);
            for (int i = 0; i < p.num_types; ++i) phi[f++] = s.queue[static_cast<size_t>(i)];
            break;
        }
        case FeatureScheme::PrimaryOtherQueue: {
            for (int k = 0; k < p.num_wards; ++k) {
                double own = 0.0, other = 0.0;
                for (int i = 0; i < p.num_types; ++i)
                    (i == k ? own : other) += s.occupancy(k, i);
                phi[static_cast<size_t>(2 * k)] = own;
                phi[static_cast<size_t>(2 * k + 1)] = other;
            }
            for (int i = 0; i < p.num_types; ++i)
                phi[static_cast<size_t>(2 * p.num_wards + i)] = s.queue[static_cast<size_t>(i)];
            break;
        }
    }
    return phi;
}

double expected_next_value(const PostDecisionState& post, std::span<const double> theta,
                           const ModelParams& p, FeatureScheme scheme) {
    if (static_cast<int>(theta.size()) != feature_dim(scheme, p))
        throw std::invalid_argument("weight vector does not match the feature dimension");

    // Occupancy part: each cell survives with probability 1 - p[k][i].
    double value = 0.0;
    for (int k = 0; k < p.num_wards; ++k) {
        for (int i = 0; i < p.num_types; ++i) {
            int n = post.occupancy(k, i);
            if (n == 0) continue;
            double mean_stay = n * (1.0 - p.departure_prob(k, i));
            size_t slot = scheme == FeatureScheme::FullState
                              ? static_cast<size_t>(k * p.num_types + i)
                              : static_cast<size_t>(i == k ? 2 * k : 2 * k + 1);
            value += mean_stay * theta[slot];
        }
    }

    // Queue part: E(Q_i') = (lambda_i / lambda) E(Q).
    if (p.total_rate > 0.0) {
        double expected_q = expected_admitted(post, p);
        size_t base = scheme == FeatureScheme::FullState
                          ? static_cast<size_t>(p.num_wards * p.num_types)
                          : static_cast<size_t>(2 * p.num_wards);
        for (int i = 0; i < p.num_types; ++i)
            value += (p.arrival_rate[static_cast<size_t>(i)] / p.total_rate) * expected_q *
                     theta[base + static_cast<size_t>(i)];
    }
    return value;
}

} // namespace pas
