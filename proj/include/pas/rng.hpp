#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace pas {

/// splitmix64 finalizer; used to turn (base seed, replication, day, phase)
/// tuples into well-separated stream seeds.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t mix64(uint64_t a, uint64_t b) { return mix64(mix64(a) ^ (b * 0xd6e8feb86659fd93ULL)); }

/// Seedable random stream with the handful of samplers the model needs.
/// Sampling is implemented in-library (inversion walks) so that results are
/// reproducible across standard library implementations.
class RandomStream {
public:
    explicit RandomStream(uint64_t seed) : gen_(mix64(seed)) {}

    /// Independent stream derived from a base seed and up to three indices.
    static RandomStream derive(uint64_t base, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
        return RandomStream(mix64(mix64(mix64(base, a), b), c));
    }

    uint64_t next_u64() { return gen_(); }

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Binomial(n, p) by inversion from the nearer tail; O(np) expected.
    int binomial(int n, double p) {
        if (n < 0) throw std::invalid_argument("binomial: negative trial count");
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial: p outside [0,1]");
        if (n == 0 || p == 0.0) return 0;
        if (p == 1.0) return n;
        if (p > 0.5) return n - binomial(n, 1.0 - p);

        const double q = 1.0 - p, ratio = p / q;
        double term = std::pow(q, n);
        if (term > 0.0) {
            double u = uniform01();
            int z = 0;
            double cum = term;
            while (u > cum && z < n) {
                ++z;
                term *= ratio * (n - z + 1) / z;
                cum += term;
            }
            return z;
        }
        // Tail underflow (huge n): fall back to per-trial Bernoulli.
        int z = 0;
        for (int t = 0; t < n; ++t) z += bernoulli(p) ? 1 : 0;
        return z;
    }

    /// Poisson(lambda) by inversion; large rates are split so the starting
    /// term never underflows.
    int poisson(double lambda) {
        if (lambda < 0.0) throw std::invalid_argument("poisson: negative rate");
        int total = 0;
        while (lambda > 300.0) {
            total += poisson_small(300.0);
            lambda -= 300.0;
        }
        return total + poisson_small(lambda);
    }

    /// Multinomial split of `total` items with the given nonnegative weights.
    std::vector<int> multinomial(int total, std::span<const double> weights) {
        double remaining_weight = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("multinomial: negative weight");
            remaining_weight += w;
        }
        if (total > 0 && remaining_weight <= 0.0)
            throw std::invalid_argument("multinomial: positive total with zero total weight");

        std::vector<int> counts(weights.size(), 0);
        int remaining = total;
        for (size_t i = 0; i + 1 < weights.size() && remaining > 0; ++i) {
            double share = weights[i] / remaining_weight;
            int c = binomial(remaining, share > 1.0 ? 1.0 : share);
            counts[i] = c;
            remaining -= c;
            remaining_weight -= weights[i];
            if (remaining_weight <= 0.0) break;
        }
        if (!counts.empty()) counts.back() += remaining;
        return counts;
    }

private:
    int poisson_small(double lambda) {
        if (lambda == 0.0) return 0;
        double term = std::exp(-lambda);
        double cum = term;
        double u = uniform01();
        int k = 0;
        while (u > cum) {
            ++k;
            term *= lambda / k;
            cum += term;
            if (k > 100000) break;  // numerically exhausted tail
        }
        return k;
    }

    std::mt19937_64 gen_;
};

} // namespace pas
