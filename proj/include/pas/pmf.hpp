#pragma once

#include <span>
#include <vector>

namespace pas {

/// Probability mass function on a finite integer support
/// {offset, offset+1, ..., offset+probs.size()-1}.
struct Pmf {
    int offset = 0;
    std::vector<double> probs;

    double total() const;
    double mean() const;
    double variance() const;

    /// Probability of the integer value v (0 outside the support).
    double at(int v) const {
        int idx = v - offset;
        if (idx < 0 || idx >= static_cast<int>(probs.size())) return 0.0;
        return probs[static_cast<size_t>(idx)];
    }
    int max_value() const { return offset + static_cast<int>(probs.size()) - 1; }
};

/// One independent binomial summand of a total-departure count.
struct BinomialTerm {
    int trials = 0;       // n_i >= 0
    double prob = 0.0;    // success probability
};

/// Binomial(n, p) pmf. Throws std::invalid_argument for p outside [0, 1] or n < 0.
Pmf departure_pmf(int n, double p);

/// Exact pmf of a sum of independent binomials via the one-step Markov chain
/// recursion: a distribution row vector over {0..partial max} is advanced one
/// Bernoulli trial at a time, which applies the banded per-trial matrix raised
/// to the term's trial count without ever materializing a dense power.
/// Throws SizeCapError when the total number of trials exceeds `trial_cap`.
Pmf sum_binomial_pmf(std::span<const BinomialTerm> terms, int trial_cap = 100000);

/// Total daily admissions when at most b beds are free: Poisson(lambda)
/// truncated at b with the tail mass lumped on b.
Pmf arrival_total_pmf_capped(int b, double lambda);

/// Poisson(lambda) pmf value at k (stable for any lambda via log-space).
double poisson_pmf(double lambda, int k);

/// Poisson pmf table on 0..nmax plus its compensated cumulative sums
/// (cdf[k] = P(X <= k)).
void poisson_table(double lambda, int nmax, std::vector<double>& pmf, std::vector<double>& cdf);

/// Smallest N for which the Erlang-B blocking probability of an M/M/N/N loss
/// system with offered load lambda * mean_los falls below `target`. Uses the
/// stable recursion B(N) = a B(N-1) / (N + a B(N-1)).
int erlang_loss_capacity(double lambda, double mean_los, double target);

/// Erlang-B blocking probability itself, exposed for diagnostics and tests.
double erlang_blocking(double offered_load, int servers);

} // namespace pas
