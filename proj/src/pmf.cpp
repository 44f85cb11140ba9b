#include "pas/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pas/errors.hpp"

namespace pas {

double Pmf::total() const {
    double s = 0.0, c = 0.0;
    for (double p : probs) {  // Kahan
        double y = p - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

double Pmf::mean() const {
    double m = 0.0;
    for (size_t j = 0; j < probs.size(); ++j) m += (offset + static_cast<double>(j)) * probs[j];
    return m;
}

double Pmf::variance() const {
    double m = mean();
    double v = 0.0;
    for (size_t j = 0; j < probs.size(); ++j) {
        double d = offset + static_cast<double>(j) - m;
        v += d * d * probs[j];
    }
    return v;
}

Pmf departure_pmf(int n, double p) {
    if (n < 0) throw std::invalid_argument("departure_pmf: negative trial count");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("departure_pmf: probability outside [0,1]");

    Pmf out;
    out.probs.assign(static_cast<size_t>(n) + 1, 0.0);
    if (n == 0) {
        out.probs[0] = 1.0;
        return out;
    }
    if (p == 0.0) {
        out.probs[0] = 1.0;
        return out;
    }
    if (p == 1.0) {
        out.probs[static_cast<size_t>(n)] = 1.0;
        return out;
    }

    // Start at the mode and expand by pmf ratios; stable for any (n, p).
    int mode = static_cast<int>(std::floor((n + 1) * p));
    if (mode > n) mode = n;
    double log_mode = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) - std::lgamma(n - mode + 1.0) +
                      mode * std::log(p) + (n - mode) * std::log1p(-p);
    out.probs[static_cast<size_t>(mode)] = std::exp(log_mode);
    for (int z = mode + 1; z <= n; ++z) {
        double ratio = (static_cast<double>(n - z + 1) / z) * (p / (1.0 - p));
        out.probs[static_cast<size_t>(z)] = out.probs[static_cast<size_t>(z - 1)] * ratio;
    }
    for (int z = mode - 1; z >= 0; --z) {
        double ratio = (static_cast<double>(z + 1) / (n - z)) * ((1.0 - p) / p);
        out.probs[static_cast<size_t>(z)] = out.probs[static_cast<size_t>(z + 1)] * ratio;
    }
    return out;
}

Pmf sum_binomial_pmf(std::span<const BinomialTerm> terms, int trial_cap) {
    if (terms.empty()) throw std::invalid_argument("sum_binomial_pmf: empty term list");
    long total_trials = 0;
    for (const auto& t : terms) {
        if (t.trials < 0) throw std::invalid_argument("sum_binomial_pmf: negative trial count");
        if (!(t.prob >= 0.0 && t.prob <= 1.0))
            throw std::invalid_argument("sum_binomial_pmf: probability outside [0,1]");
        total_trials += t.trials;
    }
    if (total_trials > trial_cap)
        throw SizeCapError("sum_binomial_pmf: " + std::to_string(total_trials) +
                           " trials exceed cap " + std::to_string(trial_cap));

    Pmf out;
    out.probs.reserve(static_cast<size_t>(total_trials) + 1);
    out.probs.assign(1, 1.0);
    for (const auto& term : terms) {
        const double p = term.prob, q = 1.0 - term.prob;
        for (int t = 0; t < term.trials; ++t) {
            out.probs.push_back(0.0);
            for (size_t j = out.probs.size() - 1; j >= 1; --j)
                out.probs[j] = out.probs[j] * q + out.probs[j - 1] * p;
            out.probs[0] *= q;
        }
    }
    return out;
}

Pmf arrival_total_pmf_capped(int b, double lambda) {
    if (b < 0) throw std::invalid_argument("arrival_total_pmf_capped: negative bed count");
    if (lambda < 0.0) throw std::invalid_argument("arrival_total_pmf_capped: negative rate");

    Pmf out;
    out.probs.assign(static_cast<size_t>(b) + 1, 0.0);
    if (b == 0) {
        out.probs[0] = 1.0;
        return out;
    }
    std::vector<double> pmf, cdf;
    poisson_table(lambda, b, pmf, cdf);
    for (int q = 0; q < b; ++q) out.probs[static_cast<size_t>(q)] = pmf[static_cast<size_t>(q)];
    out.probs[static_cast<size_t>(b)] = 1.0 - cdf[static_cast<size_t>(b) - 1];
    return out;
}

double poisson_pmf(double lambda, int k) {
    if (k < 0) return 0.0;
    if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

void poisson_table(double lambda, int nmax, std::vector<double>& pmf, std::vector<double>& cdf) {
    pmf.assign(static_cast<size_t>(nmax) + 1, 0.0);
    cdf.assign(static_cast<size_t>(nmax) + 1, 0.0);
    double sum = 0.0, comp = 0.0;
    for (int k = 0; k <= nmax; ++k) {
        double p = poisson_pmf(lambda, k);
        pmf[static_cast<size_t>(k)] = p;
        double y = p - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        cdf[static_cast<size_t>(k)] = sum < 1.0 ? sum : 1.0;
    }
}

double erlang_blocking(double offered_load, int servers) {
    double b = 1.0;
    for (int n = 1; n <= servers; ++n) b = offered_load * b / (n + offered_load * b);
    return b;
}

int erlang_loss_capacity(double lambda, double mean_los, double target) {
    if (lambda <= 0.0 || mean_los <= 0.0)
        throw std::invalid_argument("erlang_loss_capacity: rates must be positive");
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("erlang_loss_capacity: target must be in (0,1)");
    const double a = lambda * mean_los;
    double b = 1.0;
    for (int n = 1;; ++n) {
        b = a * b / (n + a * b);
        if (b < target) return n;
        if (n > 10000000) throw SizeCapError("erlang_loss_capacity: no solution below cap");
    }
}

} // namespace pas
