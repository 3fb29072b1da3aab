#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <random>
#include <string>
#include <vector>

#include "dgauss/heat.hpp"

namespace dgauss::prob {

/// Finitely supported probability mass function on Z; probs[i] = P(min_support + i).
class Pmf {
public:
    /// Rejects negative or non-finite entries and totals further than 1e-9
    /// from 1; otherwise renormalizes and trims zero entries at both ends.
    static Pmf make(long min_support, std::vector<double> probs);
    /// Equal mass on each listed point (duplicates rejected).
    static Pmf uniform(const std::vector<long>& points);
    /// "uniform:-1,0,1" or "points:-1=0.25,0=0.5,1=0.25".
    static Pmf parse(const std::string& text);
    /// Lines "integer probability"; '#' comments and blank lines ignored.
    static Pmf read(std::istream& in, const std::string& source = "<stream>");
    static Pmf load(const std::filesystem::path& path);

    long min_support() const { return min_support_; }
    long max_support() const { return min_support_ + static_cast<long>(probs_.size()) - 1; }
    const std::vector<double>& probs() const { return probs_; }
    double at(long m) const;
    double mean() const;
    double variance() const;

private:
    Pmf(long min_support, std::vector<double> probs) : min_support_(min_support), probs_(std::move(probs)) {}

    long min_support_ = 0;
    std::vector<double> probs_;
};

/// P(Y = m) for the walk with rates p, q_w (p + q_w = 1) at time t.
double pmf_Y(const heat::WalkParams& params, long m);

/// E[e^{iyY}] = exp(-(p+q_w) t (1 - cos y) + i (p-q_w) t sin y).
std::complex<double> char_fn(const heat::WalkParams& params, double y);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

Moments moments(const heat::WalkParams& params);

struct Sample {
    long value = 0;
    long steps = 0;  // number of jumps N; value has the parity of N
};

/// One exact draw: N ~ Poisson((p+q_w) t) jumps, each right with probability p/(p+q_w).
Sample sample_Y_detailed(const heat::WalkParams& params, std::mt19937_64& rng);
long sample_Y(const heat::WalkParams& params, std::mt19937_64& rng);

/// count draws. Block b of 65536 draws uses its own stream seeded from
/// (seed, b), so results do not depend on the thread count.
std::vector<long> sample_Y_many(const heat::WalkParams& params, std::size_t count, std::uint64_t seed);

namespace serial {
std::vector<long> sample_Y_many(const heat::WalkParams& params, std::size_t count, std::uint64_t seed);
Pmf convolve(const Pmf& a, const Pmf& b);
} // namespace serial

Pmf convolve(const Pmf& a, const Pmf& b);

/// Law of X_1 + ... + X_n by repeated squaring. ResourceError when
/// n * (support width) exceeds 10^6.
Pmf convolve_n(const Pmf& base, long n);

struct LatticeSpan {
    long offset = 0;  // a, in [0, span)
    long span = 1;    // l
};

/// Smallest progression a + lZ carrying the support. DegenerateError for a single point.
LatticeSpan lattice_span(const Pmf& base);

struct LltReport {
    long n = 0;
    double sup_discrepancy_discrete = 0.0;    // sqrt(n) sup |P(S_n=m) - discrete approximant|
    double sup_discrepancy_continuous = 0.0;  // sqrt(n) sup |P(S_n=m) - normal density|
    double gap = 0.0;                         // sqrt(n) sup |discrete approximant - normal density|
    long argmax_m = 0;                        // where the discrete discrepancy peaks
};

/// Walk parameters whose law approximates S_n: p, q_w = (1 +- mu/sigma^2)/2, t = n sigma^2.
heat::WalkParams llt_walk(const Pmf& base, long n);

/// Requires lattice span 1 and sigma^2 > |mu|, else PreconditionError.
LltReport llt_discrepancy(const Pmf& base, long n);

struct ChiSquare {
    double statistic = 0.0;
    long dof = 0;
    double p_value = 0.0;
};

/// Pearson goodness of fit of samples against pmf_Y on bins lo..hi, with the
/// tails folded into the end bins and sparse edge bins pooled until each
/// expected count is at least 5.
ChiSquare chi_square_gof(const std::vector<long>& samples, const heat::WalkParams& params, long lo, long hi);

} // namespace dgauss::prob
