#pragma once

#include <vector>

namespace dgauss::heat {

/// Rates of the asymmetric walk: p to the right, q_w to the left, run for time t.
struct WalkParams {
    double p = 0.5;
    double q_w = 0.5;
    double t = 0.0;

    /// Validates p > 0, q_w > 0, t >= 0 (all finite); throws DomainError.
    static WalkParams make(double p, double q_w, double t);
    /// As make(), additionally requiring |p + q_w - 1| <= 1e-12.
    static WalkParams probability(double p, double q_w, double t);

    bool is_normalized() const;
};

/// Heat on the (q+1)-regular tree, evaluated radially.
struct TreeParams {
    long q = 1;
    double t = 0.0;
    double truncation_tol = 1e-13;

    /// q >= 1, t >= 0, truncation_tol in (0, 1e-6].
    static TreeParams make(long q, double t, double truncation_tol = 1e-13);
};

enum class CircleSide { spectral, images };

double kernel_Z(double t, long x);

/// (p/q_w)^{x/2} e^{-(p+q_w)t} I_x(2 sqrt(p q_w) t).
double kernel_pq(const WalkParams& params, long x);

/// Heat kernel of the n-cycle at residue x, either from the eigenvalue
/// expansion or from the periodised kernel on Z.
double kernel_circle(long n, double t, long x, CircleSide side);

/// Radial heat kernel of the (q+1)-regular tree at distance r. The j-series
/// stops once its certified remainder times the sphere size at r is below
/// truncation_tol.
double kernel_tree(const TreeParams& params, long r);

/// Number of tree vertices at distance r from the root: 1, (q+1) q^{r-1}.
double tree_sphere_size(long q, long r);

/// |n K(n^2 t, round(n x)) - (4 pi t)^{-1/2} e^{-x^2/(4t)}| with round-half-even.
double rescaled_limit_error(double t, double x, long n);

long round_half_even(double v);

/// log of a Chernoff bound on P(Y >= k) for Y distributed as kernel_pq(params, .).
/// Returns 0 when k does not exceed the mean.
double log_upper_tail(const WalkParams& params, double k);

/// Smallest N such that both tails P(Y >= N) and P(Y <= -N) are <= tol/2.
long pq_tail_order(const WalkParams& params, double tol);

/// K(t, x) for x in [lo, hi], evaluated in parallel.
std::vector<double> kernel_Z_table(double t, long lo, long hi);

namespace serial {
std::vector<double> kernel_Z_table(double t, long lo, long hi);
} // namespace serial

} // namespace dgauss::heat
