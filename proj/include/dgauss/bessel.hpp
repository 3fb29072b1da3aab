#pragma once

#include <vector>

namespace dgauss::bessel {

/// Evaluation route used for e^{-2t} I_x(2t).
///
/// `series` sums the power series with the exponential scale folded into the
/// leading term, `recurrence` runs Miller's backward recurrence normalised by
/// the identity sum_x e^{-2t} I_x(2t) = 1, and `integral` applies the
/// trapezoid rule to the pre-scaled integral representation on [0, pi].
/// `asymptotic` is the large-argument expansion, used once 2t exceeds both
/// 10^6 and 10^3 (x^2 + 1).
enum class Method { series, integral, recurrence, asymptotic };

struct BesselEval {
    long order = 0;
    double time = 0.0;
    double value = 0.0;
    Method method_used = Method::series;
};

/// The discrete Gaussian K(t, x) = e^{-2t} I_{|x|}(2t).
///
/// Exact Kronecker delta at t = 0. Uses the series when 2t <= max(30, |x|),
/// the large-argument expansion far beyond that, and the normalised backward
/// recurrence in between. Values whose certified upper
/// bound lies below the double range return exactly 0. Throws DomainError for
/// negative or non-finite time.
double scaled_bessel_i(long order, double time);

BesselEval evaluate(long order, double time);

// Forced-method variants, used for cross-checks.
double scaled_bessel_i_series(long order, double time);
double scaled_bessel_i_recurrence(long order, double time);
double scaled_bessel_i_integral(long order, double time);

/// K(t, 0), K(t, 1), ..., K(t, max_order) from a single recurrence pass.
std::vector<double> scaled_bessel_i_sequence(double time, long max_order);

/// q^{-n/2} e^{-(q+1)t} I_n(2 sqrt(q) t). Reduces to scaled_bessel_i for q = 1.
double building_block(long n, long q, double time);

/// d/dt K(t, x) = K(t, x+1) + K(t, x-1) - 2 K(t, x). Requires time > 0.
double scaled_bessel_derivative(long order, double time);

/// Chernoff exponent: log of an upper bound on sum_{y >= order} K(t, y),
/// i.e. min over lambda of 2t(cosh lambda - 1) - lambda * order. Zero for
/// order <= 0.
double log_tail_bound(double time, double order);

/// Smallest N >= 0 with sum_{|x| >= N} K(t, x) <= tol, certified by the
/// Chernoff bound above.
long tail_order(double time, double tol);

namespace detail {
// Extended-range evaluations; values below the double range stay non-zero.
long double scaled_bessel_i_ld(long order, long double time);
} // namespace detail

} // namespace dgauss::bessel
