#include "dgauss/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "dgauss/errors.hpp"

namespace dgauss::bessel {

namespace {

constexpr long double kRescaleAt = 1e2000L;
constexpr long double kRescaleBy = 1e-2000L;

// Below this log-magnitude the extended-range result is flushed to zero.
constexpr long double kLogFloorLd = -11300.0L;

void check_time(double time, const char* what) {
    if (!std::isfinite(time) || time < 0.0) {
        throw DomainError(std::string(what) + ": time must be finite and non-negative, got " +
                          std::to_string(time));
    }
}

long double chernoff(long double t, long double k) {
    if (k <= 0.0L) return 0.0L;
    if (t <= 0.0L) return -std::numeric_limits<long double>::infinity();
    const long double u = k / (2.0L * t);
    const long double root = std::sqrt(1.0L + u * u);
    return k * k / (2.0L * t * (root + 1.0L)) - k * std::asinh(u);
}

// Smallest integer k >= lo with chernoff(t, k) < target.
long first_below(long double t, long lo, long double target) {
    if (chernoff(t, static_cast<long double>(lo)) < target) return lo;
    long step = 1;
    long hi = lo + step;
    while (chernoff(t, static_cast<long double>(hi)) >= target) {
        lo = hi;
        step *= 2;
        hi = lo + step;
    }
    // invariant: chernoff(lo) >= target > chernoff(hi)
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (chernoff(t, static_cast<long double>(mid)) < target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

long double series_ld(long n, long double t) {
    const long double log_first =
        -2.0L * t + static_cast<long double>(n) * std::log(t) - std::lgamma(static_cast<long double>(n) + 1.0L);
    long double sum = 1.0L;
    long double term = 1.0L;
    const long double t2 = t * t;
    for (long k = 0;; ++k) {
        const long double ratio =
            t2 / (static_cast<long double>(k + 1) * static_cast<long double>(k + 1 + n));
        term *= ratio;
        sum += term;
        if (ratio < 0.5L && term < 1e-21L * sum) break;
    }
    return std::exp(log_first + std::log(sum));
}

// Miller's backward recurrence I_{k-1} = I_{k+1} + (k/t) I_k, normalised with
// I_0 + 2 sum_{k>=1} I_k = e^{2t}. Fills out[k] = K(t, k) for k in
// [first, last]; out has size last - first + 1.
void miller(long double t, long first, long last, std::vector<long double>& out) {
    const long double prefactor =
        0.5L * std::log(2.0L * std::numbers::pi_v<long double> * (2.0L * t + static_cast<long double>(last)));
    const long double target =
        std::min(-46.0L, chernoff(t, static_cast<long double>(last)) - 30.0L - prefactor);
    const long start = first_below(t, std::max(last, 1L), target) + 10;

    const std::size_t count = static_cast<std::size_t>(last - first + 1);
    out.assign(count, 0.0L);
    std::vector<int> generation(count, 0);
    int gen = 0;

    long double above = 0.0L;  // I_{k+1}
    long double cur = 1.0L;    // I_k
    long double total = 0.0L;
    for (long k = start; k >= 1; --k) {
        if (k >= first && k <= last) {
            out[static_cast<std::size_t>(k - first)] = cur;
            generation[static_cast<std::size_t>(k - first)] = gen;
        }
        total += 2.0L * cur;
        const long double below = above + (static_cast<long double>(k) / t) * cur;
        above = cur;
        cur = below;
        if (cur > kRescaleAt) {
            cur *= kRescaleBy;
            above *= kRescaleBy;
            total *= kRescaleBy;
            ++gen;
        }
    }
    total += cur;
    if (first == 0) {
        out[0] = cur;
        generation[0] = gen;
    }
    for (std::size_t i = 0; i < count; ++i) {
        long double v = out[i] / total;
        for (int g = generation[i]; g < gen && v != 0.0L; ++g) v *= kRescaleBy;
        out[i] = v;
    }
}

long double recurrence_ld(long n, long double t) {
    std::vector<long double> out;
    miller(t, n, n, out);
    return out[0];
}

bool use_series(long n, long double t) {
    return 2.0L * t <= std::max(30.0L, static_cast<long double>(n));
}

// Far past the turning point the recurrence start grows like sqrt(t), so a
// few terms of the large-argument expansion take over.
bool use_asymptotic(long n, long double t) {
    const long double nd = static_cast<long double>(n);
    return 2.0L * t >= std::max(1e6L, 1e3L * (nd * nd + 1.0L));
}

// e^{-z} I_n(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k prod_{j<=k} (4n^2 - (2j-1)^2) / (k! (8z)^k)
long double asymptotic_ld(long n, long double t) {
    const long double z = 2.0L * t;
    const long double mu = 4.0L * static_cast<long double>(n) * static_cast<long double>(n);
    long double term = 1.0L;
    long double sum = 1.0L;
    for (long k = 1; k <= 30; ++k) {
        const long double odd = static_cast<long double>(2 * k - 1);
        term *= -(mu - odd * odd) / (static_cast<long double>(k) * 8.0L * z);
        sum += term;
        if (std::fabs(term) < 1e-21L * std::fabs(sum)) break;
    }
    return sum / std::sqrt(2.0L * std::numbers::pi_v<long double> * z);
}

Method route(long n, long double t) {
    if (use_series(n, t)) return Method::series;
    return use_asymptotic(n, t) ? Method::asymptotic : Method::recurrence;
}

} // namespace

double log_tail_bound(double time, double order) {
    check_time(time, "log_tail_bound");
    return static_cast<double>(chernoff(time, order));
}

long tail_order(double time, double tol) {
    check_time(time, "tail_order");
    if (!(tol > 0.0)) throw DomainError("tail_order: tol must be positive");
    if (time == 0.0) return 1;
    return first_below(time, 0, std::log(static_cast<long double>(tol) / 2.0L));
}

namespace detail {

long double scaled_bessel_i_ld(long order, long double time) {
    const long n = std::labs(order);
    if (time == 0.0L) return n == 0 ? 1.0L : 0.0L;
    if (chernoff(time, static_cast<long double>(n)) < kLogFloorLd) return 0.0L;
    switch (route(n, time)) {
    case Method::series:
        return series_ld(n, time);
    case Method::asymptotic:
        return asymptotic_ld(n, time);
    default:
        return recurrence_ld(n, time);
    }
}

} // namespace detail

double scaled_bessel_i(long order, double time) {
    check_time(time, "scaled_bessel_i");
    return static_cast<double>(detail::scaled_bessel_i_ld(order, time));
}

BesselEval evaluate(long order, double time) {
    check_time(time, "evaluate");
    const long n = std::labs(order);
    BesselEval e;
    e.order = order;
    e.time = time;
    e.method_used = route(n, time);
    e.value = scaled_bessel_i(order, time);
    return e;
}

double scaled_bessel_i_series(long order, double time) {
    check_time(time, "scaled_bessel_i_series");
    const long n = std::labs(order);
    if (time == 0.0) return n == 0 ? 1.0 : 0.0;
    if (chernoff(time, static_cast<long double>(n)) < kLogFloorLd) return 0.0;
    return static_cast<double>(series_ld(n, time));
}

double scaled_bessel_i_recurrence(long order, double time) {
    check_time(time, "scaled_bessel_i_recurrence");
    const long n = std::labs(order);
    if (time == 0.0) return n == 0 ? 1.0 : 0.0;
    if (chernoff(time, static_cast<long double>(n)) < kLogFloorLd) return 0.0;
    return static_cast<double>(recurrence_ld(n, time));
}

double scaled_bessel_i_integral(long order, double time) {
    check_time(time, "scaled_bessel_i_integral");
    const long n = std::labs(order);
    if (time == 0.0) return n == 0 ? 1.0 : 0.0;
    const double nd = static_cast<double>(n);
    auto f = [&](double theta) {
        const double s = std::sin(0.5 * theta);
        return std::exp(-4.0 * time * s * s) * std::cos(nd * theta);
    };
    constexpr long kMaxNodes = 1L << 16;
    long nodes = 16;
    while (nodes < 2 * n && nodes < kMaxNodes) nodes *= 2;

    const double pi = std::numbers::pi;
    double h = pi / static_cast<double>(nodes);
    double sum = 0.5 * (f(0.0) + f(pi));
    for (long j = 1; j < nodes; ++j) sum += f(static_cast<double>(j) * h);
    double estimate = sum * h / pi;
    while (nodes < kMaxNodes) {
        double mid = 0.0;
        for (long j = 0; j < nodes; ++j) mid += f((static_cast<double>(j) + 0.5) * h);
        sum += mid;
        nodes *= 2;
        h *= 0.5;
        const double next = sum * h / pi;
        if (std::fabs(next - estimate) <= 1e-14) return next;
        estimate = next;
    }
    throw ResourceError("scaled_bessel_i_integral: no convergence within 2^16 nodes");
}

std::vector<double> scaled_bessel_i_sequence(double time, long max_order) {
    check_time(time, "scaled_bessel_i_sequence");
    if (max_order < 0) throw DomainError("scaled_bessel_i_sequence: max_order must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(max_order + 1), 0.0);
    if (time == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (2.0 * time <= 30.0) {
        for (long k = 0; k <= max_order; ++k) {
            out[static_cast<std::size_t>(k)] = scaled_bessel_i(k, time);
            if (out[static_cast<std::size_t>(k)] == 0.0) break;
        }
        return out;
    }
    std::vector<long double> ld;
    miller(time, 0, max_order, ld);
    std::transform(ld.begin(), ld.end(), out.begin(), [](long double v) { return static_cast<double>(v); });
    return out;
}

double building_block(long n, long q, double time) {
    check_time(time, "building_block");
    if (q < 1) throw DomainError("building_block: q must be >= 1");
    if (n < 0) throw DomainError("building_block: n must be >= 0");
    if (q == 1) return scaled_bessel_i(n, time);
    const long double root = std::sqrt(static_cast<long double>(q));
    const long double gap = root - 1.0L;
    const long double log_scale =
        -0.5L * static_cast<long double>(n) * std::log(static_cast<long double>(q)) - gap * gap * time;
    const long double k = detail::scaled_bessel_i_ld(n, root * time);
    return static_cast<double>(std::exp(log_scale) * k);
}

double scaled_bessel_derivative(long order, double time) {
    if (!std::isfinite(time) || time <= 0.0) {
        throw DomainError("scaled_bessel_derivative: time must be positive");
    }
    const long double up = detail::scaled_bessel_i_ld(order + 1, time);
    const long double down = detail::scaled_bessel_i_ld(order - 1, time);
    const long double mid = detail::scaled_bessel_i_ld(order, time);
    return static_cast<double>(up + down - 2.0L * mid);
}

} // namespace dgauss::bessel
