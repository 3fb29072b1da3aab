#include "dgauss/heat.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dgauss/bessel.hpp"
#include "dgauss/errors.hpp"
#include "dgauss/special.hpp"

namespace dgauss::heat {

namespace {

void check_time(double t, const char* what) {
    if (!std::isfinite(t) || t < 0.0) {
        throw DomainError(std::string(what) + ": t must be finite and non-negative");
    }
}

long positive_mod(long x, long n) {
    const long r = x % n;
    return r < 0 ? r + n : r;
}

// Smallest integer N >= lo with pred(N) true, pred monotone on [lo, inf).
template <class Pred>
long first_true(long lo, Pred pred) {
    if (pred(lo)) return lo;
    long step = 1;
    long hi = lo + step;
    while (!pred(hi)) {
        lo = hi;
        step *= 2;
        hi = lo + step;
    }
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

} // namespace

WalkParams WalkParams::make(double p, double q_w, double t) {
    if (!std::isfinite(p) || !std::isfinite(q_w) || p <= 0.0 || q_w <= 0.0) {
        throw DomainError("WalkParams: p and q_w must be positive");
    }
    check_time(t, "WalkParams");
    return WalkParams{p, q_w, t};
}

WalkParams WalkParams::probability(double p, double q_w, double t) {
    WalkParams w = make(p, q_w, t);
    if (!w.is_normalized()) {
        throw DomainError("WalkParams: p + q_w must equal 1 for a probability law, got " +
                          std::to_string(p + q_w));
    }
    return w;
}

bool WalkParams::is_normalized() const { return std::fabs(p + q_w - 1.0) <= 1e-12; }

TreeParams TreeParams::make(long q, double t, double truncation_tol) {
    if (q < 1) throw DomainError("TreeParams: q must be >= 1");
    check_time(t, "TreeParams");
    if (!(truncation_tol > 0.0) || truncation_tol > 1e-6) {
        throw DomainError("TreeParams: truncation_tol must lie in (0, 1e-6]");
    }
    return TreeParams{q, t, truncation_tol};
}

double kernel_Z(double t, long x) { return bessel::scaled_bessel_i(x, t); }

double kernel_pq(const WalkParams& params, long x) {
    const WalkParams w = WalkParams::make(params.p, params.q_w, params.t);
    if (w.t == 0.0) return x == 0 ? 1.0 : 0.0;
    const long double p = w.p;
    const long double q = w.q_w;
    const long double gap = std::sqrt(p) - std::sqrt(q);
    const long double log_scale = 0.5L * static_cast<long double>(x) * std::log(p / q) - gap * gap * w.t;
    const long double k = bessel::detail::scaled_bessel_i_ld(x, std::sqrt(p * q) * w.t);
    if (k == 0.0L) return 0.0;
    return static_cast<double>(std::exp(log_scale + std::log(k)));
}

double kernel_circle(long n, double t, long x, CircleSide side) {
    if (n < 1) throw DomainError("kernel_circle: n must be >= 1");
    check_time(t, "kernel_circle");
    const long r = positive_mod(x, n);

    if (side == CircleSide::spectral) {
        // Terms k and n-k coincide, so the sum is real term by term.
        long double sum = 1.0L;
        const long half = (n - 1) / 2;
        for (long k = 1; k <= half; ++k) {
            const double s = special::sinpi(static_cast<double>(k) / static_cast<double>(n));
            const long phase = (2 * k * r) % (2 * n);
            const double c = special::cospi(static_cast<double>(phase) / static_cast<double>(n));
            sum += 2.0L * std::exp(-4.0L * s * s * t) * c;
        }
        if (n % 2 == 0) {
            sum += std::exp(-4.0L * t) * ((r % 2 == 0) ? 1.0L : -1.0L);
        }
        return static_cast<double>(sum / static_cast<long double>(n));
    }

    const long reach = bessel::tail_order(t, 1e-18);
    const std::vector<double> k = bessel::scaled_bessel_i_sequence(t, reach);
    long double sum = 0.0L;
    // Sites r + jn: j >= 0 gives |y| = r, r+n, ...; j < 0 gives |y| = n-r, 2n-r, ...
    for (long y = r; y <= reach; y += n) sum += k[static_cast<std::size_t>(y)];
    for (long y = n - r; y <= reach; y += n) sum += k[static_cast<std::size_t>(y)];
    return static_cast<double>(sum);
}

double tree_sphere_size(long q, long r) {
    if (r == 0) return 1.0;
    return static_cast<double>(q + 1) * std::pow(static_cast<double>(q), static_cast<double>(r - 1));
}

double kernel_tree(const TreeParams& params, long r) {
    const TreeParams tp = TreeParams::make(params.q, params.t, params.truncation_tol);
    if (r < 0) throw DomainError("kernel_tree: r must be >= 0");
    const long q = tp.q;
    if (q == 1) return bessel::scaled_bessel_i(r, tp.t);
    if (tp.t == 0.0) return r == 0 ? 1.0 : 0.0;

    const double log_q = std::log(static_cast<double>(q));
    const double root = std::sqrt(static_cast<double>(q));
    const double damping = (root - 1.0) * (root - 1.0) * tp.t;
    // The remainder from order n on is at most q * block(n), since K(., n) falls
    // in n. It is held below tol / sphere_size(r) so that heat summed over the
    // whole sphere at distance r is accurate to tol. K <= 1 bounds block(n) by
    // q^{-n/2} e^{-damping}, which caps the orders needed.
    const double log_budget = std::log(tp.truncation_tol) - std::log(tree_sphere_size(q, r));
    const double n_max_d = 2.0 * (log_q - log_budget - damping) / log_q;
    const long n_max = std::max(r + 2, static_cast<long>(std::ceil(n_max_d)) + 2);
    const std::vector<double> k = bessel::scaled_bessel_i_sequence(root * tp.t, n_max);
    auto block = [&](long n) {
        return std::exp(-0.5 * static_cast<double>(n) * log_q - damping) * k[static_cast<std::size_t>(n)];
    };

    double result = block(r);
    const double weight = static_cast<double>(q - 1);
    const double budget = std::exp(log_budget);
    for (long n = r + 2; n <= n_max; n += 2) {
        const double term = block(n);
        if (static_cast<double>(q) * term <= budget) break;
        result -= weight * term;
    }
    return result;
}

long round_half_even(double v) { return static_cast<long>(std::nearbyint(v)); }

double rescaled_limit_error(double t, double x, long n) {
    if (!std::isfinite(t) || t <= 0.0) throw DomainError("rescaled_limit_error: t must be positive");
    if (n < 1) throw DomainError("rescaled_limit_error: n must be positive");
    const double nd = static_cast<double>(n);
    const long site = round_half_even(nd * x);
    const double discrete = nd * bessel::scaled_bessel_i(site, nd * nd * t);
    const double gauss = std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
    return std::fabs(discrete - gauss);
}

double log_upper_tail(const WalkParams& params, double k) {
    const double p = params.p;
    const double q = params.q_w;
    const double t = params.t;
    if (k <= 0.0) return 0.0;
    if (t == 0.0) return -std::numeric_limits<double>::infinity();
    if (k <= (p - q) * t) return 0.0;
    const double root = std::sqrt(k * k + 4.0 * p * q * t * t);
    const double up = (k + root) / (2.0 * t);        // p e^lambda
    const double down = 2.0 * p * q * t / (k + root);  // q e^-lambda
    const double lambda = std::log(up / p);
    return t * (up + down - p - q) - lambda * k;
}

long pq_tail_order(const WalkParams& params, double tol) {
    if (!(tol > 0.0)) throw DomainError("pq_tail_order: tol must be positive");
    const WalkParams mirrored{params.q_w, params.p, params.t};
    const double target = std::log(tol / 2.0);
    const long lo = static_cast<long>(std::ceil(std::fabs(params.p - params.q_w) * params.t));
    return first_true(lo, [&](long n) {
        return log_upper_tail(params, static_cast<double>(n)) <= target &&
               log_upper_tail(mirrored, static_cast<double>(n)) <= target;
    });
}

std::vector<double> kernel_Z_table(double t, long lo, long hi) {
    check_time(t, "kernel_Z_table");
    if (hi < lo) return {};
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    const long count = hi - lo + 1;
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = bessel::scaled_bessel_i(lo + i, t);
    }
    return out;
}

namespace serial {

std::vector<double> kernel_Z_table(double t, long lo, long hi) {
    check_time(t, "kernel_Z_table");
    std::vector<double> out;
    for (long x = lo; x <= hi; ++x) out.push_back(bessel::scaled_bessel_i(x, t));
    return out;
}

} // namespace serial

} // namespace dgauss::heat
