#include "dgauss/zeta.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dgauss/errors.hpp"

namespace dgauss::zeta {

namespace {

using special::rgamma;

constexpr double kPi = std::numbers::pi;

bool is_integer(cplx z, double* value = nullptr) {
    if (z.imag() != 0.0 || std::nearbyint(z.real()) != z.real()) return false;
    if (value) *value = z.real();
    return true;
}

std::string show(cplx z) {
    return "(" + std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") + std::to_string(z.imag()) + "i)";
}

cplx to_cplx(const BigInt& v) { return cplx(v.convert_to<double>(), 0.0); }

double integrate_real(const std::function<double(double)>& f, double a, double b) {
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-13, &err);
}

cplx integrate(const std::function<cplx(double)>& f, double a, double b) {
    const double re = integrate_real([&](double x) { return f(x).real(); }, a, b);
    const double im = integrate_real([&](double x) { return f(x).imag(); }, a, b);
    return {re, im};
}

} // namespace

cplx zeta_Z(cplx s) {
    double v = 0.0;
    if (is_integer(s, &v)) {
        if (v <= 0.0) return to_cplx(special::binomial(-2 * static_cast<long>(v), -static_cast<long>(v)));
        return 0.0;  // 1/Gamma(1-s) vanishes
    }
    const cplx half = 0.5 - s;
    if (special::is_nonpositive_integer(half)) throw PoleError("zeta_Z: pole at s = " + show(s));
    return std::exp(special::lgamma(half) - s * std::log(4.0)) * rgamma(1.0 - s) / std::sqrt(kPi);
}

cplx xi_Z(cplx s) {
    double v = 0.0;
    if (is_integer(s, &v) && v > 0.0 && std::fmod(v, 2.0) == 1.0) {
        return std::sqrt(kPi) * rgamma((1.0 + s) / 2.0) * rgamma(1.0 - s / 2.0);
    }
    return std::exp(s * std::log(2.0)) * special::cospi(s / 2.0) * zeta_Z(s / 2.0);
}

cplx gauss_2f1(cplx a, cplx b, cplx c, double z) {
    if (!std::isfinite(z) || z < 0.0 || z > 1.0) {
        throw DomainError("gauss_2f1: z must lie in [0, 1], got " + std::to_string(z));
    }
    // A terminating series stops after -a (or -b) terms.
    long stop = -1;
    double v = 0.0;
    if (is_integer(a, &v) && v <= 0.0) stop = static_cast<long>(-v);
    if (is_integer(b, &v) && v <= 0.0) stop = stop < 0 ? static_cast<long>(-v) : std::min(stop, static_cast<long>(-v));
    if (is_integer(c, &v) && v <= 0.0 && (stop < 0 || static_cast<long>(-v) < stop)) {
        throw DomainError("gauss_2f1: c = " + show(c) + " is a non-positive integer reached before termination");
    }
    if (stop >= 0) {
        cplx term = 1.0, sum = 1.0;
        for (long k = 0; k < stop; ++k) {
            const double kd = static_cast<double>(k);
            term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
            sum += term;
        }
        return sum;
    }
    if (z == 1.0) {
        if (!((c - a - b).real() > 0.0)) throw DomainError("gauss_2f1: divergent at z = 1 (Re(c-a-b) <= 0)");
        return special::gamma(c) * special::gamma(c - a - b) * rgamma(c - a) * rgamma(c - b);
    }
    cplx term = 1.0, sum = 1.0;
    for (long k = 0; k < 100000; ++k) {
        const double kd = static_cast<double>(k);
        term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
        sum += term;
        // Once k exceeds the parameters the ratio tends to z < 1 monotonically.
        if (std::abs(term) < 1e-17 * std::abs(sum) && kd > std::abs(a) + std::abs(b) + std::abs(c)) return sum;
    }
    throw DomainError("gauss_2f1: series did not converge in 10^5 terms");
}

ZetaPoint zeta_tree_point(long q, cplx s, double tol) {
    if (q < 1) throw DomainError("zeta_tree: q must be >= 1");
    if (!(tol > 0.0)) throw DomainError("zeta_tree: tol must be positive");
    if (q == 1) return {s, zeta_Z(s), Method::closed_form};
    const double qd = static_cast<double>(q);
    const double z = 1.0 / qd;
    const cplx q_pow_s = std::exp(-s * std::log(qd));
    cplx sum = q_pow_s * gauss_2f1(s, s, 1.0, z);

    // ratio(j) = (s)_{2j} / (2j)!, updated by two factors per step; exact 0 past j = m at s = -m.
    cplx ratio = 1.0;
    double q_pow = 1.0;
    const double w = qd - 1.0;
    const double as = std::abs(s);
    for (long j = 1; j < 100000; ++j) {
        const double a = static_cast<double>(2 * j - 2);
        ratio *= (s + a) * (s + a + 1.0) / ((a + 1.0) * (a + 2.0));
        q_pow /= qd * qd;
        if (ratio == 0.0) break;  // every later ratio carries the same zero factor
        const cplx term = q_pow_s * q_pow * ratio * gauss_2f1(s, s + 2.0 * j, 2.0 * j + 1.0, z);
        sum -= w * term;
        // Later terms shrink at least by rho per step: q^{-2} from the power,
        // the Pochhammer ratio bound, and the hypergeometric factor's growth.
        const double jd = static_cast<double>(j);
        const double rho = (1.0 + as / (2.0 * jd + 1.0)) * (1.0 + as / (2.0 * jd + 2.0)) *
                           (1.0 + 2.0 * as / (2.0 * jd + 1.0)) / (qd * qd);
        if (rho < 0.9 && w * std::abs(term) * rho / (1.0 - rho) < tol) break;
    }
    return {s, sum, Method::series};
}

cplx zeta_tree(long q, cplx s, double tol) { return zeta_tree_point(q, s, tol).value; }

BigInt zeta_tree_neg_int(long q, long m) {
    if (q < 1) throw DomainError("zeta_tree_neg_int: q must be >= 1");
    if (m < 0) throw DomainError("zeta_tree_neg_int: m must be >= 0");
    using special::binomial;
    const BigInt qq = q;
    BigInt main = 0;
    for (long k = 0; k <= m; ++k) {
        const BigInt c = binomial(m, k);
        main += c * c * boost::multiprecision::pow(qq, static_cast<unsigned>(m - k));
    }
    BigInt correction = 0;
    for (long j = 1; 2 * j <= m; ++j)
        for (long k = 0; k <= m - 2 * j; ++k)
            correction += binomial(m, k) * binomial(m, 2 * j + k) * boost::multiprecision::pow(qq, static_cast<unsigned>(m - 2 * j - k));
    return main - BigInt(q - 1) * correction;
}

double tree_zeta_derivative_at_zero(long q) {
    if (q < 1) throw DomainError("tree_zeta_derivative_at_zero: q must be >= 1");
    if (q == 1) return 0.0;
    const double qd = static_cast<double>(q);
    return 0.5 * (qd - 1.0) * std::log1p(-1.0 / (qd * qd));
}

double tree_det(long q) { return std::exp(-tree_zeta_derivative_at_zero(q)); }

double tree_zeta_derivative_at_zero_series(long q) {
    // q^{-s} F(s, s; 1; 1/q) = 1 - s log q + O(s^2) adds -log q to the closed form.
    return tree_zeta_derivative_at_zero(q) - std::log(static_cast<double>(q));
}

double tree_det_series(long q) { return std::exp(-tree_zeta_derivative_at_zero_series(q)); }

cplx discrete_gauss_mellin_tail(double horizon, cplx s) {
    if (!(horizon > 0.0)) throw DomainError("discrete_gauss_mellin_tail: horizon must be positive");
    // a_k = ((2k-1)!!)^2 / (k! 8^k)
    cplx sum = 0.0;
    double a = 1.0;
    for (int k = 0; k <= 8; ++k) {
        if (k > 0) a *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k);
        const cplx e = s - 0.5 - static_cast<double>(k);  // exponent of t after integration
        sum += a * std::pow(2.0, -k) * std::exp(e * std::log(horizon)) / (-e);
    }
    return sum / std::sqrt(4.0 * kPi);
}

cplx mellin_zeta_oracle(const std::function<double(double)>& kernel, cplx s, const MellinOptions& options) {
    const double sigma = s.real();
    if (!(sigma > 0.0 && sigma < 0.5)) {
        throw DomainError("mellin_zeta_oracle: need 0 < Re(s) < 1/2, got " + show(s));
    }
    if (!(options.horizon > 1.0)) throw DomainError("mellin_zeta_oracle: horizon must exceed 1");
    const double tau = s.imag();
    // t = u^{1/sigma}: k(t) t^{s-1} dt = (1/sigma) k(u^{1/sigma}) u^{i tau / sigma} du.
    const cplx head = integrate(
        [&](double u) -> cplx {
            if (u <= 0.0) return kernel(0.0) / sigma;
            const double t = std::pow(u, 1.0 / sigma);
            return kernel(t) / sigma * std::polar(1.0, tau / sigma * std::log(u));
        },
        0.0, 1.0);
    const cplx body = integrate(
        [&](double t) -> cplx { return kernel(t) * std::exp((s - 1.0) * std::log(t)); }, 1.0, options.horizon);
    cplx total = head + body;
    if (options.tail == MellinTail::discrete_gauss) total += discrete_gauss_mellin_tail(options.horizon, s);
    return total * rgamma(s);
}

} // namespace dgauss::zeta
